#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "octowrap/rational.hpp"

namespace ocw {

/// Signed generator products i_a * i_b = sign[a][b] * i_{index[a][b]} for the
/// Cayley-Dickson algebra of level r (dimension 2^r). Level 1 is C, level 2
/// the quaternions, level 3 the octonions.
struct MulTable {
    int level = 0;
    std::array<std::array<int8_t, 8>, 8> sign{};
    std::array<std::array<uint8_t, 8>, 8> index{};

    int dim() const { return 1 << level; }
};

/// Builds the generator table for level r by iterated doubling,
/// (u + v*l)(w + x*l) = (u*w - conj(x)*v) + (x*u + v*conj(w))*l,
/// starting from the real line at level 0.
inline MulTable make_table(int r) {
    if (r < 1 || r > 3) throw std::invalid_argument("make_table: level out of range");
    MulTable t;
    t.level = 0;
    t.sign[0][0] = 1;
    t.index[0][0] = 0;
    for (int s = 0; s < r; ++s) {
        MulTable next;
        next.level = s + 1;
        const int h = 1 << s;
        for (int a = 0; a < 2 * h; ++a) {
            for (int b = 0; b < 2 * h; ++b) {
                int sg;
                int ix;
                if (a < h && b < h) {
                    sg = t.sign[a][b];
                    ix = t.index[a][b];
                } else if (a < h) {  // u * (x l) = (x u) l
                    sg = t.sign[b - h][a];
                    ix = t.index[b - h][a] + h;
                } else if (b < h) {  // (v l) * w = (v conj(w)) l
                    sg = t.sign[a - h][b] * (b == 0 ? 1 : -1);
                    ix = t.index[a - h][b] + h;
                } else {  // (v l)(x l) = -conj(x) v
                    sg = -t.sign[b - h][a - h] * (b - h == 0 ? 1 : -1);
                    ix = t.index[b - h][a - h];
                }
                next.sign[a][b] = static_cast<int8_t>(sg);
                next.index[a][b] = static_cast<uint8_t>(ix);
            }
        }
        t = next;
    }
    return t;
}

/// Shared read-only tables for levels 1..3, built once.
inline const MulTable& table(int r) {
    static const MulTable t1 = make_table(1);
    static const MulTable t2 = make_table(2);
    static const MulTable t3 = make_table(3);
    switch (r) {
        case 1: return t1;
        case 2: return t2;
        case 3: return t3;
        default: throw std::invalid_argument("table: level out of range");
    }
}

/// An element of the level-r Cayley-Dickson algebra with scalar coordinates S
/// over the standard generators i_0..i_{2^r-1}. Immutable in spirit: all
/// operations return new values.
template <class S>
struct Num {
    int level = 3;
    std::array<S, 8> c{};

    Num() = default;
    explicit Num(int r) : level(r) {
        if (r < 1 || r > 3) throw std::invalid_argument("cayley: level out of range");
    }
    Num(int r, std::initializer_list<S> coords) : Num(r) {
        int j = 0;
        for (const S& v : coords) {
            if (j >= dim()) throw std::invalid_argument("cayley: too many coordinates");
            c[j++] = v;
        }
    }

    int dim() const { return 1 << level; }

    static Num zero(int r) { return Num(r); }
    static Num one(int r) {
        Num z(r);
        z.c[0] = S(1);
        return z;
    }
    static Num gen(int r, int j) {
        Num z(r);
        if (j < 0 || j >= z.dim()) throw std::invalid_argument("cayley: generator index");
        z.c[j] = S(1);
        return z;
    }
    static Num real(int r, S v) {
        Num z(r);
        z.c[0] = v;
        return z;
    }

    const S& operator[](int j) const { return c[j]; }
    S& operator[](int j) { return c[j]; }

    bool is_zero() const {
        for (int j = 0; j < dim(); ++j)
            if (!(c[j] == S(0))) return false;
        return true;
    }
};

namespace detail {
inline void check_levels(int a, int b, const char* op) {
    if (a != b) throw std::invalid_argument(std::string(op) + ": level mismatch");
}
}  // namespace detail

template <class S>
Num<S> operator+(const Num<S>& a, const Num<S>& b) {
    detail::check_levels(a.level, b.level, "add");
    Num<S> r(a.level);
    for (int j = 0; j < r.dim(); ++j) r.c[j] = a.c[j] + b.c[j];
    return r;
}

template <class S>
Num<S> operator-(const Num<S>& a, const Num<S>& b) {
    detail::check_levels(a.level, b.level, "sub");
    Num<S> r(a.level);
    for (int j = 0; j < r.dim(); ++j) r.c[j] = a.c[j] - b.c[j];
    return r;
}

template <class S>
Num<S> operator-(const Num<S>& a) {
    Num<S> r(a.level);
    for (int j = 0; j < r.dim(); ++j) r.c[j] = -a.c[j];
    return r;
}

template <class S>
Num<S> operator*(const S& s, const Num<S>& a) {
    Num<S> r(a.level);
    for (int j = 0; j < r.dim(); ++j) r.c[j] = s * a.c[j];
    return r;
}

template <class S>
Num<S> operator*(const Num<S>& a, const S& s) {
    return s * a;
}

inline Num<double> operator*(double s, const Num<double>& a) {
    Num<double> r(a.level);
    for (int j = 0; j < r.dim(); ++j) r.c[j] = s * a.c[j];
    return r;
}
inline Num<double> operator*(const Num<double>& a, double s) { return s * a; }

/// Table-driven product; bilinear over the scalars.
template <class S>
Num<S> mul(const Num<S>& a, const Num<S>& b) {
    detail::check_levels(a.level, b.level, "mul");
    const MulTable& t = table(a.level);
    Num<S> r(a.level);
    const int n = r.dim();
    for (int j = 0; j < n; ++j) {
        if (a.c[j] == S(0)) continue;
        for (int k = 0; k < n; ++k) {
            if (b.c[k] == S(0)) continue;
            S v = a.c[j] * b.c[k];
            if (t.sign[j][k] < 0)
                r.c[t.index[j][k]] -= v;
            else
                r.c[t.index[j][k]] += v;
        }
    }
    return r;
}

template <class S>
Num<S> operator*(const Num<S>& a, const Num<S>& b) {
    return mul(a, b);
}

template <class S>
Num<S> conj(const Num<S>& a) {
    Num<S> r(a.level);
    r.c[0] = a.c[0];
    for (int j = 1; j < r.dim(); ++j) r.c[j] = -a.c[j];
    return r;
}

template <class S>
S re(const Num<S>& a) {
    return a.c[0];
}

template <class S>
Num<S> im(const Num<S>& a) {
    Num<S> r = a;
    r.c[0] = S(0);
    return r;
}

template <class S>
S norm_sq(const Num<S>& a) {
    S s(0);
    for (int j = 0; j < a.dim(); ++j) s += a.c[j] * a.c[j];
    return s;
}

/// Euclidean scalar product of coordinates, Re(a * conj(b)).
template <class S>
S dot(const Num<S>& a, const Num<S>& b) {
    detail::check_levels(a.level, b.level, "dot");
    S s(0);
    for (int j = 0; j < a.dim(); ++j) s += a.c[j] * b.c[j];
    return s;
}

inline double norm(const Num<double>& a) { return std::sqrt(norm_sq(a)); }

/// Two-sided inverse conj(a)/|a|^2; valid for r <= 3 by alternativity.
template <class S>
Num<S> inverse(const Num<S>& a) {
    S n2 = norm_sq(a);
    if (n2 == S(0)) throw std::domain_error("inverse: division by zero");
    Num<S> r = conj(a);
    for (int j = 0; j < r.dim(); ++j) r.c[j] = r.c[j] / n2;
    return r;
}

template <class S>
Num<S> commutator(const Num<S>& x, const Num<S>& y) {
    return mul(x, y) - mul(y, x);
}

template <class S>
Num<S> associator(const Num<S>& x, const Num<S>& y, const Num<S>& z) {
    return mul(mul(x, y), z) - mul(x, mul(y, z));
}

using CN = Num<double>;
using CNQ = Num<Rational>;

inline CN to_double_num(const CNQ& a) {
    CN r(a.level);
    for (int j = 0; j < r.dim(); ++j) r.c[j] = a.c[j].to_double();
    return r;
}

/// A purely imaginary unit Cayley-Dickson number. Selects the complex plane
/// C_M = R + M R and parametrizes residue functionals.
struct Direction {
    CN value;

    explicit Direction(const CN& v) : value(v) {
        if (std::abs(re(v)) > 1e-12) throw std::invalid_argument("direction: not purely imaginary");
        double n = norm(v);
        if (std::abs(n - 1.0) > 1e-12) {
            if (n == 0.0) throw std::invalid_argument("direction: zero vector");
            value = (1.0 / n) * v;
        }
    }
    static Direction gen(int r, int j) {
        if (j < 1) throw std::invalid_argument("direction: generator must be imaginary");
        return Direction(CN::gen(r, j));
    }
    int level() const { return value.level; }
};

/// Normalizes the imaginary part of z into a Direction. Fails on real z.
inline Direction imag_direction(const CN& z) {
    CN v = im(z);
    double n = norm(v);
    if (n == 0.0) throw std::domain_error("imag_direction: real input has no direction");
    return Direction((1.0 / n) * v);
}

struct Polar {
    double rho;
    double theta;  // turns, in [0, 1/2)
    Direction M;
};

/// z = rho (cos 2*pi*theta + M sin 2*pi*theta) with M = Im z/|Im z| and
/// theta in [0,1/2]. Negative reals sit on the branch cut and are rejected.
inline Polar polar(const CN& z) {
    double rho = norm(z);
    if (rho == 0.0) throw std::domain_error("polar: zero has no polar form");
    double y = norm(im(z));
    if (y == 0.0) {
        if (re(z) < 0.0) throw std::domain_error("polar: on branch cut (negative real)");
        return Polar{rho, 0.0, Direction::gen(z.level, 1)};
    }
    double theta = std::atan2(y, re(z)) / (2.0 * M_PI);
    return Polar{rho, theta, imag_direction(z)};
}

/// Applies a complex-plane function through the plane R + M R containing z.
/// Valid for functions given by power series with real coefficients.
template <class F>
CN apply_plane(const CN& z, F&& f, const char* what) {
    double y = norm(im(z));
    std::complex<double> w;
    if (y == 0.0) {
        w = f(std::complex<double>(re(z), 0.0));
        if (std::abs(w.imag()) > 1e-12 * (1.0 + std::abs(w.real())))
            throw std::domain_error(std::string(what) + ": result leaves the real line (branch cut)");
        CN r = CN::zero(z.level);
        r.c[0] = w.real();
        return r;
    }
    w = f(std::complex<double>(re(z), y));
    CN M = imag_direction(z).value;
    CN r = w.imag() * M;
    r.c[0] += w.real();
    return r;
}

inline CN exp_cd(const CN& z) {
    return apply_plane(z, [](std::complex<double> w) { return std::exp(w); }, "exp");
}

/// Principal logarithm, Arg in (0, pi) along Im z/|Im z|. Zero and negative
/// reals are rejected (the cut Q is an error, not a convention).
inline CN ln_cd(const CN& z) {
    if (norm(z) == 0.0) throw std::domain_error("ln: zero argument");
    if (norm(im(z)) == 0.0 && re(z) < 0.0)
        throw std::domain_error("ln: on branch cut (negative real axis)");
    return apply_plane(z, [](std::complex<double> w) { return std::log(w); }, "ln");
}

inline CN pow_real(const CN& z, double alpha) { return exp_cd(alpha * ln_cd(z)); }

/// Integer power by repeated squaring; safe by power associativity.
template <class S>
Num<S> powi(const Num<S>& z, long long n) {
    if (n == 0) return Num<S>::one(z.level);
    if (n < 0) return powi(inverse(z), -n);
    Num<S> base = z;
    Num<S> acc = Num<S>::one(z.level);
    long long k = n;
    while (k > 0) {
        if (k & 1) acc = mul(acc, base);
        base = mul(base, base);
        k >>= 1;
    }
    return acc;
}

struct MoufangReport {
    double m1;
    double m2;
    double m3;
    double max() const { return std::max(m1, std::max(m2, m3)); }
};

/// Deviations of the three Moufang identities
///   (x y x) z = x (y (x z)),  z (x y x) = ((z x) y) x,  (x y)(z x) = x ((y z) x).
inline MoufangReport moufang_check(const CN& x, const CN& y, const CN& z) {
    CN xyx = mul(mul(x, y), x);
    MoufangReport r{};
    r.m1 = norm(mul(xyx, z) - mul(x, mul(y, mul(x, z))));
    r.m2 = norm(mul(z, xyx) - mul(mul(mul(z, x), y), x));
    r.m3 = norm(mul(mul(x, y), mul(z, x)) - mul(x, mul(mul(y, z), x)));
    return r;
}

struct PlaneSplit {
    CN x;          // component in C_M
    double y;      // height over the plane
    CN N;          // unit direction orthogonal to M (canonical when y = 0)
    bool in_plane; // true when y = 0 and N is the canonical placeholder
};

/// Lowest-index generator direction orthogonal to M (after projecting M out).
inline CN canonical_orthogonal(const Direction& M) {
    int r = M.level();
    for (int j = 1; j < (1 << r); ++j) {
        CN g = CN::gen(r, j);
        CN rest = g - dot(g, M.value) * M.value;
        double n = norm(rest);
        if (n > 1e-9) return (1.0 / n) * rest;
    }
    throw std::logic_error("canonical_orthogonal: exhausted generators");
}

/// z = x + y N with x in C_M, y real, N a unit imaginary direction with N _|_ M.
inline PlaneSplit plane_decompose(const CN& z, const Direction& M) {
    detail::check_levels(z.level, M.level(), "plane_decompose");
    CN x = M.value * dot(im(z), M.value);
    x.c[0] += re(z);
    CN rest = z - x;
    double y = norm(rest);
    if (y <= 1e-14 * (1.0 + norm(z))) {
        return PlaneSplit{x, 0.0, canonical_orthogonal(M), true};
    }
    return PlaneSplit{x, y, (1.0 / y) * rest, false};
}

/// Complex-plane view of an element of C_M: z = u + v M.
inline std::complex<double> as_complex(const CN& z, const Direction& M) {
    return {re(z), dot(im(z), M.value)};
}

/// Embeds u + i v back into C_M.
inline CN from_complex(std::complex<double> w, const Direction& M) {
    CN r = w.imag() * M.value;
    r.c[0] += w.real();
    return r;
}

}  // namespace ocw

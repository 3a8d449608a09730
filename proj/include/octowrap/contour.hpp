#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "octowrap/phrase.hpp"

namespace ocw {

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

struct Polyline {
    std::vector<CN> vertices;
};

/// Circle of radius rho about `center` in the plane center + C_M, traversed
/// `winding` times (sign = orientation).
struct PlaneCircle {
    CN center;
    double radius;
    Direction M;
    int winding;
};

using Path = std::variant<Polyline, PlaneCircle>;

inline int path_level(const Path& path) {
    if (const auto* c = std::get_if<PlaneCircle>(&path)) return c->center.level;
    return std::get<Polyline>(path).vertices.at(0).level;
}

inline CN path_point(const PlaneCircle& c, double t) {
    return c.center + from_complex(std::polar(c.radius, 2.0 * M_PI * c.winding * t), c.M);
}

inline CN path_velocity(const PlaneCircle& c, double t) {
    std::complex<double> u = std::polar(c.radius, 2.0 * M_PI * c.winding * t);
    std::complex<double> du = std::complex<double>(0.0, 2.0 * M_PI * c.winding) * u;
    return from_complex(du, c.M);
}

/// Sampled parametric curve with piecewise-linear interpolation.
inline Polyline sample_path(const std::function<CN(double)>& gamma, int samples) {
    Polyline p;
    for (int j = 0; j <= samples; ++j) p.vertices.push_back(gamma(static_cast<double>(j) / samples));
    return p;
}

inline double path_scale(const Path& path) {
    if (const auto* c = std::get_if<PlaneCircle>(&path)) return c->radius;
    const auto& v = std::get<Polyline>(path).vertices;
    double len = 0.0;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) len += norm(v[j + 1] - v[j]);
    return std::max(len / (2.0 * M_PI), 1e-12);
}

/// Common plane of the path relative to a base point: all points must lie in
/// base + C_M for a single direction M.
inline std::optional<Direction> path_plane(const Path& path, const CN& base) {
    std::vector<CN> probe;
    if (const auto* c = std::get_if<PlaneCircle>(&path)) {
        if (!plane_decompose(c->center - base, c->M).in_plane) return std::nullopt;
        return c->M;
    }
    const auto& v = std::get<Polyline>(path).vertices;
    std::optional<Direction> M;
    for (const CN& p : v) {
        CN w = p - base;
        if (norm(im(w)) < 1e-12) continue;
        if (!M) M = imag_direction(w);
        if (!plane_decompose(w, *M).in_plane) return std::nullopt;
    }
    if (!M) M = Direction::gen(base.level, 1);  // path on the real axis
    return M;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Legendre quadrature (7 point, bisection, deterministic
// left-to-right refinement).
// ---------------------------------------------------------------------------

struct QuadratureError : std::runtime_error {
    CN achieved;
    QuadratureError(const std::string& w, const CN& a) : std::runtime_error(w), achieved(a) {}
};

namespace detail {

constexpr double kGlNode[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                               0.0,                 0.4058451513773972,  0.7415311855993945,
                               0.9491079123427585};
constexpr double kGlWeight[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                                 0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                                 0.1294849661688697};

inline CN gl7(const std::function<CN(double)>& g, double a, double b, int level) {
    CN acc = CN::zero(level);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int j = 0; j < 7; ++j) acc = acc + kGlWeight[j] * g(mid + half * kGlNode[j]);
    return half * acc;
}

inline CN adaptive(const std::function<CN(double)>& g, double a, double b, double tol, int level,
                   int depth) {
    CN whole = gl7(g, a, b, level);
    double mid = 0.5 * (a + b);
    CN L = gl7(g, a, mid, level);
    CN R = gl7(g, mid, b, level);
    CN refined = L + R;
    double err = norm(refined - whole);
    if (err <= tol || depth >= 30) {
        if (err > tol)
            throw QuadratureError("integrate: no convergence after max refinement", refined);
        return refined;
    }
    CN left = adaptive(g, a, mid, 0.5 * tol, level, depth + 1);
    CN right = adaptive(g, mid, b, 0.5 * tol, level, depth + 1);
    return left + right;
}

}  // namespace detail

/// The operator-valued integrand f_hat(z).h; the line integral is
/// int_0^1 f_hat(gamma(t)).gamma'(t) dt.
using Integrand = std::function<CN(const CN& z, const CN& h)>;

/// Parametrized form; t is the global path parameter in [0,1], needed by
/// integrands that track a logarithm branch continuously along the path.
using ParamIntegrand = std::function<CN(double t, const CN& z, const CN& h)>;

inline CN integrate_param(const ParamIntegrand& fhat, const Path& path, double tol) {
    int level = path_level(path);
    if (const auto* c = std::get_if<PlaneCircle>(&path)) {
        auto g = [&](double t) { return fhat(t, path_point(*c, t), path_velocity(*c, t)); };
        int pieces = 4 * std::max(1, std::abs(c->winding));
        CN acc = CN::zero(level);
        for (int j = 0; j < pieces; ++j)
            acc = acc + detail::adaptive(g, static_cast<double>(j) / pieces,
                                         static_cast<double>(j + 1) / pieces, tol / pieces, level, 0);
        return acc;
    }
    const auto& v = std::get<Polyline>(path).vertices;
    if (v.size() < 2) return CN::zero(level);
    CN acc = CN::zero(level);
    double tol_piece = tol / static_cast<double>(v.size() - 1);
    double tglobal = 0.0, tstep = 1.0 / static_cast<double>(v.size() - 1);
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
        CN a = v[j], b = v[j + 1];
        CN vel = b - a;
        double t0 = tglobal;
        auto g = [&](double t) { return fhat(t0 + t * tstep, a + t * vel, vel); };
        acc = acc + detail::adaptive(g, 0.0, 1.0, tol_piece, level, 0);
        tglobal += tstep;
    }
    return acc;
}

inline CN integrate_operator(const Integrand& fhat, const Path& path, double tol) {
    return integrate_param(
        [&fhat](double, const CN& z, const CN& h) { return fhat(z, h); }, path, tol);
}

// ---------------------------------------------------------------------------
// Phrase integrands.
//
// Terms with a phrase antiderivative use the exact slot operator on any
// rectifiable path. Terms with a logarithmic obstruction are supported on
// paths inside a single plane center + C_M; single-factor terms reduce to
// { a (w^n h) b } pointwise, multi-factor terms run the left algorithm with
// a (alpha + beta Ln w) w^e head chunk, where Ln is continued analytically
// (supported on circles centered at the pole).
// ---------------------------------------------------------------------------

namespace detail {

// (alpha + beta ln) * z^e closed under antidifferentiation away from e = -1;
// at e = -1 a fresh logarithm appears (beta must still be zero there).
struct LogPower {
    double alpha = 1.0;
    double beta = 0.0;
    long long e = 0;
};

inline LogPower integrate_logpower(const LogPower& p) {
    if (p.e == -1) {
        if (p.beta != 0.0) throw std::domain_error("integrand: iterated logarithm");
        return LogPower{0.0, p.alpha, 0};
    }
    double q = static_cast<double>(p.e + 1);
    return LogPower{(p.alpha - p.beta / q) / q, p.beta / q, p.e + 1};
}

struct LogAddend {
    double coef;
    LogPower head;                 // chunk 1
    std::vector<long long> rest;   // chunks 2..k
};

inline void left_antider_log(const std::vector<long long>& exps, int m, long long l,
                             std::vector<LogAddend>& out, double scale,
                             std::vector<long long> tail) {
    if (m == 1) {
        LogPower h{1.0, 0.0, exps[0]};
        for (long long j = 0; j < l; ++j) h = integrate_logpower(h);
        LogAddend a;
        a.coef = scale;
        a.head = h;
        a.rest = std::move(tail);
        out.push_back(std::move(a));
        return;
    }
    long long nk = exps[m - 1];
    if (nk < 0) throw std::domain_error("integrand: non-polynomial trailing factor");
    for (long long s = 0; s <= nk; ++s) {
        double c = (s % 2 == 0 ? 1.0 : -1.0) * binom(s + l - 1, s) * falling(nk, s);
        if (c == 0.0) continue;
        std::vector<long long> tail2{nk - s};
        tail2.insert(tail2.end(), tail.begin(), tail.end());
        left_antider_log(exps, m - 1, l + s, out, scale * c, tail2);
    }
}

inline CN eval_term_factors(const Term& t, const std::vector<CN>& factor_values) {
    const int k = t.factors();
    std::vector<CN> leaves(2 * k + 1, CN::zero(t.level));
    for (int j = 0; j <= k; ++j) leaves[2 * j] = t.coeffs[j];
    for (int f = 0; f < k; ++f) leaves[2 * f + 1] = factor_values[f];
    return t.tree.fold(leaves, [](const CN& a, const CN& b) { return mul(a, b); });
}

}  // namespace detail

/// Per-term integrand selection for a phrase along a given path.
class PhraseIntegrand {
public:
    PhraseIntegrand(const Phrase& p, const Path& path) : level_(p.level) {
        for (const Term& t : p.terms) {
            bool done = false;
            try {
                Phrase anti = antiderivative_left(Phrase(p.level, {t}), 1);
                exact_.emplace_back(anti);
                done = true;
            } catch (const std::domain_error&) {
            }
            if (done) continue;
            auto M = path_plane(path, t.center);
            if (!M)
                throw std::domain_error(
                    "integrate: logarithmic term requires a path inside one plane");
            if (t.factors() == 1) {
                plane_single_.push_back({t, *M});
                continue;
            }
            bool conj_all = t.conj_flags[0];
            for (bool f : t.conj_flags)
                if (f != conj_all)
                    throw std::domain_error("integrate: unsupported mixed-conjugation term");
            // multi-factor log head: the analytic log continuation is only
            // implemented for circles centered at the pole
            const auto* c = std::get_if<PlaneCircle>(&path);
            if (!c || norm(c->center - t.center) > 1e-12 * (1.0 + norm(c->center)))
                throw std::domain_error(
                    "integrate: multi-factor logarithmic term requires a circle about its pole");
            PlaneLog pl;
            pl.term = t;
            pl.M = *M;
            pl.conj = conj_all;
            pl.circle = *c;
            detail::left_antider_log(t.exps, t.factors(), 1, pl.addends, 1.0, {});
            plane_log_.push_back(std::move(pl));
        }
    }

    CN operator()(double t, const CN& z, const CN& h) const {
        CN acc = CN::zero(level_);
        for (const DerivativeOp& op : exact_) acc = acc + op.apply(z, h);
        for (const auto& [tm, M] : plane_single_) {
            CN w = z - tm.center;
            CN slot = tm.conj_flags[0] ? mul(powi(conj(w), tm.exps[0]), conj(h))
                                       : mul(powi(w, tm.exps[0]), h);
            acc = acc + eval_term_slot(tm, z, 0, slot);
        }
        for (const PlaneLog& pl : plane_log_) acc = acc + pl.value(t, z, h);
        return acc;
    }

private:
    struct PlaneLog {
        Term term;
        Direction M{CN::gen(3, 1)};
        bool conj = false;
        PlaneCircle circle{CN::zero(3), 1.0, Direction::gen(3, 1), 1};
        std::vector<detail::LogAddend> addends;

        // Ln(gamma(t) - center) continued along the circle: the radius is
        // fixed and the angle grows linearly with the parameter.
        CN log_cont(double t) const {
            CN out = (2.0 * M_PI * circle.winding * t) * M.value;
            out.c[0] += std::log(circle.radius);
            return out;
        }

        CN value(double tpar, const CN& z, const CN& h) const {
            const Term& t = term;
            CN w = z - t.center;
            CN weff = conj ? ocw::conj(w) : w;
            CN heff = conj ? ocw::conj(h) : h;
            CN L = conj ? ocw::conj(log_cont(tpar)) : log_cont(tpar);
            const int k = t.factors();
            CN acc = CN::zero(t.level);
            for (const detail::LogAddend& a : addends) {
                // face values of every chunk
                std::vector<CN> face(k);
                face[0] = mul(a.head.alpha * CN::one(t.level) + a.head.beta * L,
                              powi(weff, a.head.e));
                for (int c2 = 1; c2 < k; ++c2) face[c2] = powi(weff, a.rest[c2 - 1]);
                // derivative hits one chunk at a time
                for (int c2 = 0; c2 < k; ++c2) {
                    std::vector<CN> vals = face;
                    if (c2 == 0) {
                        double e = static_cast<double>(a.head.e);
                        CN g = (a.head.alpha * e + a.head.beta) * CN::one(t.level) +
                               (a.head.beta * e) * L;
                        vals[0] = mul(mul(g, powi(weff, a.head.e - 1)), heff);
                    } else {
                        long long e = a.rest[c2 - 1];
                        if (e == 0) continue;
                        vals[c2] = static_cast<double>(e) * mul(powi(weff, e - 1), heff);
                    }
                    acc = acc + a.coef * detail::eval_term_factors(t, vals);
                }
            }
            return acc;
        }
    };

    int level_;
    std::vector<DerivativeOp> exact_;
    std::vector<std::pair<Term, Direction>> plane_single_;
    std::vector<PlaneLog> plane_log_;
};

/// Poles of a phrase: centers of terms carrying negative exponents.
inline std::vector<CN> phrase_poles(const Phrase& p) {
    std::vector<CN> poles;
    for (const Term& t : p.terms) {
        bool sing = false;
        for (long long e : t.exps)
            if (e < 0) sing = true;
        if (!sing) continue;
        bool seen = false;
        for (const CN& q : poles)
            if (norm(q - t.center) < 1e-14) seen = true;
        if (!seen) poles.push_back(t.center);
    }
    return poles;
}

namespace detail {

inline void check_pole_distance(const Phrase& p, const Path& path, double tol) {
    auto poles = phrase_poles(p);
    if (poles.empty()) return;
    double threshold = std::sqrt(tol) * path_scale(path);
    for (const CN& pole : poles) {
        double best = 1e300;
        for (int j = 0; j <= 256; ++j) {
            double t = j / 256.0;
            CN pt = std::holds_alternative<PlaneCircle>(path)
                        ? path_point(std::get<PlaneCircle>(path), t)
                        : [&] {
                              const auto& v = std::get<Polyline>(path).vertices;
                              double s = t * (v.size() - 1);
                              std::size_t i = std::min(static_cast<std::size_t>(s), v.size() - 2);
                              double frac = s - static_cast<double>(i);
                              return v[i] + frac * (v[i + 1] - v[i]);
                          }();
            best = std::min(best, norm(pt - pole));
        }
        if (best < threshold) throw std::domain_error("integrate: pole-proximity");
    }
}

}  // namespace detail

/// Non-commutative line integral of a phrase along a path.
inline CN integrate(const Phrase& p, const Path& path, double tol = 1e-9) {
    detail::check_pole_distance(p, path, tol);
    PhraseIntegrand fhat(p, path);
    return integrate_param(
        [&fhat](double t, const CN& z, const CN& h) { return fhat(t, z, h); }, path, tol);
}

inline CN integrate(const Integrand& fhat, const Path& path, double tol = 1e-9) {
    return integrate_operator(fhat, path, tol);
}

// ---------------------------------------------------------------------------
// Mean direction and winding
// ---------------------------------------------------------------------------

/// Sign convention: M is reported with its first nonzero coordinate positive
/// and the orientation carried by the signed winding count.
inline std::pair<Direction, int> normalize_direction_sign(const Direction& M, int j) {
    for (int c = 1; c < M.value.dim(); ++c) {
        if (std::abs(M.value.c[c]) > 1e-12) {
            if (M.value.c[c] < 0.0) return {Direction(-1.0 * M.value), -j};
            break;
        }
    }
    return {M, j};
}

/// Accumulated winding vector of a closed path about z0, as the I_r-valued
/// integral of d Ln(z - z0) / (2 pi).
inline CN winding_vector(const Path& path, const CN& z0) {
    int level = path_level(path);
    if (const auto* c = std::get_if<PlaneCircle>(&path)) {
        PlaneSplit s = plane_decompose(z0 - c->center, c->M);
        if (s.in_plane) {
            double d = std::abs(as_complex(z0 - c->center, c->M));
            if (std::abs(d - c->radius) < 1e-12 * (1.0 + c->radius))
                throw std::domain_error("winding: path passes through z0");
            if (d < c->radius) return static_cast<double>(c->winding) * c->M.value;
            return CN::zero(level);
        }
        // z0 off the circle plane: fall through to the sampled accumulation
    }
    std::vector<CN> pts;
    if (const auto* c = std::get_if<PlaneCircle>(&path)) {
        int n = 64 * std::max(1, std::abs(c->winding));
        for (int j = 0; j <= n; ++j) pts.push_back(path_point(*c, static_cast<double>(j) / n));
    } else {
        pts = std::get<Polyline>(path).vertices;
    }
    CN acc = CN::zero(level);
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        CN a = pts[j] - z0, b = pts[j + 1] - z0;
        double na = norm(a), nb = norm(b);
        if (na < 1e-12 || nb < 1e-12) throw std::domain_error("winding: path passes through z0");
        // subdivide so each step subtends a small angle
        int steps = 1 + static_cast<int>(norm(b - a) / (0.2 * std::min(na, nb)));
        CN prev = a;
        for (int s = 1; s <= steps; ++s) {
            CN cur = a + (static_cast<double>(s) / steps) * (b - a);
            CN ratio = mul(cur, inverse(prev));
            acc = acc + im(ln_cd(ratio));
            prev = cur;
        }
    }
    return (1.0 / (2.0 * M_PI)) * acc;
}

/// Mean direction and winding count of a closed path about z0.
inline std::pair<Direction, int> mean_direction(const Path& path, const CN& z0) {
    if (const auto* c = std::get_if<PlaneCircle>(&path)) {
        PlaneSplit s = plane_decompose(z0 - c->center, c->M);
        if (s.in_plane) {
            double d = std::abs(as_complex(z0 - c->center, c->M));
            if (std::abs(d - c->radius) < 1e-12 * (1.0 + c->radius))
                throw std::domain_error("mean_direction: path passes through z0");
            if (d < c->radius) return normalize_direction_sign(c->M, c->winding);
        }
        throw std::domain_error("mean_direction: no winding about z0");
    }
    CN v = winding_vector(path, z0);
    double n = norm(v);
    if (n < 0.5) throw std::domain_error("mean_direction: no winding about z0");
    double jr = n;
    int j = static_cast<int>(std::llround(jr));
    if (std::abs(jr - j) > 1e-6)
        throw std::domain_error("mean_direction: winding does not converge to an integer");
    return normalize_direction_sign(Direction((1.0 / n) * v), j);
}

// ---------------------------------------------------------------------------
// Residues
// ---------------------------------------------------------------------------

/// Symbolic residue of a phrase at z0 in direction M via the plane rules:
/// total degree != -1 contributes zero, the (s,m) = (-1,0) form contributes
/// Phi(M), the (0,-1) form Phi(conj M), single factors use the slot rule.
inline CN residue_symbolic(const Phrase& p, const CN& z0, const Direction& M) {
    CN acc = CN::zero(p.level);
    for (const Term& t : p.terms) {
        if (norm(t.center - z0) > 1e-12 * (1.0 + norm(z0))) continue;  // holomorphic at z0
        if (t.factors() == 0) continue;
        if (t.total_degree() != -1) continue;
        if (t.factors() == 1) {
            CN dirval = t.conj_flags[0] ? -1.0 * M.value : M.value;
            acc = acc + eval_term_slot(t, z0, 0, dirval);
            continue;
        }
        auto forms = plane_reduce(t, M);
        if (forms.empty())
            throw std::domain_error("residue rule inapplicable; use residue_numeric");
        for (const PlaneForm& pf : forms) {
            if (pf.s == -1 && pf.m == 0)
                acc = acc + pf.phi(M.value);
            else if (pf.s == 0 && pf.m == -1)
                acc = acc + pf.phi(-1.0 * M.value);
        }
    }
    return acc;
}

/// The residue functional stored through its values on the imaginary
/// generators; R-homogeneous and I_r-additive by construction.
struct ResidueValue {
    int level;
    std::vector<CN> basis_values;  // index j-1 holds the value at i_j

    CN at(const CN& W) const {
        CN acc = CN::zero(level);
        for (int j = 1; j < (1 << level); ++j) acc = acc + W.c[j] * basis_values[j - 1];
        return acc;
    }
};

inline ResidueValue residue_functional(const Phrase& p, const CN& z0) {
    ResidueValue rv{p.level, {}};
    for (int j = 1; j < (1 << p.level); ++j)
        rv.basis_values.push_back(residue_symbolic(p, z0, Direction::gen(p.level, j)));
    return rv;
}

/// Numeric residue: circle integrals at shrinking radii divided by 2 pi,
/// accepted when the last two estimates agree.
inline CN residue_numeric(const Phrase& p, const CN& z0, const Direction& M,
                          std::vector<double> radii = {}, double tol = 1e-9) {
    if (radii.empty())
        for (int k = 0; k <= 6; ++k) radii.push_back(std::pow(2.0, -k));
    std::optional<CN> prev;
    for (double rho : radii) {
        PlaneCircle c{z0, rho, M, 1};
        CN est = (1.0 / (2.0 * M_PI)) * integrate(p, Path(c), tol);
        if (prev && norm(est - *prev) < 10.0 * tol * (1.0 + norm(est))) return est;
        prev = est;
    }
    throw std::domain_error("residue_numeric: limit not reached (possible branch point)");
}

inline CN residue_numeric(const Integrand& fhat, const CN& z0, const Direction& M,
                          std::vector<double> radii = {}, double tol = 1e-9) {
    if (radii.empty())
        for (int k = 0; k <= 6; ++k) radii.push_back(std::pow(2.0, -k));
    std::optional<CN> prev;
    for (double rho : radii) {
        PlaneCircle c{z0, rho, M, 1};
        CN est = (1.0 / (2.0 * M_PI)) * integrate(fhat, Path(c), tol);
        if (prev && norm(est - *prev) < 10.0 * tol * (1.0 + norm(est))) return est;
        prev = est;
    }
    throw std::domain_error("residue_numeric: limit not reached (possible branch point)");
}

/// Residue at the infinity point over orientation-reversed large circles.
/// Requires decay: every term must have total degree <= -1.
inline CN residue_at_infinity(const Phrase& p, const Direction& M,
                              std::vector<double> radii = {}, double tol = 1e-9) {
    double far = 0.0;
    for (const Term& t : p.terms) {
        if (t.factors() == 0) {
            if (!t.coeffs[0].is_zero())
                throw std::domain_error("residue_at_infinity: integrand does not decay");
            continue;
        }
        if (t.total_degree() > -1)
            throw std::domain_error("residue_at_infinity: integrand does not decay");
        far = std::max(far, norm(t.center));
    }
    if (radii.empty()) radii = {8.0 * (1.0 + far), 16.0 * (1.0 + far), 32.0 * (1.0 + far)};
    std::optional<CN> prev;
    for (double rho : radii) {
        PlaneCircle c{CN::zero(p.level), rho, M, -1};
        CN est = (1.0 / (2.0 * M_PI)) * integrate(p, Path(c), tol);
        if (prev && norm(est - *prev) < 1e3 * tol * (1.0 + norm(est))) return est;
        prev = est;
    }
    throw std::domain_error("residue_at_infinity: divergence");
}

struct ResidueTheoremReport {
    CN integral;
    CN residue_sum;  // 2 pi sum of Res(p_j, f) at the winding functional
    double defect;
};

/// Compares the loop integral against 2 pi times the residues weighted by the
/// winding functional of the loop about each pole.
inline ResidueTheoremReport residue_theorem_check(const Phrase& p, const Path& loop,
                                                  double tol = 1e-9) {
    CN lhs = integrate(p, loop, tol);
    CN rhs = CN::zero(p.level);
    for (const CN& pole : phrase_poles(p)) {
        CN W = winding_vector(loop, pole);
        if (norm(W) < 1e-9) continue;
        ResidueValue rv = residue_functional(p, pole);
        rhs = rhs + rv.at(W);
    }
    rhs = (2.0 * M_PI) * rhs;
    return {lhs, rhs, norm(lhs - rhs)};
}

// ---------------------------------------------------------------------------
// Cauchy-type evaluation
// ---------------------------------------------------------------------------

/// Plane-restricted Cauchy formula: f(z) = (2 pi)^{-1} (int f(zeta)
/// (zeta - z)^{-1} d zeta) conj(M) for z strictly inside the disc.
inline CN cauchy_eval(const Phrase& f, const CN& z, const PlaneCircle& circle,
                      double tol = 1e-9) {
    PlaneSplit s = plane_decompose(z - circle.center, circle.M);
    if (!s.in_plane) throw std::domain_error("cauchy_eval: z outside the circle plane");
    if (std::abs(as_complex(z - circle.center, circle.M)) >= circle.radius * (1.0 - 1e-9))
        throw std::domain_error("cauchy_eval: z outside disc");
    Integrand g = [&](const CN& zeta, const CN& h) {
        return mul(mul(eval(f, zeta), inverse(zeta - z)), h);
    };
    CN I = integrate(g, Path(circle), tol);
    return (1.0 / (2.0 * M_PI)) * mul(I, conj(circle.M.value));
}

// ---------------------------------------------------------------------------
// Divisors and singularity classification
// ---------------------------------------------------------------------------

struct Divisor {
    bool infinite = false;  // +infinity marker (zero phrase)
    long long value = 0;
};

enum class SingularityKind { Removable, Pole, EssentialMarker };

struct SingularityReport {
    Divisor divisor;
    SingularityKind kind;
    long long pole_order = 0;
};

struct AtInfinity {};

inline Divisor divisor(const Phrase& p_raw, const CN& z0) {
    Phrase p = normalize(p_raw);
    if (p.terms.empty()) return {true, 0};
    bool any = false;
    long long mn = 0;
    for (const Term& t : p.terms) {
        if (t.factors() > 0 && norm(t.center - z0) > 1e-12 * (1.0 + norm(z0)))
            throw std::invalid_argument("divisor: phrase must be recentered at z0");
        long long d = t.total_degree();
        mn = any ? std::min(mn, d) : d;
        any = true;
    }
    return {false, mn};
}

inline Divisor divisor(const Phrase& p_raw, AtInfinity) {
    Phrase p = normalize(p_raw);
    if (p.terms.empty()) return {true, 0};
    long long mx = 0;
    bool any = false;
    for (const Term& t : p.terms) {
        long long d = t.total_degree();
        mx = any ? std::max(mx, d) : d;
        any = true;
    }
    return {false, -mx};
}

inline SingularityReport classify_singularity(const Phrase& p, const CN& z0) {
    Divisor d = divisor(p, z0);
    if (d.infinite || d.value >= 0) return {d, SingularityKind::Removable, 0};
    return {d, SingularityKind::Pole, -d.value};
}

inline SingularityReport classify_singularity(const Phrase& p, AtInfinity) {
    Divisor d = divisor(p, AtInfinity{});
    long long beta = -d.value;  // sup of total degrees
    if (d.infinite || beta <= 0) return {d, SingularityKind::Removable, 0};
    return {d, SingularityKind::Pole, beta};
}

// ---------------------------------------------------------------------------
// Integration by parts
// ---------------------------------------------------------------------------

struct PartsReport {
    CN lhs;       // int f1 (f2'.1)
    CN boundary;  // f1 f2 at b minus at a
    CN rhs_int;   // int (f1'.1) f2
    double defect;
};

inline PartsReport integration_by_parts_check(const Phrase& f1, const Phrase& f2,
                                              const Path& path, double tol = 1e-9) {
    CN lhs = integrate(mul_phrases(f1, derivative_at_1(f2)), path, tol);
    CN rhs_int = integrate(mul_phrases(derivative_at_1(f1), f2), path, tol);
    CN a, b;
    if (const auto* c = std::get_if<PlaneCircle>(&path)) {
        a = path_point(*c, 0.0);
        b = path_point(*c, 1.0);
    } else {
        const auto& v = std::get<Polyline>(path).vertices;
        a = v.front();
        b = v.back();
    }
    CN boundary = mul(eval(f1, b), eval(f2, b)) - mul(eval(f1, a), eval(f2, a));
    double defect = norm(lhs - (boundary - rhs_int));
    return {lhs, boundary, rhs_int, defect};
}

}  // namespace ocw

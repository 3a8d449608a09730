#pragma once

#include <random>
#include <string>
#include <vector>

#include "octowrap/contour.hpp"
#include "octowrap/liealg.hpp"
#include "octowrap/phrase.hpp"

namespace ocw {

// ---------------------------------------------------------------------------
// The wrap algebra: phrases tensored with a base Lie algebra over A_r.
// ---------------------------------------------------------------------------

/// [x a, y b] = [x, y] (a b) for Cayley coefficients on real basis elements.
inline std::vector<CN> bracket_cayley(const BaseLieAlgebra& g, const std::vector<CN>& x,
                                      const std::vector<CN>& y) {
    int level = x.at(0).level;
    std::vector<CN> out(g.dim, CN::zero(level));
    for (int a = 0; a < g.dim; ++a) {
        if (x[a].is_zero()) continue;
        for (int b = 0; b < g.dim; ++b) {
            if (y[b].is_zero()) continue;
            CN ab = mul(x[a], y[b]);
            for (int e = 0; e < g.dim; ++e)
                if (g.c[a][b][e] != 0.0) out[e] = out[e] + g.c[a][b][e] * ab;
        }
    }
    return out;
}

inline CN form_cayley(const BaseLieAlgebra& g, const std::vector<CN>& x,
                      const std::vector<CN>& y) {
    int level = x.at(0).level;
    CN out = CN::zero(level);
    for (int a = 0; a < g.dim; ++a) {
        if (x[a].is_zero()) continue;
        for (int b = 0; b < g.dim; ++b) {
            if (y[b].is_zero() || g.form[a][b] == 0.0) continue;
            out = out + g.form[a][b] * mul(x[a], y[b]);
        }
    }
    return out;
}

/// Sum of pairs P (x) x over a base Lie algebra.
struct WrapElement {
    int level = 3;
    const BaseLieAlgebra* g = nullptr;
    std::vector<std::pair<Phrase, std::vector<CN>>> pairs;

    static WrapElement pure(const BaseLieAlgebra& g, const Phrase& P,
                            const std::vector<double>& x, int gen = 0) {
        WrapElement w;
        w.level = P.level;
        w.g = &g;
        std::vector<CN> xc;
        for (double v : x) xc.push_back(v * CN::gen(P.level, gen));
        w.pairs.emplace_back(P, std::move(xc));
        return w;
    }

    WrapElement& operator+=(const WrapElement& o) {
        for (const auto& p : o.pairs) pairs.push_back(p);
        return *this;
    }
};

inline WrapElement wrap_bracket(const WrapElement& a, const WrapElement& b) {
    if (a.g != b.g) throw std::invalid_argument("wrap_bracket: different base algebras");
    detail::check_levels(a.level, b.level, "wrap_bracket");
    WrapElement out;
    out.level = a.level;
    out.g = a.g;
    for (const auto& [P, x] : a.pairs)
        for (const auto& [Q, y] : b.pairs) {
            std::vector<CN> br = bracket_cayley(*a.g, x, y);
            bool zero = true;
            for (const CN& c : br)
                if (!c.is_zero()) zero = false;
            if (zero) continue;
            out.pairs.emplace_back(mul_phrases(P, Q), std::move(br));
        }
    return out;
}

inline WrapElement d_l_wrap(long long l, const WrapElement& a) {
    WrapElement out = a;
    for (auto& [P, x] : out.pairs) P = d_l(P, l);
    return out;
}

/// Evaluation of a wrap element at a point: sum P(z) * x-coefficients, as a
/// vector of Cayley numbers over the base.
inline std::vector<CN> eval_wrap(const WrapElement& a, const CN& z) {
    std::vector<CN> out(a.g->dim, CN::zero(a.level));
    for (const auto& [P, x] : a.pairs) {
        CN pz = eval(P, z);
        for (int e = 0; e < a.g->dim; ++e)
            if (!x[e].is_zero()) out[e] = out[e] + mul(pz, x[e]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The residue 2-cocycle
// ---------------------------------------------------------------------------

/// omega(z0; P (x) x, Q (x) y) = Res(z0, (D P) Q).M scaled by (x|y),
/// extended bilinearly; symbolic residue with numeric fallback.
inline CN cocycle(const CN& z0, const WrapElement& a, const WrapElement& b, const Direction& M,
                  double tol = 1e-9) {
    if (a.g != b.g) throw std::invalid_argument("cocycle: different base algebras");
    CN out = CN::zero(a.level);
    for (const auto& [P, x] : a.pairs)
        for (const auto& [Q, y] : b.pairs) {
            CN xy = form_cayley(*a.g, x, y);
            if (xy.is_zero()) continue;
            Phrase dpq = mul_phrases(derivative_at_1(P), Q);
            CN res;
            try {
                res = residue_symbolic(dpq, z0, M);
            } catch (const std::domain_error&) {
                res = residue_numeric(dpq, z0, M, {}, tol);
            }
            out = out + mul(res, xy);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Central extension and the derivation generator
// ---------------------------------------------------------------------------

/// wrap + kappa K + delta d; pure states attach one generator per component.
struct ExtendedElement {
    WrapElement wrap;
    CN kappa;  // coefficient of the central generator K
    CN delta;  // coefficient of the derivation generator d

    static ExtendedElement make(const WrapElement& w) {
        return {w, CN::zero(w.level), CN::zero(w.level)};
    }
};

/// chi(k, j): 0 when either index is 0 or they agree, 1 otherwise (the grade
/// sign of the superbracket).
inline int grade_sign_exponent(int k, int j) { return (k == 0 || j == 0 || k == j) ? 0 : 1; }

namespace detail {

struct PureView {
    Phrase P;               // real-coefficient phrase
    std::vector<double> x;  // real base coefficients
    int gen;
};

inline std::vector<PureView> pure_states(const WrapElement& w) {
    std::vector<PureView> out;
    for (const auto& [P, x] : w.pairs) {
        for (const Term& t : P.terms)
            for (const CN& c : t.coeffs)
                if (!is_real_scalar(c))
                    throw std::invalid_argument("pure state: phrase coefficients must be real");
        int gen = -1;
        std::vector<double> xr(x.size(), 0.0);
        for (std::size_t e = 0; e < x.size(); ++e) {
            const CN& c = x[e];
            if (c.is_zero()) continue;
            int cg = -1;
            for (int j = 0; j < c.dim(); ++j) {
                if (c.c[j] == 0.0) continue;
                if (cg >= 0) throw std::invalid_argument("pure state: mixed generators");
                cg = j;
            }
            if (gen >= 0 && cg != gen)
                throw std::invalid_argument("pure state: mixed generators across the base");
            gen = cg;
            xr[e] = c.c[cg];
        }
        if (gen < 0) continue;  // zero pair
        out.push_back({P, std::move(xr), gen});
    }
    return out;
}

inline std::vector<std::pair<double, int>> gen_components(const CN& c) {
    std::vector<std::pair<double, int>> out;
    for (int j = 0; j < c.dim(); ++j)
        if (c.c[j] != 0.0) out.emplace_back(c.c[j], j);
    return out;
}

}  // namespace detail

/// The derivation sf d P = (dP/dz).z = -d_0 P.
inline Phrase sf_d(const Phrase& P) {
    Phrase out = d_l(P, 0);
    for (Term& t : out.terms) t.coeffs[0] = -1.0 * t.coeffs[0];
    return out;
}

/// Extended bracket on pure-state decompositions:
///   [kP (x) kx i_k + a i_k K + e i_k d, jQ (x) jy i_j + b i_j K + t i_j d]
///   = kP jQ (x) [kx i_k, jy i_j]
///     + e i_k (sf d jQ) (x) jy i_j - (-1)^{chi(k,j)} t i_j (sf d kP) (x) kx i_k
///     + omega(z0; ...) K.
inline ExtendedElement extended_bracket(const ExtendedElement& A, const ExtendedElement& B,
                                        const CN& z0, const Direction& M, double tol = 1e-9) {
    const WrapElement& aw = A.wrap;
    const WrapElement& bw = B.wrap;
    const BaseLieAlgebra* g = aw.g ? aw.g : bw.g;
    if (!g) throw std::invalid_argument("extended_bracket: no base algebra");
    int level = aw.level;
    ExtendedElement out = ExtendedElement::make(WrapElement{level, g, {}});

    // wrap x wrap and the cocycle
    if (!aw.pairs.empty() && !bw.pairs.empty()) {
        out.wrap += wrap_bracket(aw, bw);
        out.kappa = out.kappa + cocycle(z0, aw, bw, M, tol);
    }
    // d-action of A on B's wrap part: e i_k (sf d jQ) (x) jy i_j
    for (const auto& [e, k] : detail::gen_components(A.delta)) {
        for (const auto& pv : detail::pure_states(bw)) {
            Phrase dq = sf_d(pv.P);
            if (dq.terms.empty()) continue;
            for (Term& t : dq.terms) t.coeffs[0] = mul(e * CN::gen(level, k), t.coeffs[0]);
            WrapElement piece = WrapElement::pure(*g, dq, pv.x, pv.gen);
            out.wrap += piece;
        }
    }
    // d-action of B on A's wrap part, graded sign
    for (const auto& [t, j] : detail::gen_components(B.delta)) {
        for (const auto& pv : detail::pure_states(aw)) {
            Phrase dp = sf_d(pv.P);
            if (dp.terms.empty()) continue;
            double sgn = (grade_sign_exponent(pv.gen, j) % 2 == 0) ? -1.0 : 1.0;
            for (Term& tm : dp.terms)
                tm.coeffs[0] = mul((sgn * t) * CN::gen(level, j), tm.coeffs[0]);
            WrapElement piece = WrapElement::pure(*g, dp, pv.x, pv.gen);
            out.wrap += piece;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Witt and Virasoro relations
// ---------------------------------------------------------------------------

struct WittRow {
    long long k, j, m;
    double defect;  // coefficient defect of ([d_k, d_j] - (k-j) d_{k+j}) z^m
};

/// Operator identity [d_k, d_j] = (k - j) d_{j+k} on monomials z^m.
inline std::vector<WittRow> witt_bracket(long long k, long long j, long long max_m = 8) {
    std::vector<WittRow> rows;
    for (long long m = -max_m; m <= max_m; ++m) {
        Phrase zm = Phrase::zpow(3, m);
        Phrase lhs = d_l(d_l(zm, j), k);
        Phrase rhs_neg = d_l(d_l(zm, k), j);
        Phrase rhs2 = d_l(zm, j + k);
        // collect coefficient of z^{m+j+k} on both sides
        auto coeff = [&](const Phrase& p) {
            double c = 0.0;
            for (const Term& t : p.terms)
                if (t.total_degree() == m + j + k) c += re(t.coeffs[0]);
            return c;
        };
        double lhs_c = coeff(lhs) - coeff(rhs_neg);
        double rhs_c = static_cast<double>(k - j) * coeff(rhs2);
        rows.push_back({k, j, m, std::abs(lhs_c - rhs_c)});
    }
    return rows;
}

struct VirasoroBracket {
    long long d_index;   // j + k
    long long d_coeff;   // j - k
    double c_coeff;      // (j^3 - j)/12 when k = -j, else 0
};

/// [d_j + s c, d_k + t c] = (j - k) d_{j+k} + [(j^3 - j) delta_{j,-k} / 12] c.
inline VirasoroBracket virasoro_bracket(long long j, const CN&, long long k, const CN&) {
    VirasoroBracket out{j + k, j - k, 0.0};
    if (j + k == 0) out.c_coeff = static_cast<double>(j * j * j - j) / 12.0;
    return out;
}

// ---------------------------------------------------------------------------
// Randomized identity suites
// ---------------------------------------------------------------------------

struct SuiteRow {
    std::string identity;
    double defect;
};

namespace detail {

inline Phrase random_real_laurent(std::mt19937_64& rng, int level, long long lo, long long hi,
                                  int terms) {
    std::uniform_int_distribution<long long> e(lo, hi);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    Phrase p(level);
    for (int t = 0; t < terms; ++t)
        p.terms.push_back(Term::power(level, c(rng) * CN::one(level), e(rng)));
    return normalize(p);
}

inline int xi_exponent(int k, int j, int s, int level) {
    // i_k (i_j i_s) = (-1)^xi i_j (i_s i_k)
    CN lhs = mul(CN::gen(level, k), mul(CN::gen(level, j), CN::gen(level, s)));
    CN rhs = mul(CN::gen(level, j), mul(CN::gen(level, s), CN::gen(level, k)));
    if (norm(lhs - rhs) < 1e-12) return 0;
    if (norm(lhs + rhs) < 1e-12) return 1;
    throw std::logic_error("xi: generators do not match up to sign");
}

}  // namespace detail

/// Graded antisymmetry, the graded cyclic identity, the skew symmetry of
/// psi(f', g), and the d_l invariance of the cocycle, each over randomized
/// pure states.
inline std::vector<SuiteRow> cocycle_identity_suite(const BaseLieAlgebra& g, int cases,
                                                    uint64_t seed = 20260810, int level = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> gen_pick(0, (1 << level) - 1);
    std::uniform_int_distribution<int> base_pick(0, g.dim - 1);
    std::uniform_int_distribution<long long> l_pick(-3, 3);
    CN z0 = CN::zero(level);
    Direction M = Direction::gen(level, 1);
    double d12 = 0.0, d14 = 0.0, dpsi = 0.0, ddl = 0.0;

    struct PureGen {
        WrapElement w;
        int gen;
    };
    auto random_pure = [&]() -> PureGen {
        std::vector<double> x(g.dim, 0.0);
        x[base_pick(rng)] = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
        Phrase P = detail::random_real_laurent(rng, level, -4, 4, 2);
        if (P.terms.empty()) P = Phrase::zpow(level, 1);
        int gen = gen_pick(rng);
        return {WrapElement::pure(g, P, x, gen), gen};
    };

    for (int it = 0; it < cases; ++it) {
        PureGen a = random_pure();
        PureGen b = random_pure();
        PureGen c = random_pure();

        // (12): omega(a, b) = (-1)^{chi(k,j)+1} omega(b, a)
        CN wab = cocycle(z0, a.w, b.w, M);
        CN wba = cocycle(z0, b.w, a.w, M);
        double sgn = (grade_sign_exponent(a.gen, b.gen) + 1) % 2 == 0 ? 1.0 : -1.0;
        d12 = std::max(d12, norm(wab - sgn * wba));

        // (14): cyclic sum with the xi signs vanishes
        int xi1 = detail::xi_exponent(a.gen, b.gen, c.gen, level);
        int xi2 = detail::xi_exponent(b.gen, c.gen, a.gen, level);
        CN cyc = cocycle(z0, wrap_bracket(a.w, b.w), c.w, M);
        CN t2 = cocycle(z0, wrap_bracket(b.w, c.w), a.w, M);
        CN t3 = cocycle(z0, wrap_bracket(c.w, a.w), b.w, M);
        cyc = cyc + (xi1 % 2 == 0 ? 1.0 : -1.0) * t2 + ((xi1 + xi2) % 2 == 0 ? 1.0 : -1.0) * t3;
        d14 = std::max(d14, norm(cyc));

        // psi(f', g) = -psi(f, g')
        Phrase f = detail::random_real_laurent(rng, level, -4, 4, 2);
        Phrase h = detail::random_real_laurent(rng, level, -4, 4, 2);
        CN r1 = residue_symbolic(mul_phrases(derivative_at_1(f), h), z0, M);
        CN r2 = residue_symbolic(mul_phrases(f, derivative_at_1(h)), z0, M);
        dpsi = std::max(dpsi, norm(r1 + r2));

        // omega(d_l a, b) + omega(a, d_l b) = 0
        long long l = l_pick(rng);
        CN w1 = cocycle(z0, d_l_wrap(l, a.w), b.w, M);
        CN w2 = cocycle(z0, a.w, d_l_wrap(l, b.w), M);
        ddl = std::max(ddl, norm(w1 + w2));
    }
    return {
        {"graded-antisymmetry", d12},
        {"graded-cyclic", d14},
        {"psi-skew", dpsi},
        {"d_l-invariance", ddl},
    };
}

}  // namespace ocw

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "octowrap/cartan.hpp"
#include "octowrap/liealg.hpp"

namespace ocw {

// ---------------------------------------------------------------------------
// Truncated tensor module T(V) over words of length <= D, with the auxiliary
// algebra generators acting by
//   f_j(a) = v_j (x) a,
//   h(1) = <lambda, h> 1,   h(v_j (x) a) = -<beta_j, h> v_j (x) a + v_j (x) h(a),
//   e_j(1) = 0,             e_k(v_j (x) a) = delta_{kj} gamma_k(a) + v_j (x) e_k(a).
// All matrices are exact rationals in the word basis.
// ---------------------------------------------------------------------------

struct TensorModule {
    int n = 0;
    int depth = 0;
    Realization R;
    QVec lambda;  // coordinate functional on h (length dim_h)
    std::vector<std::vector<int>> words;
    std::map<std::vector<int>, int> index;
    std::vector<QVec> weight;  // functional lambda - sum beta_{j_t} per word

    int size() const { return static_cast<int>(words.size()); }

    Rational weight_at(int w, const QVec& h) const {
        Rational s(0);
        for (int t = 0; t < R.dim_h; ++t) s += weight[w][t] * h[t];
        return s;
    }
};

struct GeneratorAction {
    std::vector<QMat> E;  // n matrices
    std::vector<QMat> F;  // n matrices

    QMat H(const TensorModule& m, const QVec& h) const {
        QMat out(m.size(), QVec(m.size(), Rational(0)));
        for (int w = 0; w < m.size(); ++w) out[w][w] = m.weight_at(w, h);
        return out;
    }
};

inline std::pair<TensorModule, GeneratorAction> build_module(const Realization& R,
                                                             const QVec& lambda, int depth) {
    if (depth < 2) throw std::invalid_argument("build_module: depth must be >= 2");
    TensorModule m;
    m.n = R.n;
    m.depth = depth;
    m.R = R;
    m.lambda = lambda;
    if (static_cast<int>(lambda.size()) != R.dim_h)
        throw std::invalid_argument("build_module: lambda has wrong dimension");
    double budget = 1.0;
    for (int k = 0; k <= depth; ++k) budget += std::pow(static_cast<double>(R.n), k);
    if (budget > 1e5) throw std::invalid_argument("build_module: truncation budget exceeded");
    // enumerate words by length, lexicographic within a length
    m.words.push_back({});
    for (int len = 1; len <= depth; ++len) {
        std::vector<int> w(len, 0);
        while (true) {
            m.words.push_back(w);
            int t = len - 1;
            while (t >= 0 && w[t] == R.n - 1) {
                w[t] = 0;
                --t;
            }
            if (t < 0) break;
            ++w[t];
        }
    }
    for (int i = 0; i < m.size(); ++i) m.index[m.words[i]] = i;
    for (const auto& w : m.words) {
        QVec wt = lambda;
        for (int j : w) wt[j] -= Rational(1);  // beta_j is the coordinate functional e_j
        m.weight.push_back(std::move(wt));
    }

    GeneratorAction act;
    act.F.assign(R.n, QMat(m.size(), QVec(m.size(), Rational(0))));
    act.E.assign(R.n, QMat(m.size(), QVec(m.size(), Rational(0))));
    for (int j = 0; j < R.n; ++j) {
        for (int w = 0; w < m.size(); ++w) {
            if (static_cast<int>(m.words[w].size()) >= depth) continue;  // truncation
            std::vector<int> ext{j};
            ext.insert(ext.end(), m.words[w].begin(), m.words[w].end());
            act.F[j][m.index.at(ext)][w] = Rational(1);
        }
    }
    // e_k column-by-column, recursively over word length
    for (int k = 0; k < R.n; ++k) {
        for (int w = 0; w < m.size(); ++w) {
            const auto& word = m.words[w];
            if (word.empty()) continue;  // e_k(1) = 0
            std::vector<int> tail(word.begin() + 1, word.end());
            int tail_idx = m.index.at(tail);
            if (word[0] == k) {
                // gamma_k acting on the tail: diagonal weight
                act.E[k][tail_idx][w] += m.weight_at(tail_idx, R.coroots[k]);
            }
            // v_{j} (x) e_k(tail): prepend word[0] to every component of E_k(tail)
            for (int r = 0; r < m.size(); ++r) {
                if (act.E[k][r][tail_idx].is_zero()) continue;
                std::vector<int> ext{word[0]};
                ext.insert(ext.end(), m.words[r].begin(), m.words[r].end());
                act.E[k][m.index.at(ext)][w] += act.E[k][r][tail_idx];
            }
        }
    }
    return {std::move(m), std::move(act)};
}

// ---------------------------------------------------------------------------
// Relation checks (exact; restricted to interior words)
// ---------------------------------------------------------------------------

namespace detail {

inline QMat commutator(const QMat& A, const QMat& B) {
    QMat AB = linq::mul(A, B);
    QMat BA = linq::mul(B, A);
    for (std::size_t i = 0; i < AB.size(); ++i)
        for (std::size_t j = 0; j < AB.size(); ++j) AB[i][j] -= BA[i][j];
    return AB;
}

/// Largest absolute entry over columns of words with length <= max_len.
inline Rational max_defect(const QMat& M, const TensorModule& m, int max_len) {
    Rational best(0);
    for (int w = 0; w < m.size(); ++w) {
        if (static_cast<int>(m.words[w].size()) > max_len) continue;
        for (int r = 0; r < m.size(); ++r) {
            Rational a = abs(M[r][w]);
            if (a > best) best = a;
        }
    }
    return best;
}

}  // namespace detail

struct RelationReport {
    Rational ef_defect;      // [e_k, f_j] = delta_{kj} gamma_j
    Rational hh_defect;      // [h, h'] = 0
    Rational he_defect;      // [h, e_j] = <beta_j, h> e_j
    Rational hf_defect;      // [h, f_j] = -<beta_j, h> f_j
    bool all_zero() const {
        return ef_defect.is_zero() && hh_defect.is_zero() && he_defect.is_zero() &&
               hf_defect.is_zero();
    }
};

inline RelationReport check_relations(const TensorModule& m, const GeneratorAction& act) {
    RelationReport rep{Rational(0), Rational(0), Rational(0), Rational(0)};
    const int interior = m.depth - 1;
    // h ranges over the coordinate basis of h
    std::vector<QVec> hs;
    for (int t = 0; t < m.R.dim_h; ++t) {
        QVec h(m.R.dim_h, Rational(0));
        h[t] = Rational(1);
        hs.push_back(h);
    }
    for (int k = 0; k < m.n; ++k)
        for (int j = 0; j < m.n; ++j) {
            QMat C = detail::commutator(act.E[k], act.F[j]);
            if (k == j) {
                QMat Hg = act.H(m, m.R.coroots[j]);
                for (int i = 0; i < m.size(); ++i)
                    for (int w = 0; w < m.size(); ++w) C[i][w] -= Hg[i][w];
            }
            Rational d = detail::max_defect(C, m, interior);
            if (d > rep.ef_defect) rep.ef_defect = d;
        }
    for (std::size_t a = 0; a < hs.size(); ++a)
        for (std::size_t b = a + 1; b < hs.size(); ++b) {
            QMat C = detail::commutator(act.H(m, hs[a]), act.H(m, hs[b]));
            Rational d = detail::max_defect(C, m, interior);
            if (d > rep.hh_defect) rep.hh_defect = d;
        }
    for (const QVec& h : hs)
        for (int j = 0; j < m.n; ++j) {
            QMat C = detail::commutator(act.H(m, h), act.E[j]);
            Rational coef = h[j];  // <beta_j, h>
            for (int i = 0; i < m.size(); ++i)
                for (int w = 0; w < m.size(); ++w) C[i][w] -= coef * act.E[j][i][w];
            Rational d = detail::max_defect(C, m, interior);
            if (d > rep.he_defect) rep.he_defect = d;

            QMat Cf = detail::commutator(act.H(m, h), act.F[j]);
            for (int i = 0; i < m.size(); ++i)
                for (int w = 0; w < m.size(); ++w) Cf[i][w] += coef * act.F[j][i][w];
            Rational df = detail::max_defect(Cf, m, interior);
            if (df > rep.hf_defect) rep.hf_defect = df;
        }
    return rep;
}

/// Structural sparsity: F_j strictly raises word length (zero at the
/// truncation boundary), E_j strictly lowers it.
inline bool check_grading_structure(const TensorModule& m, const GeneratorAction& act) {
    for (int j = 0; j < m.n; ++j)
        for (int w = 0; w < m.size(); ++w) {
            int lw = static_cast<int>(m.words[w].size());
            for (int r = 0; r < m.size(); ++r) {
                int lr = static_cast<int>(m.words[r].size());
                if (!act.F[j][r][w].is_zero() && lr != lw + 1) return false;
                if (!act.E[j][r][w].is_zero() && lr != lw - 1) return false;
            }
            if (lw == m.depth)
                for (int r = 0; r < m.size(); ++r)
                    if (!act.F[j][r][w].is_zero()) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// Root gradation and the multiplicity bound
// ---------------------------------------------------------------------------

struct RootSpaceRow {
    std::vector<long long> beta;  // coefficients over simple roots
    long long height;
    int dim;
    double bound;  // (2n)^height
};

namespace detail {

inline int rank_double(std::vector<std::vector<double>> A, double threshold = 1e-9) {
    int n = static_cast<int>(A.size());
    if (n == 0) return 0;
    int m = static_cast<int>(A[0].size());
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int p = -1;
        double best = threshold;
        for (int i = r; i < n; ++i)
            if (std::abs(A[i][c]) > best) {
                best = std::abs(A[i][c]);
                p = i;
            }
        if (p < 0) continue;
        std::swap(A[r], A[p]);
        for (int i = 0; i < n; ++i) {
            if (i == r) continue;
            double f = A[i][c] / A[r][c];
            if (f == 0.0) continue;
            for (int j = c; j < m; ++j) A[i][j] -= f * A[r][j];
        }
        ++r;
    }
    return r;
}

}  // namespace detail

/// Spans of left-nested bracket words of e-generators grouped by the root
/// (the count vector of indices); reported dimension is the rank of the span.
inline std::vector<RootSpaceRow> root_grade(const TensorModule& m, const GeneratorAction& act,
                                            int h_max) {
    if (h_max > m.depth - 1) throw std::invalid_argument("root_grade: height exceeds depth");
    std::vector<RootSpaceRow> rows;
    for (int h = 1; h <= h_max; ++h) {
        // all index sequences of length h
        std::map<std::vector<long long>, std::vector<std::vector<double>>> groups;
        std::vector<int> seq(h, 0);
        while (true) {
            QMat B = act.E[seq[0]];
            for (int t = 1; t < h; ++t) B = detail::commutator(B, act.E[seq[t]]);
            std::vector<long long> beta(m.n, 0);
            for (int j : seq) ++beta[j];
            std::vector<double> flat;
            flat.reserve(static_cast<std::size_t>(m.size()) * m.size());
            for (const auto& row : B)
                for (const Rational& v : row) flat.push_back(v.to_double());
            groups[beta].push_back(std::move(flat));
            int t = h - 1;
            while (t >= 0 && seq[t] == m.n - 1) {
                seq[t] = 0;
                --t;
            }
            if (t < 0) break;
            ++seq[t];
        }
        for (auto& [beta, vecs] : groups) {
            RootSpaceRow row;
            row.beta = beta;
            row.height = h;
            row.dim = detail::rank_double(vecs);
            row.bound = std::pow(2.0 * m.n, h);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Chevalley involution on formal bracket words
// ---------------------------------------------------------------------------

struct FormalWord {
    enum Kind { GenE, GenF, GenH };
    struct Node {
        bool leaf;
        Kind kind;
        int idx;
        int l, r;
    };
    std::vector<Node> nodes;
    int root = -1;
    int sign = 1;

    static FormalWord leaf(Kind k, int idx) {
        FormalWord w;
        w.nodes.push_back({true, k, idx, -1, -1});
        w.root = 0;
        return w;
    }
    static FormalWord bracket(const FormalWord& a, const FormalWord& b) {
        FormalWord w = a;
        int off = static_cast<int>(w.nodes.size());
        for (Node n : b.nodes) {
            if (!n.leaf) {
                n.l += off;
                n.r += off;
            }
            w.nodes.push_back(n);
        }
        w.nodes.push_back({false, GenE, 0, a.root, b.root + off});
        w.root = static_cast<int>(w.nodes.size()) - 1;
        w.sign = a.sign * b.sign;
        return w;
    }
    int leaf_count() const {
        int c = 0;
        for (const Node& n : nodes)
            if (n.leaf) ++c;
        return c;
    }
};

/// omega(e_j) = -f_j, omega(f_j) = -e_j, omega(h) = -h, extended over
/// brackets; the overall sign is (-1)^{number of leaves}.
inline FormalWord chevalley_involution(const FormalWord& w) {
    FormalWord out = w;
    for (auto& n : out.nodes) {
        if (!n.leaf) continue;
        if (n.kind == FormalWord::GenE)
            n.kind = FormalWord::GenF;
        else if (n.kind == FormalWord::GenF)
            n.kind = FormalWord::GenE;
    }
    if (w.leaf_count() % 2 == 1) out.sign = -out.sign;
    return out;
}

/// Expands a formal word to its matrix on the module (oracle for the
/// involution tests). h-leaves act as H(gamma_idx).
inline QMat expand_word(const FormalWord& w, const TensorModule& m, const GeneratorAction& act,
                        int node = -1) {
    if (node < 0) node = w.root;
    const auto& n = w.nodes[node];
    if (n.leaf) {
        switch (n.kind) {
            case FormalWord::GenE: return act.E[n.idx];
            case FormalWord::GenF: return act.F[n.idx];
            default: return act.H(m, m.R.coroots[n.idx]);
        }
    }
    return detail::commutator(expand_word(w, m, act, n.l), expand_word(w, m, act, n.r));
}

// ---------------------------------------------------------------------------
// Heisenberg Casimir (A = 0)
// ---------------------------------------------------------------------------

struct CasimirReport {
    Rational commutator_defect_e;  // max over k of [Omega, E_k] on interior
    Rational commutator_defect_f;
    Rational vacuum_expected;      // (lambda + 2 rho | lambda) with rho = 0
    Rational vacuum_actual;        // coefficient of the vacuum in Omega(1)
    bool vacuum_ok;
};

/// A = 0 module with h = span{gamma_j, d_j}: d_j is the j-th coordinate
/// direction so that [d_j, e_k] = delta_{jk} e_k; the form pairs
/// (gamma_j|d_j) = 1 and the Casimir is
///   Omega = 2 sum_j gamma_j d_j + 2 sum_j f_j e_j.
///
/// The free tensor module represents the auxiliary algebra where [f_j, f_k]
/// is nonzero; the Casimir statement lives on modules of the quotient, so the
/// action here is the symmetric (Fock) one: words are monomial multi-indices.
inline CasimirReport heisenberg_casimir(int n, const QVec& lambda_gamma, const QVec& lambda_d,
                                        int depth) {
    // basis: multi-indices alpha with |alpha| <= depth
    std::vector<std::vector<int>> basis;
    std::map<std::vector<int>, int> index;
    std::vector<int> alpha(n, 0);
    std::function<void(int, int)> enumerate = [&](int pos, int remaining) {
        if (pos == n) {
            basis.push_back(alpha);
            return;
        }
        for (int a = 0; a <= remaining; ++a) {
            alpha[pos] = a;
            enumerate(pos + 1, remaining - a);
        }
        alpha[pos] = 0;
    };
    enumerate(0, depth);
    std::stable_sort(basis.begin(), basis.end(), [](const auto& a, const auto& b) {
        int sa = 0, sb = 0;
        for (int x : a) sa += x;
        for (int x : b) sb += x;
        return sa < sb;
    });
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
    const int sz = static_cast<int>(basis.size());
    auto degree = [&](int w) {
        int s = 0;
        for (int x : basis[w]) s += x;
        return s;
    };

    std::vector<QMat> E(n, QMat(sz, QVec(sz, Rational(0))));
    std::vector<QMat> F(n, QMat(sz, QVec(sz, Rational(0))));
    for (int j = 0; j < n; ++j)
        for (int w = 0; w < sz; ++w) {
            if (degree(w) < depth) {
                auto up = basis[w];
                ++up[j];
                F[j][index.at(up)][w] = Rational(1);
            }
            if (basis[w][j] > 0) {
                auto down = basis[w];
                --down[j];
                // e_j(v^alpha) = alpha_j <lambda, gamma_j> v^{alpha - e_j}
                E[j][index.at(down)][w] = Rational(basis[w][j]) * lambda_gamma[j];
            }
        }
    // H(gamma_j) is the constant <lambda, gamma_j>; H(d_j) has entries
    // <lambda, d_j> - alpha_j
    QMat Omega(sz, QVec(sz, Rational(0)));
    for (int j = 0; j < n; ++j) {
        for (int w = 0; w < sz; ++w)
            Omega[w][w] += Rational(2) * lambda_gamma[j] * (lambda_d[j] - Rational(basis[w][j]));
        QMat fe = linq::mul(F[j], E[j]);
        for (int a = 0; a < sz; ++a)
            for (int b = 0; b < sz; ++b) Omega[a][b] += Rational(2) * fe[a][b];
    }
    CasimirReport rep{Rational(0), Rational(0), Rational(0), Rational(0), false};
    auto max_defect_deg = [&](const QMat& M, int max_deg) {
        Rational best(0);
        for (int w = 0; w < sz; ++w) {
            if (degree(w) > max_deg) continue;
            for (int r = 0; r < sz; ++r) {
                Rational a2 = abs(M[r][w]);
                if (a2 > best) best = a2;
            }
        }
        return best;
    };
    for (int k = 0; k < n; ++k) {
        Rational de = max_defect_deg(detail::commutator(Omega, E[k]), depth - 2);
        Rational df = max_defect_deg(detail::commutator(Omega, F[k]), depth - 2);
        if (de > rep.commutator_defect_e) rep.commutator_defect_e = de;
        if (df > rep.commutator_defect_f) rep.commutator_defect_f = df;
    }
    // vacuum eigenvalue: (lambda|lambda) with the pairing (gamma_j|d_j) = 1
    Rational expect(0);
    for (int j = 0; j < n; ++j) expect += Rational(2) * lambda_gamma[j] * lambda_d[j];
    rep.vacuum_expected = expect;
    rep.vacuum_actual = Omega[0][0];
    bool off_diag_clean = true;
    for (int r = 1; r < sz; ++r)
        if (!Omega[r][0].is_zero()) off_diag_clean = false;
    rep.vacuum_ok = off_diag_clean && (rep.vacuum_actual == rep.vacuum_expected);
    return rep;
}

// ---------------------------------------------------------------------------
// Omega_2 on tensor squares (Prop on dual bases)
// ---------------------------------------------------------------------------

struct Omega2Report {
    double max_defect;
};

/// Checks sum_j ([z, x_j] (x) y_j + x_j (x) [z, y_j]) = 0 for dual bases of
/// the base algebra; the Gram condition (x_j | y_k) = delta is a precondition.
inline Omega2Report omega2_check(const BaseLieAlgebra& g,
                                 const std::vector<std::vector<double>>& xs,
                                 const std::vector<std::vector<double>>& ys) {
    if (xs.size() != ys.size() || static_cast<int>(xs.size()) != g.dim)
        throw std::invalid_argument("omega2: need full dual bases");
    for (std::size_t j = 0; j < xs.size(); ++j)
        for (std::size_t k = 0; k < ys.size(); ++k) {
            double expect = (j == k) ? 1.0 : 0.0;
            if (std::abs(g.pair(xs[j], ys[k]) - expect) > 1e-12)
                throw std::invalid_argument("omega2: bases are not dual");
        }
    double worst = 0.0;
    for (int zb = 0; zb < g.dim; ++zb) {
        std::vector<double> z(g.dim, 0.0);
        z[zb] = 1.0;
        std::vector<std::vector<double>> tensor(g.dim, std::vector<double>(g.dim, 0.0));
        for (std::size_t j = 0; j < xs.size(); ++j) {
            auto zx = g.bracket(z, xs[j]);
            auto zy = g.bracket(z, ys[j]);
            for (int a = 0; a < g.dim; ++a)
                for (int b = 0; b < g.dim; ++b)
                    tensor[a][b] += zx[a] * ys[j][b] + xs[j][a] * zy[b];
        }
        for (int a = 0; a < g.dim; ++a)
            for (int b = 0; b < g.dim; ++b) worst = std::max(worst, std::abs(tensor[a][b]));
    }
    return {worst};
}

}  // namespace ocw

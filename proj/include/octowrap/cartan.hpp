#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "octowrap/cayley.hpp"
#include "octowrap/rational.hpp"

namespace ocw {

using IMat = std::vector<std::vector<long long>>;
using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;

inline QMat to_rational(const IMat& A) {
    QMat B;
    for (const auto& row : A) {
        QVec r;
        for (long long v : row) r.emplace_back(v);
        B.push_back(std::move(r));
    }
    return B;
}

// ---------------------------------------------------------------------------
// Exact rational linear algebra (small dense matrices)
// ---------------------------------------------------------------------------

namespace linq {

inline int rank(QMat A) {
    int n = static_cast<int>(A.size());
    if (n == 0) return 0;
    int m = static_cast<int>(A[0].size());
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int p = -1;
        for (int i = r; i < n; ++i)
            if (!A[i][c].is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(A[r], A[p]);
        for (int i = 0; i < n; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            Rational f = A[i][c] / A[r][c];
            for (int j = c; j < m; ++j) A[i][j] -= f * A[r][j];
        }
        ++r;
    }
    return r;
}

inline Rational det(QMat A) {
    int n = static_cast<int>(A.size());
    Rational d(1);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (!A[i][c].is_zero()) {
                p = i;
                break;
            }
        if (p < 0) return Rational(0);
        if (p != c) {
            std::swap(A[c], A[p]);
            d = -d;
        }
        d = d * A[c][c];
        for (int i = c + 1; i < n; ++i) {
            Rational f = A[i][c] / A[c][c];
            for (int j = c; j < n; ++j) A[i][j] -= f * A[c][j];
        }
    }
    return d;
}

/// Basis of { x : A x = 0 }.
inline QMat null_space(QMat A) {
    int n = static_cast<int>(A.size());
    if (n == 0) return {};
    int m = static_cast<int>(A[0].size());
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int p = -1;
        for (int i = r; i < n; ++i)
            if (!A[i][c].is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(A[r], A[p]);
        Rational inv = Rational(1) / A[r][c];
        for (int j = 0; j < m; ++j) A[r][j] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            Rational f = A[i][c];
            for (int j = 0; j < m; ++j) A[i][j] -= f * A[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(m, false);
    for (int c : pivot_col) is_pivot[c] = true;
    QMat basis;
    for (int c = 0; c < m; ++c) {
        if (is_pivot[c]) continue;
        QVec v(m, Rational(0));
        v[c] = Rational(1);
        for (int i = 0; i < r; ++i) v[pivot_col[i]] = -A[i][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of A x = b with free variables fixed to zero.
inline std::optional<QVec> solve(QMat A, QVec b) {
    int n = static_cast<int>(A.size());
    if (n == 0) return QVec{};
    int m = static_cast<int>(A[0].size());
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int p = -1;
        for (int i = r; i < n; ++i)
            if (!A[i][c].is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(A[r], A[p]);
        std::swap(b[r], b[p]);
        Rational inv = Rational(1) / A[r][c];
        for (int j = 0; j < m; ++j) A[r][j] *= inv;
        b[r] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            Rational f = A[i][c];
            for (int j = 0; j < m; ++j) A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < n; ++i)
        if (!b[i].is_zero()) return std::nullopt;
    QVec x(m, Rational(0));
    for (int i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
    return x;
}

inline QMat inverse(QMat A) {
    int n = static_cast<int>(A.size());
    QMat I(n, QVec(n, Rational(0)));
    for (int i = 0; i < n; ++i) I[i][i] = Rational(1);
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (!A[i][c].is_zero()) {
                p = i;
                break;
            }
        if (p < 0) throw std::domain_error("inverse: singular matrix");
        std::swap(A[c], A[p]);
        std::swap(I[c], I[p]);
        Rational inv = Rational(1) / A[c][c];
        for (int j = 0; j < n; ++j) {
            A[c][j] *= inv;
            I[c][j] *= inv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || A[i][c].is_zero()) continue;
            Rational f = A[i][c];
            for (int j = 0; j < n; ++j) {
                A[i][j] -= f * A[c][j];
                I[i][j] -= f * I[c][j];
            }
        }
    }
    return I;
}

inline QMat mul(const QMat& A, const QMat& B) {
    int n = static_cast<int>(A.size());
    int k = static_cast<int>(B.size());
    int m = k ? static_cast<int>(B[0].size()) : 0;
    QMat C(n, QVec(m, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < k; ++t) {
            if (A[i][t].is_zero()) continue;
            for (int j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

inline QMat transpose(const QMat& A) {
    if (A.empty()) return {};
    QMat T(A[0].size(), QVec(A.size()));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A[0].size(); ++j) T[j][i] = A[i][j];
    return T;
}

}  // namespace linq

// ---------------------------------------------------------------------------
// Generalized Cartan matrices
// ---------------------------------------------------------------------------

struct GcmCheck {
    bool ok;
    std::vector<std::string> violations;
};

inline GcmCheck validate_gcm(const IMat& A) {
    GcmCheck r{true, {}};
    std::size_t n = A.size();
    for (const auto& row : A)
        if (row.size() != n) {
            r.ok = false;
            r.violations.push_back("matrix is not square");
            return r;
        }
    for (std::size_t j = 0; j < n; ++j) {
        if (A[j][j] != 2) {
            r.ok = false;
            r.violations.push_back("a_{" + std::to_string(j + 1) + "," + std::to_string(j + 1) +
                                   "} != 2");
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (j == k) continue;
            if (A[j][k] > 0) {
                r.ok = false;
                r.violations.push_back("a_{" + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                                       "} > 0");
            }
            if (A[j][k] == 0 && A[k][j] != 0) {
                r.ok = false;
                r.violations.push_back("a_{" + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                                       "}=0 but a_{" + std::to_string(k + 1) + "," +
                                       std::to_string(j + 1) + "}!=0");
            }
        }
    }
    return r;
}

/// Affine type: every proper leading principal minor positive, det(A) = 0.
inline bool classify_affine(const IMat& A) {
    int n = static_cast<int>(A.size());
    QMat Q = to_rational(A);
    for (int k = 1; k < n; ++k) {
        QMat minor(k, QVec(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) minor[i][j] = Q[i][j];
        if (!(linq::det(minor) > Rational(0))) return false;
    }
    return linq::det(Q).is_zero();
}

// ---------------------------------------------------------------------------
// Rank over the Cayley-Dickson algebra (float coordinates, left division)
// ---------------------------------------------------------------------------

inline int rank_over_Ar(std::vector<std::vector<CN>> A, double threshold = 1e-10) {
    int n = static_cast<int>(A.size());
    if (n == 0) return 0;
    int m = static_cast<int>(A[0].size());
    int r = 0;
    for (int c = 0; c < m && r < n; ++c) {
        int p = -1;
        double best = threshold;
        for (int i = r; i < n; ++i) {
            double v = norm(A[i][c]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (p < 0) continue;
        std::swap(A[r], A[p]);
        // left-normalize the pivot row: x = a^{-1} b
        CN inv = inverse(A[r][c]);
        for (int j = 0; j < m; ++j) A[r][j] = mul(inv, A[r][j]);
        for (int i = 0; i < n; ++i) {
            if (i == r) continue;
            CN f = A[i][c];
            if (norm(f) <= threshold) continue;
            for (int j = 0; j < m; ++j) A[i][j] = A[i][j] - mul(f, A[r][j]);
        }
        ++r;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Realization (h, roots, coroots) with exact rational coordinates
// ---------------------------------------------------------------------------

/// The triple for a rational matrix A: dim h = 2n - l, coroots gamma_j as the
/// rows of the bordered matrix, roots beta_j the coordinate functionals x_j.
struct Realization {
    int n = 0;
    int l = 0;      // row rank of A
    int dim_h = 0;  // 2n - l
    QMat A;
    QMat coroots;  // n rows of length dim_h

    Rational pairing(int k, int j) const { return coroots[k][j]; }
};

inline Realization realize(const QMat& A) {
    int n = static_cast<int>(A.size());
    Realization R;
    R.n = n;
    R.A = A;
    // greedy independent-row selection in original order
    std::vector<int> pivot_rows, free_rows;
    QMat acc;
    for (int i = 0; i < n; ++i) {
        acc.push_back(A[i]);
        if (linq::rank(acc) == static_cast<int>(pivot_rows.size()) + 1)
            pivot_rows.push_back(i);
        else {
            acc.pop_back();
            free_rows.push_back(i);
        }
    }
    R.l = static_cast<int>(pivot_rows.size());
    R.dim_h = 2 * n - R.l;
    R.coroots.assign(n, QVec(R.dim_h, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R.coroots[i][j] = A[i][j];
    for (std::size_t q = 0; q < free_rows.size(); ++q)
        R.coroots[free_rows[q]][n + static_cast<int>(q)] = Rational(1);
    return R;
}

inline Realization realize(const IMat& A) { return realize(to_rational(A)); }

inline bool verify_realization(const Realization& R) {
    for (int k = 0; k < R.n; ++k)
        for (int j = 0; j < R.n; ++j)
            if (R.pairing(k, j) != R.A[k][j]) return false;
    // coroots must be vector independent
    QMat C = R.coroots;
    return linq::rank(C) == R.n;
}

/// Center of g(A): combinations of coroots annihilated by every root
/// functional; dimension n - l.
inline QMat center_basis(const Realization& R) {
    // solve c^T A = 0, i.e. A^T c = 0, then map c -> sum c_j gamma_j
    QMat kernel = linq::null_space(linq::transpose(R.A));
    QMat basis;
    for (const QVec& c : kernel) {
        QVec h(R.dim_h, Rational(0));
        for (int j = 0; j < R.n; ++j)
            for (int t = 0; t < R.dim_h; ++t) h[t] += c[j] * R.coroots[j][t];
        basis.push_back(std::move(h));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Symmetrization A = D B
// ---------------------------------------------------------------------------

struct Symmetrization {
    QVec d;  // positive rationals
    QMat B;  // symmetric, B = diag(d)^{-1} A
};

struct NotSymmetrizable {
    std::vector<int> cycle;  // a violating index chain
};

/// Rational ratio propagation along the graph of nonzero off-diagonal
/// entries, componentwise; returns the violating cycle when inconsistent.
inline std::variant<Symmetrization, NotSymmetrizable> symmetrize(const IMat& A) {
    int n = static_cast<int>(A.size());
    QVec d(n, Rational(0));
    std::vector<int> parent(n, -1);
    for (int root = 0; root < n; ++root) {
        if (!d[root].is_zero()) continue;
        d[root] = Rational(1);
        std::vector<int> queue{root};
        while (!queue.empty()) {
            int j = queue.back();
            queue.pop_back();
            for (int k = 0; k < n; ++k) {
                if (k == j || (A[j][k] == 0 && A[k][j] == 0)) continue;
                if (A[j][k] == 0 || A[k][j] == 0) {
                    // zero pattern asymmetric: no D can symmetrize
                    return NotSymmetrizable{{j, k}};
                }
                Rational dk = d[j] * Rational(A[k][j]) / Rational(A[j][k]);
                if (d[k].is_zero()) {
                    d[k] = dk;
                    parent[k] = j;
                    queue.push_back(k);
                } else if (d[k] != dk) {
                    // walk the tree paths to report the inconsistent cycle
                    std::vector<int> cyc{k, j};
                    for (int p = parent[j]; p >= 0; p = parent[p]) cyc.push_back(p);
                    return NotSymmetrizable{cyc};
                }
            }
        }
    }
    Symmetrization S;
    S.d = d;
    S.B.assign(n, QVec(n, Rational(0)));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) S.B[j][k] = Rational(A[j][k]) / d[j];
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (S.B[j][k] != S.B[k][j]) return NotSymmetrizable{{j, k}};
    return S;
}

// ---------------------------------------------------------------------------
// Invariant form on h
// ---------------------------------------------------------------------------

/// Gram data for the standard form: (gamma_j | h) = d_j <beta_j, h> on the
/// coroot span, zero block on the chosen complement. Stored in the mixed
/// basis (gamma_1..gamma_n, w_1..w_{n-l}) together with the coordinate
/// transform.
struct FormOnH {
    Realization R;
    QVec d;
    QMat basis;       // dim_h columns-as-rows: first n are coroots, then complements
    QMat gram;        // Gram matrix in that basis
    QMat gram_coord;  // Gram in coordinates: G_c with (x|y) = x^T G_c y
    QMat gram_coord_inv;

    Rational pair(const QVec& x, const QVec& y) const {
        Rational s(0);
        for (int i = 0; i < R.dim_h; ++i)
            for (int j = 0; j < R.dim_h; ++j) s += x[i] * gram_coord[i][j] * y[j];
        return s;
    }

    /// Induced form on root functionals: (beta_j | beta_k).
    Rational pair_roots(int j, int k) const { return gram_coord_inv[j][k]; }

    /// nu(h): the functional (h | *), as a coordinate vector.
    QVec nu(const QVec& h) const {
        QVec out(R.dim_h, Rational(0));
        for (int i = 0; i < R.dim_h; ++i)
            for (int j = 0; j < R.dim_h; ++j) out[i] += gram_coord[j][i] * h[j];
        return out;
    }

    /// nu^{-1}(lambda) for a coordinate functional vector.
    QVec nu_inv(const QVec& lam) const {
        QVec out(R.dim_h, Rational(0));
        for (int i = 0; i < R.dim_h; ++i)
            for (int j = 0; j < R.dim_h; ++j) out[i] += gram_coord_inv[i][j] * lam[j];
        return out;
    }
};

inline FormOnH form_on_h(const Realization& R, const Symmetrization& S) {
    FormOnH F;
    F.R = R;
    F.d = S.d;
    const int N = R.dim_h;
    // complement: greedy coordinate directions extending the coroot span
    F.basis = R.coroots;
    QMat acc = R.coroots;
    for (int c = 0; c < N && static_cast<int>(F.basis.size()) < N; ++c) {
        QVec e(N, Rational(0));
        e[c] = Rational(1);
        acc.push_back(e);
        if (linq::rank(acc) == static_cast<int>(F.basis.size()) + 1)
            F.basis.push_back(e);
        else
            acc.pop_back();
    }
    if (static_cast<int>(F.basis.size()) != N)
        throw std::logic_error("form_on_h: could not complete a basis");
    // Gram in the mixed basis: rows for gamma_j are forced by the defining
    // relation, the complement block is zero
    F.gram.assign(N, QVec(N, Rational(0)));
    for (int j = 0; j < R.n; ++j)
        for (int t = 0; t < N; ++t) {
            Rational v = S.d[j] * F.basis[t][j];  // d_j <beta_j, basis_t>
            F.gram[j][t] = v;
            F.gram[t][j] = v;
        }
    // coordinate Gram: G_c = X^{-T} G_B X^{-1} with basis rows in X
    QMat X = F.basis;               // rows are basis vectors
    QMat Xinv = linq::inverse(linq::transpose(X));  // (X^T)^{-1}
    // x = X^T b  =>  b = (X^T)^{-1} x ; (x|y) = b_x^T G b_y
    F.gram_coord = linq::mul(linq::transpose(Xinv), linq::mul(F.gram, Xinv));
    if (linq::det(F.gram_coord).is_zero())
        throw std::logic_error("form_on_h: degenerate completion (must not occur)");
    F.gram_coord_inv = linq::inverse(F.gram_coord);
    return F;
}

/// Recovers a_{j,k} = 2 (beta_j | beta_k) / (beta_j | beta_j) from the form.
inline QMat cartan_from_form(const FormOnH& F) {
    int n = F.R.n;
    QMat A(n, QVec(n, Rational(0)));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            A[j][k] = Rational(2) * F.pair_roots(j, k) / F.pair_roots(j, j);
    return A;
}

/// Functional with <rho, gamma_j> = a_{jj}/2, free components fixed to zero.
inline QVec rho_functional(const Realization& R) {
    QMat C = R.coroots;
    QVec b;
    for (int j = 0; j < R.n; ++j) b.push_back(R.A[j][j] / Rational(2));
    auto x = linq::solve(C, b);
    if (!x) throw std::logic_error("rho: inconsistent defining relations");
    return *x;
}

// ---------------------------------------------------------------------------
// Root lattice utilities
// ---------------------------------------------------------------------------

inline long long ht(const std::vector<long long>& beta) {
    long long s = 0;
    for (long long k : beta) s += k;
    return s;
}

/// Partial order: a <= b iff b - a has nonnegative integer coefficients.
inline bool leq(const std::vector<long long>& a, const std::vector<long long>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("leq: size mismatch");
    for (std::size_t j = 0; j < a.size(); ++j)
        if (b[j] - a[j] < 0) return false;
    return true;
}

/// Connected components of the nonzero off-diagonal pattern.
inline std::vector<std::vector<int>> decomposable_components(const IMat& A) {
    int n = static_cast<int>(A.size());
    std::vector<int> comp(n, -1);
    int nc = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = nc;
        while (!stack.empty()) {
            int j = stack.back();
            stack.pop_back();
            for (int k = 0; k < n; ++k)
                if (k != j && comp[k] < 0 && (A[j][k] != 0 || A[k][j] != 0)) {
                    comp[k] = nc;
                    stack.push_back(k);
                }
        }
        ++nc;
    }
    std::vector<std::vector<int>> out(nc);
    for (int j = 0; j < n; ++j) out[comp[j]].push_back(j);
    return out;
}

/// Simplicity: full rank and every index pair joined by a chain of nonzero
/// entries (directed reachability).
inline bool simplicity_conditions(const IMat& A) {
    int n = static_cast<int>(A.size());
    if (linq::rank(to_rational(A)) != n) return false;
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int j = 0; j < n; ++j) {
        reach[j][j] = true;
        for (int k = 0; k < n; ++k)
            if (k != j && A[j][k] != 0) reach[j][k] = true;
    }
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j)
            if (reach[j][m])
                for (int k = 0; k < n; ++k)
                    if (reach[m][k]) reach[j][k] = true;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (!reach[j][k]) return false;
    return true;
}

}  // namespace ocw

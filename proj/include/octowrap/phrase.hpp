#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "octowrap/cayley.hpp"

namespace ocw {

constexpr long long kMaxExponent = 64;  // guards quadrature overflow

/// Full binary tree over n ordered leaves fixing the multiplication order.
/// Stored as a postorder token stream: leaf id (>= 0) or -1 for "combine the
/// two topmost operands". Leaf ids appear in increasing order, so the stream
/// uniquely determines the tree.
class BracketTree {
public:
    BracketTree() : nleaves_(1), post_{0} {}

    static BracketTree single() { return BracketTree(); }

    /// Left bracketing ((..(a1 a2) a3)..an), the canonical order q_l.
    static BracketTree left(int n) {
        if (n < 1) throw std::invalid_argument("tree: need at least one leaf");
        BracketTree t;
        t.nleaves_ = n;
        t.post_.clear();
        t.post_.push_back(0);
        for (int j = 1; j < n; ++j) {
            t.post_.push_back(j);
            t.post_.push_back(-1);
        }
        return t;
    }

    static BracketTree combine(const BracketTree& a, const BracketTree& b) {
        BracketTree t;
        t.nleaves_ = a.nleaves_ + b.nleaves_;
        t.post_ = a.post_;
        for (int tok : b.post_) t.post_.push_back(tok < 0 ? tok : tok + a.nleaves_);
        t.post_.push_back(-1);
        return t;
    }

    int leaves() const { return nleaves_; }
    int internal_nodes() const { return nleaves_ - 1; }

    /// Folds leaf values according to the tree.
    template <class T, class Mul>
    T fold(const std::vector<T>& leaf_values, Mul&& mul2) const {
        if (static_cast<int>(leaf_values.size()) != nleaves_)
            throw std::invalid_argument("tree fold: leaf count mismatch");
        std::vector<T> stack;
        stack.reserve(nleaves_);
        for (int tok : post_) {
            if (tok >= 0) {
                stack.push_back(leaf_values[tok]);
            } else {
                T b = std::move(stack.back());
                stack.pop_back();
                T a = std::move(stack.back());
                stack.pop_back();
                stack.push_back(mul2(a, b));
            }
        }
        return stack.back();
    }

    /// Splits leaf j into an internal node over (j, j+1); leaves above shift.
    BracketTree split_leaf(int j) const {
        BracketTree t;
        t.post_.clear();
        t.nleaves_ = nleaves_ + 1;
        for (int tok : post_) {
            if (tok < 0 || tok < j) {
                t.post_.push_back(tok);
            } else if (tok == j) {
                t.post_.push_back(j);
                t.post_.push_back(j + 1);
                t.post_.push_back(-1);
            } else {
                t.post_.push_back(tok + 1);
            }
        }
        return t;
    }

    /// True if some internal node covers exactly the leaf range [lo, hi].
    bool has_span(int lo, int hi) const {
        bool found = false;
        scan_spans([&](int l, int h, int, int) {
            if (l == lo && h == hi) found = true;
        });
        return found;
    }

    /// Replaces the subtree covering exactly leaves [lo, hi] by a single leaf.
    BracketTree collapse_span(int lo, int hi) const {
        int tok_begin = -1, tok_end = -1;
        scan_spans([&](int l, int h, int b, int e) {
            if (l == lo && h == hi) {
                tok_begin = b;
                tok_end = e;
            }
        });
        if (tok_begin < 0) throw std::logic_error("tree: span is not a subtree");
        BracketTree t;
        t.post_.clear();
        t.nleaves_ = nleaves_ - (hi - lo);
        for (int i = 0; i < static_cast<int>(post_.size()); ++i) {
            if (i == tok_begin) {
                t.post_.push_back(lo);
                i = tok_end;  // skip the subtree tokens
                continue;
            }
            int tok = post_[i];
            t.post_.push_back(tok >= 0 && tok > hi ? tok - (hi - lo) : tok);
        }
        return t;
    }

    /// Deletes leaf j; its parent node collapses onto the sibling subtree.
    BracketTree remove_leaf(int j) const {
        if (nleaves_ < 2) throw std::logic_error("tree: cannot remove the only leaf");
        // Find the combine token whose operand is exactly leaf j.
        struct Entry {
            int lo, hi, tok_begin;
        };
        std::vector<Entry> stack;
        int drop_comb = -1, drop_leaf_tok = -1;
        for (int i = 0; i < static_cast<int>(post_.size()) && drop_comb < 0; ++i) {
            int tok = post_[i];
            if (tok >= 0) {
                stack.push_back({tok, tok, i});
            } else {
                Entry b = stack.back();
                stack.pop_back();
                Entry a = stack.back();
                stack.pop_back();
                if (a.lo == j && a.hi == j) {
                    drop_comb = i;
                    drop_leaf_tok = a.tok_begin;
                } else if (b.lo == j && b.hi == j) {
                    drop_comb = i;
                    drop_leaf_tok = b.tok_begin;
                }
                stack.push_back({a.lo, b.hi, a.tok_begin});
            }
        }
        if (drop_comb < 0) throw std::logic_error("tree: leaf not found");
        BracketTree t;
        t.post_.clear();
        t.nleaves_ = nleaves_ - 1;
        for (int i = 0; i < static_cast<int>(post_.size()); ++i) {
            if (i == drop_comb || i == drop_leaf_tok) continue;
            int tok = post_[i];
            t.post_.push_back(tok >= 0 && tok > j ? tok - 1 : tok);
        }
        return t;
    }

    /// True if leaves j and j+1 are combined directly by one node.
    bool are_siblings(int j) const { return has_span(j, j + 1); }

    std::string str() const {
        std::vector<std::string> stack;
        for (int tok : post_) {
            if (tok >= 0) {
                stack.push_back(".");
            } else {
                std::string b = stack.back();
                stack.pop_back();
                std::string a = stack.back();
                stack.pop_back();
                stack.push_back("(" + a + b + ")");
            }
        }
        return stack.back();
    }

    static BracketTree parse(const std::string& s) {
        BracketTree t;
        t.post_.clear();
        int leaf = 0;
        std::size_t pos = 0;
        std::function<void()> rec = [&]() {
            if (pos >= s.size()) throw std::invalid_argument("tree parse: truncated");
            if (s[pos] == '.') {
                ++pos;
                t.post_.push_back(leaf++);
                return;
            }
            if (s[pos] != '(') throw std::invalid_argument("tree parse: expected '(' or '.'");
            ++pos;
            rec();
            rec();
            if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("tree parse: expected ')'");
            ++pos;
            t.post_.push_back(-1);
        };
        rec();
        if (pos != s.size()) throw std::invalid_argument("tree parse: trailing input");
        t.nleaves_ = leaf;
        return t;
    }

    const std::vector<int>& tokens() const { return post_; }

    friend bool operator==(const BracketTree& a, const BracketTree& b) {
        return a.nleaves_ == b.nleaves_ && a.post_ == b.post_;
    }
    friend bool operator!=(const BracketTree& a, const BracketTree& b) { return !(a == b); }

private:
    int nleaves_;
    std::vector<int> post_;

    // Visits every internal node with its leaf span and token range.
    template <class F>
    void scan_spans(F&& visit) const {
        struct Entry {
            int lo, hi, tok_begin;
        };
        std::vector<Entry> stack;
        for (int i = 0; i < static_cast<int>(post_.size()); ++i) {
            int tok = post_[i];
            if (tok >= 0) {
                stack.push_back({tok, tok, i});
            } else {
                Entry b = stack.back();
                stack.pop_back();
                Entry a = stack.back();
                stack.pop_back();
                Entry n{a.lo, b.hi, a.tok_begin};
                visit(n.lo, n.hi, n.tok_begin, i);
                stack.push_back(n);
            }
        }
    }
};

struct PoleError : std::runtime_error {
    long long divisor;
    PoleError(const std::string& what, long long div) : std::runtime_error(what), divisor(div) {}
};

/// One non-commutative Laurent monomial
///   { a_1 (z-c)^{n_1} a_2 (z-c)^{n_2} ... a_{k+1} }_tree
/// with an explicit bracketing tree over the 2k+1 alternating leaves.
/// conj_flags[t] marks factor t as conj(z-c)^{n_t}.
struct Term {
    int level = 3;
    CN center;  // z-factors mean (z - center)
    std::vector<CN> coeffs;
    std::vector<long long> exps;
    std::vector<bool> conj_flags;
    BracketTree tree;

    Term() : center(CN::zero(3)), coeffs{CN::one(3)}, tree(BracketTree::single()) {}

    Term(int r, std::vector<CN> cs, std::vector<long long> es, std::vector<bool> cf,
         BracketTree tr)
        : level(r),
          center(CN::zero(r)),
          coeffs(std::move(cs)),
          exps(std::move(es)),
          conj_flags(std::move(cf)),
          tree(std::move(tr)) {
        validate();
    }

    int factors() const { return static_cast<int>(exps.size()); }

    long long total_degree() const {
        long long s = 0;
        for (long long e : exps) s += e;
        return s;
    }

    void validate() const {
        if (coeffs.size() != exps.size() + 1)
            throw std::invalid_argument("term: need one more coefficient than factors");
        if (conj_flags.size() != exps.size())
            throw std::invalid_argument("term: conj flag count mismatch");
        if (tree.leaves() != 2 * factors() + 1)
            throw std::invalid_argument("term: tree leaf count mismatch");
        for (const CN& c : coeffs)
            if (c.level != level) throw std::invalid_argument("term: coefficient level mismatch");
        for (long long e : exps)
            if (e > kMaxExponent || e < -kMaxExponent)
                throw std::invalid_argument("term: exponent window exceeded");
    }

    /// Constant term {c}.
    static Term constant(const CN& c) {
        Term t;
        t.level = c.level;
        t.center = CN::zero(c.level);
        t.coeffs = {c};
        t.exps.clear();
        t.conj_flags.clear();
        t.tree = BracketTree::single();
        return t;
    }

    /// {a z^n b} with the left tree.
    static Term monomial(const CN& a, long long n, const CN& b, bool conjugated = false) {
        return Term(a.level, {a, b}, {n}, {conjugated}, BracketTree::left(3));
    }

    /// c z^n with a real or Cayley coefficient in front.
    static Term power(int r, const CN& c, long long n) {
        return Term(r, {c, CN::one(r)}, {n}, {false}, BracketTree::left(3));
    }

    Term recentered(const CN& z0) const {
        Term t = *this;
        if (factors() == 0) {
            t.center = z0;
            return t;
        }
        if (norm(center - z0) > 0.0 && factors() > 0)
            throw std::invalid_argument("term: recentering a non-constant term is not supported");
        return t;
    }
};

struct Phrase {
    int level = 3;
    std::vector<Term> terms;

    Phrase() = default;
    explicit Phrase(int r) : level(r) {}
    Phrase(int r, std::vector<Term> ts) : level(r), terms(std::move(ts)) {
        for (const Term& t : terms)
            if (t.level != r) throw std::invalid_argument("phrase: level mismatch");
    }

    static Phrase zero(int r) { return Phrase(r); }
    static Phrase constant(const CN& c) { return Phrase(c.level, {Term::constant(c)}); }
    static Phrase zpow(int r, long long n) {
        return Phrase(r, {Term::power(r, CN::one(r), n)});
    }

    Phrase& operator+=(const Phrase& q) {
        detail::check_levels(level, q.level, "phrase add");
        for (const Term& t : q.terms) terms.push_back(t);
        return *this;
    }
    friend Phrase operator+(Phrase p, const Phrase& q) { return p += q; }
    friend Phrase operator*(double s, const Phrase& p) {
        Phrase r = p;
        for (Term& t : r.terms)
            if (!t.coeffs.empty()) t.coeffs[0] = s * t.coeffs[0];
        return r;
    }
};

namespace detail {

inline CN factor_value(const Term& t, int fi, const CN& z) {
    CN w = z - t.center;
    if (t.exps[fi] < 0 && norm_sq(w) == 0.0)
        throw PoleError("eval: pole at evaluation point", t.total_degree());
    CN base = t.conj_flags[fi] ? conj(w) : w;
    return powi(base, t.exps[fi]);
}

}  // namespace detail

/// Evaluates the term with factor `slot` replaced by `slot_value`; slot = -1
/// evaluates the plain term. Respects the bracketing tree exactly.
inline CN eval_term_slot(const Term& t, const CN& z, int slot, const CN& slot_value) {
    const int k = t.factors();
    std::vector<CN> leaves(2 * k + 1, CN::zero(t.level));
    for (int j = 0; j <= k; ++j) leaves[2 * j] = t.coeffs[j];
    for (int f = 0; f < k; ++f)
        leaves[2 * f + 1] = (f == slot) ? slot_value : detail::factor_value(t, f, z);
    return t.tree.fold(leaves, [](const CN& a, const CN& b) { return mul(a, b); });
}

inline CN eval(const Term& t, const CN& z) { return eval_term_slot(t, z, -1, CN::zero(t.level)); }

inline CN eval(const Phrase& p, const CN& z) {
    CN s = CN::zero(p.level);
    for (const Term& t : p.terms) s = s + eval(t, z);
    return s;
}

/// Differential of factor w^n (or conj(w)^n) in direction h:
///   n > 0: sum_{j=0}^{n-1} w^j hh w^{n-1-j},  n < 0: -sum_{j=n}^{-1} w^j hh w^{n-1-j},
/// with hh = conj(h) on conjugated factors. Unambiguous by Artin's theorem
/// (only two distinct elements appear in each product).
inline CN factor_differential(const CN& w, long long n, bool conjugated, const CN& h) {
    CN hh = conjugated ? conj(h) : h;
    CN base = conjugated ? conj(w) : w;
    if (n == 0) return CN::zero(w.level);
    CN acc = CN::zero(w.level);
    if (n > 0) {
        for (long long j = 0; j < n; ++j)
            acc = acc + mul(powi(base, j), mul(hh, powi(base, n - 1 - j)));
        return acc;
    }
    for (long long j = n; j <= -1; ++j)
        acc = acc - mul(powi(base, j), mul(hh, powi(base, n - 1 - j)));
    return acc;
}

/// The R-homogeneous, A_r-additive derivative operator of a phrase,
/// h |-> sum over factors of the slot-inserted differential.
class DerivativeOp {
public:
    explicit DerivativeOp(Phrase p) : p_(std::move(p)) {}

    CN apply(const CN& z, const CN& h) const {
        CN s = CN::zero(p_.level);
        for (const Term& t : p_.terms) {
            CN w = z - t.center;
            for (int f = 0; f < t.factors(); ++f) {
                if (t.exps[f] == 0) continue;
                CN slot = factor_differential(w, t.exps[f], t.conj_flags[f], h);
                s = s + eval_term_slot(t, z, f, slot);
            }
        }
        return s;
    }

    const Phrase& phrase() const { return p_; }

private:
    Phrase p_;
};

inline DerivativeOp derivative_op(const Phrase& p) { return DerivativeOp(p); }

/// D P = (dP/dz).1 as a phrase: each factor contributes n * (n -> n-1).
inline Phrase derivative_at_1(const Phrase& p) {
    Phrase out(p.level);
    for (const Term& t : p.terms) {
        for (int f = 0; f < t.factors(); ++f) {
            if (t.exps[f] == 0) continue;
            Term d = t;
            double n = static_cast<double>(t.exps[f]);
            d.exps[f] -= 1;
            d.coeffs[0] = n * d.coeffs[0];
            out.terms.push_back(std::move(d));
        }
    }
    return out;
}

/// d_l P = -(dP/dz).z^{l+1}; inserting z^{l+1} into a factor of z^n yields
/// z^{n+l}, so each factor contributes -n * (n -> n+l). Requires center 0.
inline Phrase d_l(const Phrase& p, long long l) {
    Phrase out(p.level);
    for (const Term& t : p.terms) {
        if (norm_sq(t.center) != 0.0)
            throw std::invalid_argument("d_l: terms must be centered at zero");
        for (int f = 0; f < t.factors(); ++f) {
            if (t.exps[f] == 0) continue;
            Term d = t;
            double n = static_cast<double>(t.exps[f]);
            d.exps[f] += l;
            d.coeffs[0] = (-n) * d.coeffs[0];
            out.terms.push_back(std::move(d));
        }
    }
    return out;
}

enum class TreePolicy { LeftConcat };

/// Term product: junction padded with a unit z^0 factor so the alternating
/// shape is kept; the result tree is (p.tree q.tree) with the pad attached to
/// p's trailing coefficient. Evaluation equals eval(p) * eval(q) exactly.
inline Term mul_terms(const Term& a, const Term& b) {
    detail::check_levels(a.level, b.level, "mul_terms");
    CN center = a.center;
    if (a.factors() == 0) center = b.center;
    if (a.factors() > 0 && b.factors() > 0 && norm(a.center - b.center) > 0.0)
        throw std::invalid_argument("mul_terms: mixed centers");
    Term r;
    r.level = a.level;
    r.center = center;
    r.coeffs = a.coeffs;
    r.coeffs.insert(r.coeffs.end(), b.coeffs.begin(), b.coeffs.end());
    r.exps = a.exps;
    r.exps.push_back(0);  // pad
    r.exps.insert(r.exps.end(), b.exps.begin(), b.exps.end());
    r.conj_flags = a.conj_flags;
    r.conj_flags.push_back(false);
    r.conj_flags.insert(r.conj_flags.end(), b.conj_flags.begin(), b.conj_flags.end());
    // split p's trailing coefficient leaf into (coeff, z^0), then append q
    BracketTree padded = a.tree.split_leaf(a.tree.leaves() - 1);
    r.tree = BracketTree::combine(padded, b.tree);
    r.validate();
    return r;
}

inline Phrase mul_phrases(const Phrase& p, const Phrase& q,
                          TreePolicy = TreePolicy::LeftConcat) {
    detail::check_levels(p.level, q.level, "mul_phrases");
    Phrase out(p.level);
    for (const Term& a : p.terms)
        for (const Term& b : q.terms) out.terms.push_back(mul_terms(a, b));
    return out;
}

inline bool is_real_scalar(const CN& c) {
    for (int j = 1; j < c.dim(); ++j)
        if (c.c[j] != 0.0) return false;
    return true;
}

inline bool is_unit(const CN& c) { return is_real_scalar(c) && c.c[0] == 1.0; }

namespace detail {

/// Deterministic sample points with |z - center| in [1/2, 2].
inline std::vector<CN> sample_points(int level, const CN& center, int count, uint64_t seed) {
    std::vector<CN> pts;
    uint64_t state = seed;
    auto next = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>((state >> 11) & 0xfffff) / static_cast<double>(0xfffff) * 2.0 - 1.0;
    };
    for (int i = 0; i < count; ++i) {
        CN z(level);
        for (int j = 0; j < z.dim(); ++j) z.c[j] = next();
        double n = norm(z);
        if (n < 1e-6) {
            z = CN::one(level);
            n = 1.0;
        }
        double r = 0.5 + 1.5 * std::abs(next());
        pts.push_back((r / n) * z + center);
    }
    return pts;
}

inline bool terms_agree(const Term& a, const Term& b, int points = 10) {
    for (const CN& z : sample_points(a.level, a.center, points, 0x9e3779b97f4a7c15ull)) {
        CN va = eval(a, z);
        CN vb = eval(b, z);
        double scale = std::max(norm(va), norm(vb));
        if (norm(va - vb) > 1e-12 * std::max(scale, 1e-30)) return false;
    }
    return true;
}

}  // namespace detail

/// Normalization by the enumerated rewriting rules: real scalars fold into
/// the leading coefficient, unit z^0 factors collapse where the tree allows,
/// z^l z^n merge across a unit interior coefficient (verified by evaluation
/// when the merge crosses a bracket), identical terms combine, zero terms
/// drop. Everything else is left alone.
inline Phrase normalize(const Phrase& p) {
    Phrase out(p.level);
    for (Term t : p.terms) {
        bool zero = false;
        for (const CN& c : t.coeffs)
            if (c.is_zero()) zero = true;
        if (zero) continue;
        // fold real scalar coefficients (reals are central) into coeff 0
        for (std::size_t j = 1; j < t.coeffs.size(); ++j) {
            if (is_real_scalar(t.coeffs[j]) && !is_unit(t.coeffs[j])) {
                t.coeffs[0] = t.coeffs[j].c[0] * t.coeffs[0];
                t.coeffs[j] = CN::one(t.level);
            }
        }
        bool changed = true;
        while (changed) {
            changed = false;
            // merge z^l (1) z^n -> z^{l+n} across a unit interior coefficient
            for (int f = 0; f + 1 < t.factors() && !changed; ++f) {
                if (!is_unit(t.coeffs[f + 1])) continue;
                if (t.conj_flags[f] != t.conj_flags[f + 1]) continue;
                if (std::abs(t.exps[f] + t.exps[f + 1]) > kMaxExponent) continue;
                Term nt = t;
                nt.tree = t.tree.remove_leaf(2 * f + 2);  // the unit coefficient
                nt.coeffs.erase(nt.coeffs.begin() + f + 1);
                if (nt.tree.are_siblings(2 * f + 1)) {
                    nt.tree = nt.tree.collapse_span(2 * f + 1, 2 * f + 2);
                } else {
                    nt.tree = nt.tree.remove_leaf(2 * f + 1);
                }
                nt.exps[f] = t.exps[f] + t.exps[f + 1];
                nt.exps.erase(nt.exps.begin() + f + 1);
                nt.conj_flags.erase(nt.conj_flags.begin() + f + 1);
                if (detail::terms_agree(t, nt)) {
                    t = nt;
                    changed = true;
                }
            }
            // collapse a unit z^0 factor between tree-adjacent coefficients
            for (int f = 0; f < t.factors() && !changed; ++f) {
                if (t.exps[f] != 0) continue;
                Term nt = t;
                nt.tree = t.tree.remove_leaf(2 * f + 1);  // z^0 is a central unit
                if (!nt.tree.are_siblings(2 * f)) continue;
                nt.tree = nt.tree.collapse_span(2 * f, 2 * f + 1);
                nt.coeffs[f] = mul(t.coeffs[f], t.coeffs[f + 1]);
                nt.coeffs.erase(nt.coeffs.begin() + f + 1);
                nt.exps.erase(nt.exps.begin() + f);
                nt.conj_flags.erase(nt.conj_flags.begin() + f);
                t = nt;
                changed = true;
            }
        }
        out.terms.push_back(std::move(t));
    }
    // combine terms equal in everything but the leading coefficient
    std::vector<Term> combined;
    for (Term& t : out.terms) {
        bool merged = false;
        for (Term& u : combined) {
            if (u.exps == t.exps && u.conj_flags == t.conj_flags && u.tree == t.tree &&
                norm(u.center - t.center) == 0.0) {
                bool same_rest = true;
                for (std::size_t j = 1; j < u.coeffs.size(); ++j)
                    if (norm(u.coeffs[j] - t.coeffs[j]) != 0.0) same_rest = false;
                if (same_rest) {
                    u.coeffs[0] = u.coeffs[0] + t.coeffs[0];
                    merged = true;
                    break;
                }
            }
        }
        if (!merged) combined.push_back(std::move(t));
    }
    out.terms.clear();
    for (Term& t : combined)
        if (!t.coeffs[0].is_zero()) out.terms.push_back(std::move(t));
    return out;
}

// ---------------------------------------------------------------------------
// Left antiderivation algorithm.
//
// Factor chunks f_t = a_t z^{n_t}; the trailing coefficient rides with the
// last chunk. The product of two analytic factors integrates as
//   (f1 f2)^l = sum_{s=0}^{n2} (-1)^s C(s+l-1, s) f1^{s+l} f2^{-s},
// applied recursively over the chunks; f^{-s} is the s-th derivative.
// ---------------------------------------------------------------------------

namespace detail {

inline double binom(long long n, long long k) {
    double r = 1.0;
    for (long long j = 1; j <= k; ++j) r *= static_cast<double>(n - k + j) / static_cast<double>(j);
    return r;
}

inline double falling(long long n, long long s) {
    double r = 1.0;
    for (long long j = 0; j < s; ++j) r *= static_cast<double>(n - j);
    return r;
}

// s-th antiderivative scale of z^n: 1/((n+1)...(n+s)); throws on a log step.
inline double antider_scale(long long n, long long s) {
    double r = 1.0;
    for (long long j = 1; j <= s; ++j) {
        if (n + j == 0) throw std::domain_error("antiderivative: logarithmic primitive");
        r /= static_cast<double>(n + j);
    }
    return r;
}

// Recursive left algorithm on chunk exponents; returns (scale, new exponents)
// addends for the l-th antiderivative of the product of chunks [0, m).
struct Addend {
    double scale;
    std::vector<long long> exps;
};

inline void left_antider(const std::vector<long long>& exps, int m, long long l,
                         std::vector<Addend>& out, double scale,
                         std::vector<long long> tail) {
    if (m == 1) {
        double sc = antider_scale(exps[0], l);
        std::vector<long long> es{exps[0] + l};
        es.insert(es.end(), tail.begin(), tail.end());
        out.push_back({scale * sc, std::move(es)});
        return;
    }
    long long nk = exps[m - 1];
    if (nk < 0) throw std::domain_error("antiderivative: algorithm precondition");
    for (long long s = 0; s <= nk; ++s) {
        double c = (s % 2 == 0 ? 1.0 : -1.0) * binom(s + l - 1, s) * falling(nk, s);
        std::vector<long long> tail2{nk - s};
        tail2.insert(tail2.end(), tail.begin(), tail.end());
        left_antider(exps, m - 1, l + s, out, scale * c, tail2);
    }
}

}  // namespace detail

/// l-th left antiderivative of a phrase of polynomial-factor products.
/// Single factors integrate directly; multi-factor terms use the left
/// algorithm and require factors 2..k polynomial. Logarithmic primitives
/// are an error, never a phrase.
inline Phrase antiderivative_left(const Phrase& p, long long l) {
    if (l < 1) throw std::invalid_argument("antiderivative: order must be >= 1");
    Phrase out(p.level);
    for (const Term& t : p.terms) {
        if (t.factors() == 0) {
            // constant c -> c z^l / l!
            Term nt = t;
            double sc = 1.0;
            for (long long j = 1; j <= l; ++j) sc /= static_cast<double>(j);
            nt = mul_terms(Term::constant(sc * t.coeffs[0]), Term::power(t.level, CN::one(t.level), l));
            nt.center = t.center;
            out.terms.push_back(std::move(nt));
            continue;
        }
        bool mixed_conj = false;
        for (int f = 1; f < t.factors(); ++f)
            if (t.conj_flags[f] != t.conj_flags[0]) mixed_conj = true;
        if (mixed_conj)
            throw std::domain_error("antiderivative: algorithm precondition (mixed conjugation)");
        std::vector<detail::Addend> addends;
        detail::left_antider(t.exps, t.factors(), l, addends, 1.0, {});
        for (const detail::Addend& a : addends) {
            Term nt = t;
            nt.exps = a.exps;
            nt.coeffs[0] = a.scale * nt.coeffs[0];
            bool dead = (a.scale == 0.0);
            for (long long e : a.exps)
                if (e > kMaxExponent) dead = true;
            if (!dead) out.terms.push_back(std::move(nt));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Plane restriction.
//
// For z in C_M a coefficient u in C_M commutes with z while an imaginary
// coefficient w orthogonal to C_M satisfies w z = conj(z) w. Moving every
// z-factor to the far right with these two generators produces the candidate
// normal form { b_1 ... b_{k+1} (z^s conj(z)^m) }; the candidate is accepted
// only after numeric verification on random points of C_M.
// ---------------------------------------------------------------------------

/// Slot map v -> bracket value with v substituted for the plane power.
struct PlaneForm {
    std::vector<CN> bcoeffs;
    long long s = 0;
    long long m = 0;
    Term slot_term;  // single-factor term; evaluating with factor value v gives Phi(v)

    CN phi(const CN& v) const { return eval_term_slot(slot_term, CN::zero(v.level), 0, v); }
};

namespace detail {

enum class CoeffType { InPlane, Orthogonal, Mixed };

inline CoeffType classify_coeff(const CN& c, const Direction& M) {
    CN imc = im(c);
    double along = dot(imc, M.value);
    CN ortho = imc - along * M.value;
    double n_ortho = norm(ortho);
    bool has_plane = std::abs(re(c)) > 1e-14 || std::abs(along) > 1e-14;
    if (n_ortho <= 1e-14) return CoeffType::InPlane;
    if (!has_plane) return CoeffType::Orthogonal;
    return CoeffType::Mixed;
}

// Splits mixed coefficients by linearity; returns terms whose coefficients
// are each purely in-plane or purely orthogonal.
inline void split_term(const Term& t, const Direction& M, std::vector<Term>& out) {
    for (std::size_t j = 0; j < t.coeffs.size(); ++j) {
        if (classify_coeff(t.coeffs[j], M) == CoeffType::Mixed) {
            CN imc = im(t.coeffs[j]);
            double along = dot(imc, M.value);
            CN plane_part = along * M.value;
            plane_part.c[0] += re(t.coeffs[j]);
            CN ortho_part = t.coeffs[j] - plane_part;
            Term a = t, b = t;
            a.coeffs[j] = plane_part;
            b.coeffs[j] = ortho_part;
            split_term(a, M, out);
            split_term(b, M, out);
            return;
        }
    }
    out.push_back(t);
}

inline bool verify_plane_form(const Term& t, const PlaneForm& pf, const Direction& M,
                              unsigned seed = 0x5eed1234u) {
    // deterministic pseudo-random points in C_M away from the pole
    uint64_t state = seed;
    auto next = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>((state >> 11) & 0xfffff) / static_cast<double>(0xfffff);
    };
    for (int it = 0; it < 10; ++it) {
        double rr = 0.5 + 1.5 * next();
        double th = 6.28318530717958647692 * next();
        CN z = from_complex(std::polar(rr, th), M) + t.center;
        CN w = z - t.center;
        CN v = mul(powi(w, pf.s), powi(conj(w), pf.m));
        CN lhs = eval(t, z);
        CN rhs = pf.phi(v);
        double scale = 1.0 + norm(lhs);
        if (norm(lhs - rhs) > 1e-9 * scale) return false;
    }
    return true;
}

}  // namespace detail

/// Plane normal form of a single (already coefficient-pure) term. Single
/// z-factor terms keep their slot in place; multi-factor terms use the
/// parity rewriting and are verified by evaluation.
inline std::optional<PlaneForm> plane_form_pure(const Term& t, const Direction& M) {
    const int k = t.factors();
    PlaneForm pf;
    pf.bcoeffs = t.coeffs;
    if (k == 0) return std::nullopt;
    if (k == 1) {
        pf.s = t.conj_flags[0] ? 0 : t.exps[0];
        pf.m = t.conj_flags[0] ? t.exps[0] : 0;
        pf.slot_term = t;
        pf.slot_term.exps[0] = 1;
        pf.slot_term.conj_flags[0] = false;
        return pf;
    }
    // parity rewriting: factor f is conjugated by each orthogonal coefficient
    // to its right
    long long s = 0, m = 0;
    for (int f = 0; f < k; ++f) {
        int flips = 0;
        for (std::size_t j = f + 1; j < t.coeffs.size(); ++j)
            if (detail::classify_coeff(t.coeffs[j], M) == detail::CoeffType::Orthogonal) ++flips;
        bool conjd = t.conj_flags[f] ^ (flips % 2 == 1);
        if (conjd)
            m += t.exps[f];
        else
            s += t.exps[f];
    }
    pf.s = s;
    pf.m = m;
    // collapsed constant: the tree with every z-leaf set to 1
    Term collapsed = t;
    for (int f = 0; f < k; ++f) collapsed.exps[f] = 0;
    CN c = eval(collapsed, CN::one(t.level) + t.center);
    pf.slot_term = Term::monomial(c, 1, CN::one(t.level));
    pf.slot_term.center = t.center;
    if (!detail::verify_plane_form(t, pf, M)) return std::nullopt;
    return pf;
}

/// Full reduction of a term: mixed coefficients are split by linearity, each
/// part reduced separately. Empty result means "not reducible".
inline std::vector<PlaneForm> plane_reduce(const Term& t, const Direction& M) {
    std::vector<Term> parts;
    detail::split_term(t, M, parts);
    std::vector<PlaneForm> out;
    for (const Term& part : parts) {
        bool zero = false;
        for (const CN& c : part.coeffs)
            if (c.is_zero()) zero = true;
        if (zero) continue;
        auto pf = plane_form_pure(part, M);
        if (!pf) return {};
        out.push_back(std::move(*pf));
    }
    return out;
}

/// Public single-form contract: reducible when the reduction yields exactly
/// one normal form.
inline std::optional<PlaneForm> restrict_to_plane(const Term& t, const Direction& M) {
    auto forms = plane_reduce(t, M);
    if (forms.size() != 1) return std::nullopt;
    return forms[0];
}

}  // namespace ocw

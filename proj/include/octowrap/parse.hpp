#pragma once

#include <cctype>
#include <cstdio>
#include <string>
#include <vector>

#include "octowrap/phrase.hpp"

namespace ocw {

// ---------------------------------------------------------------------------
// Text grammar for phrases:
//   phrase := term ('+' term)*
//   term   := atom ('*' atom)*        (parentheses fix the bracketing tree,
//                                      bare chains associate to the left)
//   atom   := coeff | 'z' ['^' int] | 'zbar' ['^' int] | '(' term ')'
//   coeff  := real | 'i' digit+ | '(' real (',' real)* ')'
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}
};

namespace detail {

struct Leaf {
    bool is_z;
    CN coeff;        // for coefficient leaves
    long long exp;   // for z leaves
    bool conjugated; // zbar
};

struct LeafTree {
    std::vector<Leaf> leaves;
    BracketTree tree;
};

class PhraseParser {
public:
    PhraseParser(const std::string& src, int level) : src_(src), level_(level) {}

    Phrase parse() {
        skip_ws();
        Phrase p(level_);
        p.terms.push_back(parse_term());
        skip_ws();
        while (pos_ < src_.size() && src_[pos_] == '+') {
            ++pos_;
            skip_ws();
            p.terms.push_back(parse_term());
            skip_ws();
        }
        if (pos_ != src_.size()) throw ParseError("unexpected input", pos_);
        return p;
    }

private:
    const std::string& src_;
    int level_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool starts_tuple() const {
        // '(' followed by a signed real then ',' or ')': a coefficient tuple
        std::size_t q = pos_ + 1;
        auto skip = [&](std::size_t& j) {
            while (j < src_.size() && std::isspace(static_cast<unsigned char>(src_[j]))) ++j;
        };
        skip(q);
        if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
        bool digits = false;
        while (q < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[q])) || src_[q] == '.' ||
                src_[q] == 'e' || src_[q] == 'E' ||
                ((src_[q] == '+' || src_[q] == '-') && q > 0 &&
                 (src_[q - 1] == 'e' || src_[q - 1] == 'E')))) {
            digits = true;
            ++q;
        }
        if (!digits) return false;
        skip(q);
        return q < src_.size() && (src_[q] == ',' || src_[q] == ')');
    }

    double parse_real() {
        std::size_t start = pos_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
        bool digits = false;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
            digits = true;
            ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (!digits) throw ParseError("expected a number", start);
        return std::stod(src_.substr(start, pos_ - start));
    }

    long long parse_int() {
        std::size_t start = pos_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
        bool digits = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            digits = true;
            ++pos_;
        }
        if (!digits) throw ParseError("expected an integer", start);
        return std::stoll(src_.substr(start, pos_ - start));
    }

    LeafTree parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        char c = src_[pos_];
        if (c == '(') {
            if (starts_tuple()) return coeff_leaf(parse_tuple());
            ++pos_;
            LeafTree inner = parse_term_tree();
            skip_ws();
            if (pos_ >= src_.size() || src_[pos_] != ')')
                throw ParseError("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (src_.compare(pos_, 4, "zbar") == 0) {
            pos_ += 4;
            return z_leaf(true);
        }
        if (c == 'z') {
            ++pos_;
            return z_leaf(false);
        }
        if (c == 'i' && pos_ + 1 < src_.size() &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            ++pos_;
            long long idx = parse_int();
            if (idx < 0 || idx >= (1 << level_))
                throw ParseError("generator index out of range for the level", pos_);
            return coeff_leaf(CN::gen(level_, static_cast<int>(idx)));
        }
        if (c == '+' || c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c)))
            return coeff_leaf(parse_real() * CN::one(level_));
        throw ParseError("syntax error", pos_);
    }

    CN parse_tuple() {
        ++pos_;  // '('
        CN out(level_);
        int j = 0;
        while (true) {
            skip_ws();
            if (j >= out.dim()) throw ParseError("too many coordinates for the level", pos_);
            out.c[j++] = parse_real();
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == ',') {
                ++pos_;
                continue;
            }
            if (pos_ < src_.size() && src_[pos_] == ')') {
                ++pos_;
                return out;
            }
            throw ParseError("expected ',' or ')' in a coordinate tuple", pos_);
        }
    }

    LeafTree coeff_leaf(const CN& c) { return {{Leaf{false, c, 0, false}}, BracketTree::single()}; }

    LeafTree z_leaf(bool conjugated) {
        long long e = 1;
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '^') {
            ++pos_;
            skip_ws();
            e = parse_int();
        }
        if (e > kMaxExponent || e < -kMaxExponent)
            throw ParseError("exponent outside the allowed window", pos_);
        return {{Leaf{true, CN::zero(level_), e, conjugated}}, BracketTree::single()};
    }

    LeafTree parse_term_tree() {
        LeafTree acc = parse_atom();
        skip_ws();
        while (pos_ < src_.size() && src_[pos_] == '*') {
            ++pos_;
            LeafTree next = parse_atom();
            acc.tree = BracketTree::combine(acc.tree, next.tree);
            for (const Leaf& l : next.leaves) acc.leaves.push_back(l);
            skip_ws();
        }
        return acc;
    }

    Term parse_term() {
        LeafTree lt = parse_term_tree();
        // canonicalize to the alternating coeff (z coeff)* pattern by
        // inserting unit leaves
        auto insert_at = [&](std::size_t j, Leaf leaf) {
            // split leaf j-1 (or j) so the new position j carries `leaf`
            if (j == 0) {
                lt.tree = lt.tree.split_leaf(0);
                lt.leaves.insert(lt.leaves.begin(), leaf);
            } else {
                lt.tree = lt.tree.split_leaf(static_cast<int>(j - 1));
                lt.leaves.insert(lt.leaves.begin() + j, leaf);
            }
        };
        Leaf unit_coeff{false, CN::one(level_), 0, false};
        Leaf unit_z{true, CN::zero(level_), 0, false};
        if (lt.leaves.front().is_z) insert_at(0, unit_coeff);
        for (std::size_t j = 0; j + 1 < lt.leaves.size();) {
            if (lt.leaves[j].is_z == lt.leaves[j + 1].is_z) {
                insert_at(j + 1, lt.leaves[j].is_z ? unit_coeff : unit_z);
            }
            ++j;
        }
        if (lt.leaves.back().is_z) insert_at(lt.leaves.size(), unit_coeff);

        std::vector<CN> coeffs;
        std::vector<long long> exps;
        std::vector<bool> conj;
        for (std::size_t j = 0; j < lt.leaves.size(); ++j) {
            if (j % 2 == 0) {
                if (lt.leaves[j].is_z) throw ParseError("internal: alternation failed", pos_);
                coeffs.push_back(lt.leaves[j].coeff);
            } else {
                if (!lt.leaves[j].is_z) throw ParseError("internal: alternation failed", pos_);
                exps.push_back(lt.leaves[j].exp);
                conj.push_back(lt.leaves[j].conjugated);
            }
        }
        return Term(level_, std::move(coeffs), std::move(exps),
                    std::move(conj), lt.tree);
    }
};

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_coeff(const CN& c) {
    if (is_real_scalar(c)) return format_real(c.c[0]);
    int nz = -1;
    bool single = true;
    for (int j = 0; j < c.dim(); ++j) {
        if (c.c[j] == 0.0) continue;
        if (nz >= 0) single = false;
        nz = j;
    }
    if (single && nz >= 1 && c.c[nz] == 1.0) return "i" + std::to_string(nz);
    std::string out = "(";
    for (int j = 0; j < c.dim(); ++j) {
        if (j) out += ",";
        out += format_real(c.c[j]);
    }
    return out + ")";
}

}  // namespace detail

inline Phrase parse_phrase_text(const std::string& src, int level) {
    return detail::PhraseParser(src, level).parse();
}

/// Canonical text form; parse(print(p)) == p structurally.
inline std::string print_term(const Term& t) {
    std::vector<std::string> leaf_text;
    for (int j = 0; j <= t.factors(); ++j) {
        leaf_text.push_back(detail::format_coeff(t.coeffs[j]));
        if (j < t.factors()) {
            std::string z = t.conj_flags[j] ? "zbar" : "z";
            if (t.exps[j] != 1) z += "^" + std::to_string(t.exps[j]);
            leaf_text.push_back(z);
        }
    }
    // fold the tree into text; suppress parentheses along the left spine
    struct Piece {
        std::string text;
        bool atom;
    };
    std::vector<Piece> stack;
    for (int tok : t.tree.tokens()) {
        if (tok >= 0) {
            stack.push_back({leaf_text[tok], true});
        } else {
            Piece b = stack.back();
            stack.pop_back();
            Piece a = stack.back();
            stack.pop_back();
            std::string rb = b.atom ? b.text : "(" + b.text + ")";
            stack.push_back({a.text + " * " + rb, false});
        }
    }
    return stack.back().text;
}

inline std::string print_phrase(const Phrase& p) {
    if (p.terms.empty()) return "0";
    std::string out;
    for (std::size_t j = 0; j < p.terms.size(); ++j) {
        if (j) out += " + ";
        out += print_term(p.terms[j]);
    }
    return out;
}

}  // namespace ocw

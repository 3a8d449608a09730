#include <catch2/catch_amalgamated.hpp>

#include "octowrap/json_io.hpp"
#include "octowrap/parse.hpp"
#include "testutil.hpp"

using namespace ocw;
using namespace ocw::testutil;

namespace {

bool terms_equal(const Term& a, const Term& b) {
    if (a.level != b.level || a.exps != b.exps || a.conj_flags != b.conj_flags ||
        !(a.tree == b.tree))
        return false;
    if (norm(a.center - b.center) != 0.0) return false;
    for (std::size_t j = 0; j < a.coeffs.size(); ++j)
        if (norm(a.coeffs[j] - b.coeffs[j]) != 0.0) return false;
    return true;
}

bool phrases_equal(const Phrase& a, const Phrase& b) {
    if (a.level != b.level || a.terms.size() != b.terms.size()) return false;
    for (std::size_t j = 0; j < a.terms.size(); ++j)
        if (!terms_equal(a.terms[j], b.terms[j])) return false;
    return true;
}

BracketTree random_tree(std::mt19937_64& g, int n) {
    BracketTree t = BracketTree::single();
    for (int j = 1; j < n; ++j) {
        std::uniform_int_distribution<int> pick(0, t.leaves() - 1);
        t = t.split_leaf(pick(g));
    }
    return t;
}

}  // namespace

TEST_CASE("grammar basics") {
    Phrase p = parse_phrase_text("i1 * z^-1 * i2", 3);
    REQUIRE(p.terms.size() == 1);
    const Term& t = p.terms[0];
    CHECK(t.factors() == 1);
    CHECK(t.exps[0] == -1);
    CHECK(norm(t.coeffs[0] - CN::gen(3, 1)) == 0.0);
    CHECK(norm(t.coeffs[1] - CN::gen(3, 2)) == 0.0);
    CHECK(t.tree == BracketTree::left(3));

    // parenthesized right-nested tree is preserved (with a unit pad at the end)
    Phrase q = parse_phrase_text("(i1 * (z * i2)) * z", 3);
    REQUIRE(q.terms.size() == 1);
    CHECK(q.terms[0].factors() == 2);
    // group (i1 (z i2)) keeps its right nesting; the trailing z picks up a
    // unit coefficient pad
    CHECK(q.terms[0].tree.str() == "((.(..))(..))");

    // sums, zbar, tuples, reals
    Phrase s = parse_phrase_text("2.5 * z^3 + zbar^-2 * (0,1,0,0,0,0,0,1) + -1.5", 3);
    REQUIRE(s.terms.size() == 3);
    CHECK(s.terms[0].exps[0] == 3);
    CHECK(s.terms[1].conj_flags[0]);
    CHECK(s.terms[2].factors() == 0);
    CHECK(norm(s.terms[2].coeffs[0] + 1.5 * CN::one(3)) == 0.0);
}

TEST_CASE("grammar errors carry positions") {
    REQUIRE_THROWS_AS(parse_phrase_text("z^999", 3), ParseError);
    REQUIRE_THROWS_AS(parse_phrase_text("i9 * z", 3), ParseError);
    REQUIRE_THROWS_AS(parse_phrase_text("i5", 2), ParseError);
    REQUIRE_THROWS_AS(parse_phrase_text("z *", 3), ParseError);
    REQUIRE_THROWS_AS(parse_phrase_text("(z * i1", 3), ParseError);
    REQUIRE_THROWS_AS(parse_phrase_text("(1,2,3,4,5)", 1), ParseError);
    try {
        parse_phrase_text("z ^ foo", 3);
        FAIL("expected error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
}

TEST_CASE("evaluation through the grammar") {
    // i1 * z * i2 at z = i4, left association
    Phrase p = parse_phrase_text("i1 * z * i2", 3);
    CN expect = mul(mul(CN::gen(3, 1), CN::gen(3, 4)), CN::gen(3, 2));
    CHECK(norm(eval(p, CN::gen(3, 4)) - expect) < 1e-15);

    // the tree matters: right nesting evaluates differently
    Phrase q = parse_phrase_text("i1 * (z * i2)", 3);
    CN expect_r = mul(CN::gen(3, 1), mul(CN::gen(3, 4), CN::gen(3, 2)));
    CHECK(norm(eval(q, CN::gen(3, 4)) - expect_r) < 1e-15);
    CHECK(norm(expect - expect_r) > 1.0);
}

TEST_CASE("print/parse round trip") {
    auto g = rng(81);
    std::uniform_int_distribution<int> nf(0, 3), coeff_kind(0, 2);
    std::uniform_int_distribution<long long> ne(-5, 5);
    for (int it = 0; it < 60; ++it) {
        int level = (it % 3 == 0) ? 2 : 3;
        int k = nf(g);
        std::vector<CN> coeffs;
        std::vector<long long> exps;
        std::vector<bool> conj;
        for (int j = 0; j <= k; ++j) {
            int kind = coeff_kind(g);
            if (kind == 0)
                coeffs.push_back(1.75 * CN::one(level));
            else if (kind == 1)
                coeffs.push_back(CN::gen(level, 1 + (it % ((1 << level) - 1))));
            else
                coeffs.push_back(random_num(g, level, 1.5));
        }
        for (int j = 0; j < k; ++j) {
            exps.push_back(ne(g));
            conj.push_back((it + j) % 3 == 0);
        }
        Term t(level, coeffs, exps, conj, random_tree(g, 2 * k + 1));
        Phrase p(level, {t});
        Phrase back = parse_phrase_text(print_phrase(p), level);
        REQUIRE(phrases_equal(p, back));
    }
}

TEST_CASE("json round trip") {
    auto g = rng(82);
    for (int it = 0; it < 20; ++it) {
        int k = 1 + (it % 3);
        std::vector<CN> coeffs;
        std::vector<long long> exps;
        std::vector<bool> conj;
        for (int j = 0; j <= k; ++j) coeffs.push_back(random_num(g, 3, 1.0));
        for (int j = 0; j < k; ++j) {
            exps.push_back((it % 7) - 3);
            conj.push_back(it % 2 == 0);
        }
        Term t(3, coeffs, exps, conj, random_tree(g, 2 * k + 1));
        if (it % 4 == 0) t.center = random_num(g, 3, 1.0);
        Phrase p(3, {t});
        Phrase back = phrase_from_json(to_json(p));
        REQUIRE(phrases_equal(p, back));
    }

    // path round trip
    Path c = PlaneCircle{CN::one(3), 2.5, Direction::gen(3, 3), -2};
    Path c2 = path_from_json(to_json(c), 3);
    CHECK(std::get<PlaneCircle>(c2).winding == -2);
    CHECK(std::get<PlaneCircle>(c2).radius == 2.5);

    Path l = Polyline{{CN::zero(3), CN::one(3)}};
    Path l2 = path_from_json(to_json(l), 3);
    CHECK(std::get<Polyline>(l2).vertices.size() == 2);
}

TEST_CASE("cayley json") {
    CN z = CN::gen(3, 5) + 2.0 * CN::one(3);
    CN back = cn_from_json(to_json(z));
    CHECK(norm(z - back) == 0.0);
    REQUIRE_THROWS_AS(coords_from_json(json::array({1, 2, 3}), 3), std::invalid_argument);
}

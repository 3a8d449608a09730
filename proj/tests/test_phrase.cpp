#include <catch2/catch_amalgamated.hpp>

#include "octowrap/phrase.hpp"
#include "testutil.hpp"

using namespace ocw;
using namespace ocw::testutil;

namespace {

Phrase random_poly_phrase(std::mt19937_64& g, int level, int terms, int max_factors,
                          long long min_exp, long long max_exp) {
    std::uniform_int_distribution<int> nf(1, max_factors);
    std::uniform_int_distribution<long long> ne(min_exp, max_exp);
    Phrase p(level);
    for (int t = 0; t < terms; ++t) {
        int k = nf(g);
        std::vector<CN> coeffs;
        std::vector<long long> exps;
        std::vector<bool> cf;
        for (int j = 0; j <= k; ++j) coeffs.push_back(random_num(g, level, 1.5));
        for (int j = 0; j < k; ++j) {
            exps.push_back(ne(g));
            cf.push_back(false);
        }
        p.terms.emplace_back(level, coeffs, exps, cf, BracketTree::left(2 * k + 1));
    }
    return p;
}

}  // namespace

TEST_CASE("bracket tree roundtrip and surgery") {
    BracketTree t = BracketTree::left(5);
    CHECK(t.str() == "((((..).).).)");
    CHECK(BracketTree::parse(t.str()) == t);
    CHECK(t.leaves() == 5);
    CHECK(t.internal_nodes() == 4);

    BracketTree r = BracketTree::parse("(.(.(..)))");
    CHECK(r.leaves() == 4);
    CHECK(BracketTree::parse(r.str()) == r);

    // splitting then removing a leaf restores the tree
    BracketTree s = t.split_leaf(2);
    CHECK(s.leaves() == 6);
    CHECK(s.remove_leaf(3) == t);

    // fold respects order
    std::vector<CN> leaves;
    for (int j = 1; j <= 3; ++j) leaves.push_back(CN::gen(3, j));
    CN left = BracketTree::left(3).fold(leaves, [](const CN& a, const CN& b) { return mul(a, b); });
    CN right = BracketTree::parse("(.(..))").fold(leaves, [](const CN& a, const CN& b) { return mul(a, b); });
    CHECK(norm(left - mul(mul(CN::gen(3, 1), CN::gen(3, 2)), CN::gen(3, 3))) < 1e-15);
    CHECK(norm(right - mul(CN::gen(3, 1), mul(CN::gen(3, 2), CN::gen(3, 3)))) < 1e-15);
}

TEST_CASE("term evaluation") {
    // {i1 z i2} at z = i3, left tree: (i1 i3) i2
    Term t = Term::monomial(CN::gen(3, 1), 1, CN::gen(3, 2));
    CN expect = mul(mul(CN::gen(3, 1), CN::gen(3, 3)), CN::gen(3, 2));
    CHECK(norm(eval(t, CN::gen(3, 3)) - expect) < 1e-15);

    // right tree differs in the octonions (evaluate at z = i4 so the triple
    // does not fall into an associative quaternion subalgebra)
    Term tl(3, {CN::gen(3, 1), CN::gen(3, 2)}, {1}, {false}, BracketTree::left(3));
    Term tr(3, {CN::gen(3, 1), CN::gen(3, 2)}, {1}, {false}, BracketTree::parse("(.(..))"));
    CN left_val = mul(mul(CN::gen(3, 1), CN::gen(3, 4)), CN::gen(3, 2));
    CN right_val = mul(CN::gen(3, 1), mul(CN::gen(3, 4), CN::gen(3, 2)));
    CHECK(norm(eval(tl, CN::gen(3, 4)) - left_val) < 1e-15);
    CHECK(norm(eval(tr, CN::gen(3, 4)) - right_val) < 1e-15);
    CHECK(norm(left_val - right_val) > 1.0);

    // z^0 with coefficient 1 evaluates to 1 everywhere
    Phrase z0 = Phrase::zpow(3, 0);
    auto g = rng(21);
    for (int it = 0; it < 10; ++it)
        CHECK(norm(eval(z0, random_num(g, 3, 2.0)) - CN::one(3)) < 1e-15);

    // {1 z^-1 1} at z=2 is 0.5
    CHECK(norm(eval(Phrase::zpow(3, -1), 2.0 * CN::one(3)) - 0.5 * CN::one(3)) < 1e-15);

    // pole error carries the divisor
    try {
        eval(Phrase::zpow(3, -2), CN::zero(3));
        FAIL("expected pole error");
    } catch (const PoleError& e) {
        CHECK(e.divisor == -2);
    }

    // exponent window enforced
    REQUIRE_THROWS_AS(Phrase::zpow(3, 999), std::invalid_argument);
}

TEST_CASE("normalize folds scalars and merges exponents") {
    // {2 z 3 z^2 1} -> {6 z^3 1}
    Term t(3, {2.0 * CN::one(3), 3.0 * CN::one(3), CN::one(3)}, {1, 2}, {false, false},
           BracketTree::left(5));
    Phrase p(3, {t});
    Phrase n = normalize(p);
    REQUIRE(n.terms.size() == 1);
    CHECK(n.terms[0].factors() == 1);
    CHECK(n.terms[0].exps[0] == 3);
    CHECK(norm(n.terms[0].coeffs[0] - 6.0 * CN::one(3)) < 1e-15);

    // {i1 z 1 z^-1 i2} -> constant i1 i2
    Term t2(3, {CN::gen(3, 1), CN::one(3), CN::gen(3, 2)}, {1, -1}, {false, false},
            BracketTree::left(5));
    Phrase n2 = normalize(Phrase(3, {t2}));
    REQUIRE(n2.terms.size() == 1);
    CHECK(n2.terms[0].factors() == 0);
    CHECK(norm(n2.terms[0].coeffs[0] - mul(CN::gen(3, 1), CN::gen(3, 2))) < 1e-12);

    // zero terms drop, identical terms combine
    Phrase q(3);
    q.terms.push_back(Term::monomial(CN::gen(3, 1), 2, CN::gen(3, 2)));
    q.terms.push_back(Term::monomial(CN::gen(3, 1), 2, CN::gen(3, 2)));
    q.terms.push_back(Term::monomial(CN::zero(3), 5, CN::one(3)));
    Phrase nq = normalize(q);
    REQUIRE(nq.terms.size() == 1);
    CHECK(norm(nq.terms[0].coeffs[0] - 2.0 * CN::gen(3, 1)) < 1e-15);
}

TEST_CASE("normalize preserves evaluation on random phrases") {
    auto g = rng(22);
    for (int it = 0; it < 30; ++it) {
        Phrase p = random_poly_phrase(g, 3, 4, 3, -3, 3);
        // sprinkle real scalar coefficients to exercise folding
        for (Term& t : p.terms)
            if (t.factors() >= 2) t.coeffs[1] = 1.7 * CN::one(3);
        Phrase n = normalize(p);
        for (int s = 0; s < 10; ++s) {
            CN z = random_unit(g, 3) * (0.7 + 1.1 * std::abs(std::sin(s + 1.0)));
            CN a = eval(p, z);
            CN b = eval(n, z);
            REQUIRE(norm(a - b) <= 1e-12 * std::max(1.0, std::max(norm(a), norm(b))));
        }
    }
}

TEST_CASE("derivative of powers and constants") {
    // p = z^3, h = 1 -> 3 z^2
    Phrase p = Phrase::zpow(3, 3);
    Phrase dp = derivative_at_1(p);
    auto g = rng(23);
    for (int it = 0; it < 10; ++it) {
        CN z = random_num(g, 3, 1.5);
        CHECK(norm(eval(dp, z) - 3.0 * powi(z, 2)) < 1e-12);
    }
    // constants die
    CHECK(derivative_at_1(Phrase::constant(CN::gen(3, 5))).terms.empty());
    // negative powers: d z^-2 = -2 z^-3
    Phrase dm = derivative_at_1(Phrase::zpow(3, -2));
    for (int it = 0; it < 10; ++it) {
        CN z = random_unit(g, 3) * 1.3;
        CHECK(norm(eval(dm, z) + 2.0 * powi(z, -3)) < 1e-11);
    }
}

TEST_CASE("derivative operator matches finite differences") {
    auto g = rng(24);
    const double eps = 1e-6;
    for (int it = 0; it < 40; ++it) {
        Phrase p = random_poly_phrase(g, 3, 3, 3, 0, 4);
        DerivativeOp op = derivative_op(p);
        CN z = random_num(g, 3, 1.0);
        CN h = random_unit(g, 3);
        CN fd = (1.0 / eps) * (eval(p, z + eps * h) - eval(p, z));
        CN an = op.apply(z, h);
        REQUIRE(norm(fd - an) < 5e-5 * std::max(1.0, norm(an)));
    }
}

TEST_CASE("derivative linearity in the phrase") {
    auto g = rng(25);
    for (int it = 0; it < 20; ++it) {
        Phrase p = random_poly_phrase(g, 3, 2, 2, -2, 3);
        Phrase q = random_poly_phrase(g, 3, 2, 2, -2, 3);
        Phrase sum = p;
        sum += q;
        CN z = random_unit(g, 3) * 1.4;
        CN h = random_num(g, 3, 1.0);
        CN a = derivative_op(sum).apply(z, h);
        CN b = derivative_op(p).apply(z, h) + derivative_op(q).apply(z, h);
        REQUIRE(norm(a - b) < 1e-12 * std::max(1.0, norm(a)));
    }
}

TEST_CASE("conjugated factor differential symmetry") {
    // both orderings of the complete differential of z^n conj(z)^m agree
    auto g = rng(26);
    for (int it = 0; it < 30; ++it) {
        std::uniform_int_distribution<long long> ne(0, 4);
        long long n = ne(g), m = ne(g);
        Term a(3, {CN::one(3), CN::one(3), CN::one(3)}, {n, m}, {false, true}, BracketTree::left(5));
        Term b(3, {CN::one(3), CN::one(3), CN::one(3)}, {m, n}, {true, false}, BracketTree::left(5));
        CN z = random_num(g, 3, 1.5);
        CN h = random_num(g, 3, 1.0);
        CN da = derivative_op(Phrase(3, {a})).apply(z, h);
        CN db = derivative_op(Phrase(3, {b})).apply(z, h);
        REQUIRE(norm(da - db) < 1e-11 * std::max(1.0, norm(da)));
    }
}

TEST_CASE("left antiderivative") {
    // {a z^2 b} -> {a z^3 b}/3
    Term t = Term::monomial(CN::gen(3, 1), 2, CN::gen(3, 2));
    Phrase a1 = antiderivative_left(Phrase(3, {t}), 1);
    REQUIRE(a1.terms.size() == 1);
    CHECK(a1.terms[0].exps[0] == 3);
    CHECK(norm(a1.terms[0].coeffs[0] - (1.0 / 3.0) * CN::gen(3, 1)) < 1e-15);

    // l=2 on {a z b} -> {a z^3 b}/6
    Phrase a2 = antiderivative_left(Phrase(3, {Term::monomial(CN::gen(3, 1), 1, CN::gen(3, 2))}), 2);
    REQUIRE(a2.terms.size() == 1);
    CHECK(a2.terms[0].exps[0] == 3);
    CHECK(norm(a2.terms[0].coeffs[0] - (1.0 / 6.0) * CN::gen(3, 1)) < 1e-15);

    // logarithmic single factor is an error
    REQUIRE_THROWS_AS(antiderivative_left(Phrase::zpow(3, -1), 1), std::domain_error);
    // non-polynomial trailing factor is an error
    Term bad(3, {CN::one(3), CN::gen(3, 1), CN::one(3)}, {1, -2}, {false, false},
             BracketTree::left(5));
    REQUIRE_THROWS_AS(antiderivative_left(Phrase(3, {bad}), 1), std::domain_error);

    // (f1 f2) with f1 = z, f2 = z: derivative of antiderivative evaluates to z*z
    Term zz(3, {CN::one(3), CN::one(3), CN::one(3)}, {1, 1}, {false, false}, BracketTree::left(5));
    Phrase anti = antiderivative_left(Phrase(3, {zz}), 1);
    Phrase back = derivative_at_1(anti);
    auto g = rng(27);
    for (int it = 0; it < 10; ++it) {
        CN z = random_num(g, 3, 1.5);
        REQUIRE(norm(eval(back, z) - mul(z, z)) < 1e-12 * std::max(1.0, norm_sq(z)));
    }
}

TEST_CASE("antiderivation inverts derivation on random phrases") {
    auto g = rng(28);
    for (int it = 0; it < 25; ++it) {
        Phrase p = random_poly_phrase(g, 3, 3, 3, 0, 4);
        Phrase back = derivative_at_1(antiderivative_left(p, 1));
        for (int s = 0; s < 10; ++s) {
            CN z = random_num(g, 3, 1.4);
            CN a = eval(p, z);
            CN b = eval(back, z);
            REQUIRE(norm(a - b) <= 1e-10 * std::max(1.0, norm(a)));
        }
        // order 2 as well
        Phrase back2 = derivative_at_1(derivative_at_1(antiderivative_left(p, 2)));
        CN z = random_num(g, 3, 1.2);
        REQUIRE(norm(eval(p, z) - eval(back2, z)) <= 1e-9 * std::max(1.0, norm(eval(p, z))));
    }
}

TEST_CASE("phrase product") {
    auto g = rng(29);
    for (int it = 0; it < 25; ++it) {
        Phrase p = random_poly_phrase(g, 3, 2, 2, -2, 3);
        Phrase q = random_poly_phrase(g, 3, 2, 2, -2, 3);
        Phrase pq = mul_phrases(p, q);
        CN z = random_unit(g, 3) * 1.5;
        CN a = eval(pq, z);
        CN b = mul(eval(p, z), eval(q, z));
        REQUIRE(norm(a - b) < 1e-11 * std::max(1.0, norm(b)));
    }
}

TEST_CASE("D and d_l on monomials") {
    auto g = rng(30);
    // D(z^m) = m z^{m-1}
    for (long long m : {-3LL, -1LL, 0LL, 1LL, 4LL}) {
        Phrase d = derivative_at_1(Phrase::zpow(3, m));
        CN z = random_unit(g, 3) * 1.2;
        CN expect = static_cast<double>(m) * powi(z, m - 1);
        if (m == 0)
            CHECK(d.terms.empty());
        else
            CHECK(norm(eval(d, z) - expect) < 1e-11);
    }
    // d_0(z^m) = -m z^m
    for (long long m : {-2LL, 1LL, 3LL}) {
        Phrase d = d_l(Phrase::zpow(3, m), 0);
        CN z = random_unit(g, 3) * 1.1;
        CHECK(norm(eval(d, z) + static_cast<double>(m) * powi(z, m)) < 1e-11);
    }
    // d_k(alpha z^l) = -l alpha z^{l+k}
    for (long long k : {-2LL, 1LL, 2LL}) {
        for (long long l : {-1LL, 2LL}) {
            Phrase base(3, {Term::power(3, 0.75 * CN::one(3), l)});
            Phrase d = d_l(base, k);
            CN z = random_unit(g, 3) * 1.3;
            CN expect = (-static_cast<double>(l) * 0.75) * powi(z, l + k);
            CHECK(norm(eval(d, z) - expect) < 1e-11);
        }
    }
}

TEST_CASE("d_l is a derivation of the phrase product") {
    auto g = rng(31);
    for (int it = 0; it < 20; ++it) {
        Phrase p = random_poly_phrase(g, 3, 2, 2, -2, 3);
        Phrase q = random_poly_phrase(g, 3, 2, 2, -2, 3);
        long long l = static_cast<long long>(it % 5) - 2;
        Phrase lhs = d_l(mul_phrases(p, q), l);
        Phrase rhs = mul_phrases(d_l(p, l), q);
        rhs += mul_phrases(p, d_l(q, l));
        CN z = random_unit(g, 3) * 1.4;
        CN a = eval(lhs, z);
        CN b = eval(rhs, z);
        REQUIRE(norm(a - b) < 1e-10 * std::max(1.0, norm(a)));
    }
}

TEST_CASE("plane restriction") {
    Direction M1 = Direction::gen(3, 1);

    // single factor: always reducible in place, s+m = -1
    Term t1 = Term::monomial(CN::gen(3, 2), -1, CN::gen(3, 4));
    auto pf1 = restrict_to_plane(t1, M1);
    REQUIRE(pf1.has_value());
    CHECK(pf1->s == -1);
    CHECK(pf1->m == 0);
    CHECK(norm(pf1->phi(M1.value) - mul(mul(CN::gen(3, 2), CN::gen(3, 1)), CN::gen(3, 4))) < 1e-12);

    // {i2 z i2 z 1} with M = i1 reduces with conjugation: (i2 i2)(conj(z) z)
    Term t2(3, {CN::gen(3, 2), CN::gen(3, 2), CN::one(3)}, {1, 1}, {false, false},
            BracketTree::left(5));
    auto pf2 = restrict_to_plane(t2, M1);
    REQUIRE(pf2.has_value());
    CHECK(pf2->s + pf2->m == 2);
    CHECK(pf2->s == 1);
    CHECK(pf2->m == 1);

    // verification: reconstruct on C_M
    for (int it = 0; it < 10; ++it) {
        CN z = from_complex(std::polar(0.5 + it * 0.2, 0.7 * it), M1);
        CN v = mul(powi(z, pf2->s), powi(conj(z), pf2->m));
        REQUIRE(norm(eval(t2, z) - pf2->phi(v)) < 1e-10);
    }

    // a genuinely mixed multi-factor term in the octonions is not reducible
    Term t3(3, {CN::gen(3, 2), CN::gen(3, 4), CN::one(3)}, {-1, 0}, {false, false},
            BracketTree::left(5));
    // i2 (z^-1) i4: associator breaks the bubble rewriting
    auto pf3 = restrict_to_plane(t3, M1);
    // the i4 coefficient anti-commutes but the collapsed form fails the associator;
    // the term is single non-trivial factor only after dropping z^0, so reduce from
    // the raw two-factor shape
    if (pf3.has_value()) {
        // if it reduced, it must evaluate correctly
        for (int it = 0; it < 5; ++it) {
            CN z = from_complex(std::polar(1.0 + it * 0.3, 0.4 * it + 0.2), M1);
            CN v = mul(powi(z, pf3->s), powi(conj(z), pf3->m));
            REQUIRE(norm(eval(t3, z) - pf3->phi(v)) < 1e-9);
        }
    }

    // mixed coefficient (1 + i2): splits into two reducible parts, so the
    // single-form contract reports not-reducible
    Term t4(3, {CN::one(3) + CN::gen(3, 2), CN::one(3), CN::gen(3, 4)}, {1, -2},
            {false, false}, BracketTree::left(5));
    auto forms = plane_reduce(t4, M1);
    CHECK(forms.size() != 1);
}

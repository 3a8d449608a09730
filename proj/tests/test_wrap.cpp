#include <catch2/catch_amalgamated.hpp>

#include "octowrap/wrap.hpp"
#include "testutil.hpp"

using namespace ocw;
using namespace ocw::testutil;

namespace {

const BaseLieAlgebra& sl2() {
    static BaseLieAlgebra g = BaseLieAlgebra::sl2();
    return g;
}

}  // namespace

TEST_CASE("wrap bracket on pure tensors") {
    // [z (x) E, z (x) F] = z^2 (x) H
    WrapElement a = WrapElement::pure(sl2(), Phrase::zpow(3, 1), {1, 0, 0});
    WrapElement b = WrapElement::pure(sl2(), Phrase::zpow(3, 1), {0, 0, 1});
    WrapElement c = wrap_bracket(a, b);
    REQUIRE(c.pairs.size() == 1);
    auto g = rng(71);
    for (int it = 0; it < 5; ++it) {
        CN z = random_num(g, 3, 1.2);
        auto v = eval_wrap(c, z);
        CHECK(norm(v[0]) < 1e-13);
        CHECK(norm(v[2]) < 1e-13);
        CHECK(norm(v[1] - powi(z, 2)) < 1e-12);  // H component = z^2
    }

    // [P (x) x, Q (x) x] = 0
    WrapElement d = WrapElement::pure(sl2(), Phrase::zpow(3, 2), {1, 0, 0});
    WrapElement e = wrap_bracket(a, d);
    CHECK(e.pairs.empty());

    // antisymmetry on real-coefficient phrases, via evaluation
    WrapElement f = WrapElement::pure(sl2(), Phrase::zpow(3, 2), {0, 1, 0});
    WrapElement ab = wrap_bracket(a, f);
    WrapElement ba = wrap_bracket(f, a);
    for (int it = 0; it < 5; ++it) {
        CN z = random_num(g, 3, 1.1);
        auto va = eval_wrap(ab, z);
        auto vb = eval_wrap(ba, z);
        for (int t = 0; t < 3; ++t) REQUIRE(norm(va[t] + vb[t]) < 1e-12);
    }
}

TEST_CASE("cocycle on monomials") {
    Direction M = Direction::gen(3, 1);
    CN z0 = CN::zero(3);
    // P = z, Q = z^{-1}, (x|y) = (E|F) = 1 -> omega = M
    WrapElement a = WrapElement::pure(sl2(), Phrase::zpow(3, 1), {1, 0, 0});
    WrapElement b = WrapElement::pure(sl2(), Phrase::zpow(3, -1), {0, 0, 1});
    CHECK(norm(cocycle(z0, a, b, M) - M.value) < 1e-12);

    // P = z^2, Q = z^{-1}: total degree 0, no residue
    WrapElement c = WrapElement::pure(sl2(), Phrase::zpow(3, 2), {1, 0, 0});
    CHECK(norm(cocycle(z0, c, b, M)) < 1e-12);

    // omega(a, a) = 0 for real-coefficient P (exactness of (P^2)'/2)
    Phrase p(3);
    p += Phrase::zpow(3, 2);
    p += Phrase::zpow(3, -1);
    WrapElement s = WrapElement::pure(sl2(), p, {0, 1, 0});
    CHECK(norm(cocycle(z0, s, s, M)) < 1e-12);

    // general rule: omega(z^m (x) x, z^n (x) y) = m delta_{m,-n} (x|y) M
    for (long long m : {-2LL, 1LL, 3LL})
        for (long long n : {-3LL, -1LL, 2LL}) {
            WrapElement u = WrapElement::pure(sl2(), Phrase::zpow(3, m), {0, 1, 0});
            WrapElement v = WrapElement::pure(sl2(), Phrase::zpow(3, n), {0, 1, 0});
            CN w = cocycle(z0, u, v, M);
            CN expect = (m + n == 0) ? (2.0 * static_cast<double>(m)) * M.value : CN::zero(3);
            REQUIRE(norm(w - expect) < 1e-12);  // (H|H) = 2
        }
}

TEST_CASE("extended bracket") {
    Direction M = Direction::gen(3, 1);
    CN z0 = CN::zero(3);

    // pure wrap against pure wrap reduces to the plain bracket plus cocycle K
    WrapElement a = WrapElement::pure(sl2(), Phrase::zpow(3, 1), {1, 0, 0});
    WrapElement b = WrapElement::pure(sl2(), Phrase::zpow(3, -1), {0, 0, 1});
    ExtendedElement A = ExtendedElement::make(a);
    ExtendedElement B = ExtendedElement::make(b);
    ExtendedElement C = extended_bracket(A, B, z0, M);
    CHECK(norm(C.kappa - M.value) < 1e-12);
    CHECK(norm(C.delta) < 1e-14);
    REQUIRE(C.wrap.pairs.size() == 1);

    // d against z^m (x) x: sf d z^m = m z^m
    for (long long m : {-2LL, 3LL}) {
        ExtendedElement D = ExtendedElement::make(WrapElement{3, &sl2(), {}});
        D.delta = CN::one(3);
        WrapElement xm = WrapElement::pure(sl2(), Phrase::zpow(3, m), {0, 1, 0});
        ExtendedElement R = extended_bracket(D, ExtendedElement::make(xm), z0, M);
        auto g = rng(72);
        CN z = random_unit(g, 3) * 1.2;
        auto v = eval_wrap(R.wrap, z);
        CHECK(norm(v[1] - static_cast<double>(m) * powi(z, m)) < 1e-11);
        CHECK(norm(R.kappa) < 1e-14);
    }

    // graded antisymmetry of the d-action term on pure states: swapping the
    // (k, j) attachment flips by (-1)^{chi(k,j)+1}
    ExtendedElement Dk = ExtendedElement::make(WrapElement{3, &sl2(), {}});
    Dk.delta = CN::gen(3, 2);  // pure state e i_2 d
    WrapElement xw = WrapElement::pure(sl2(), Phrase::zpow(3, 2), {0, 1, 0}, 3);
    ExtendedElement r1 = extended_bracket(Dk, ExtendedElement::make(xw), z0, M);
    ExtendedElement r2 = extended_bracket(ExtendedElement::make(xw), Dk, z0, M);
    auto g = rng(73);
    CN z = random_unit(g, 3) * 1.1;
    auto v1 = eval_wrap(r1.wrap, z);
    auto v2 = eval_wrap(r2.wrap, z);
    double sgn = (grade_sign_exponent(3, 2) + 1) % 2 == 0 ? 1.0 : -1.0;
    for (int t = 0; t < 3; ++t) REQUIRE(norm(v1[t] - sgn * v2[t]) < 1e-11);
}

TEST_CASE("witt relation") {
    // [d_1, d_{-1}] = 2 d_0 and friends, exactly on monomials
    for (long long k = -5; k <= 5; ++k)
        for (long long j = -5; j <= 5; ++j)
            for (const WittRow& row : witt_bracket(k, j))
                REQUIRE(row.defect == 0.0);
}

TEST_CASE("virasoro central term") {
    VirasoroBracket v = virasoro_bracket(2, CN::zero(3), -2, CN::zero(3));
    CHECK(v.d_coeff == 4);
    CHECK(v.d_index == 0);
    CHECK(v.c_coeff == Catch::Approx(0.5));

    VirasoroBracket v2 = virasoro_bracket(0, CN::zero(3), 0, CN::zero(3));
    CHECK(v2.d_coeff == 0);
    CHECK(v2.c_coeff == 0.0);

    VirasoroBracket v3 = virasoro_bracket(3, CN::one(3), 1, CN::gen(3, 2));
    CHECK(v3.d_coeff == 2);
    CHECK(v3.d_index == 4);
    CHECK(v3.c_coeff == 0.0);

    for (long long jj = -5; jj <= 5; ++jj) {
        VirasoroBracket vb = virasoro_bracket(jj, CN::zero(3), -jj, CN::zero(3));
        CHECK(vb.c_coeff == Catch::Approx(static_cast<double>(jj * jj * jj - jj) / 12.0));
    }
}

TEST_CASE("d_l is a derivation of the extended bracket") {
    Direction M = Direction::gen(3, 1);
    CN z0 = CN::zero(3);
    auto g = rng(74);
    std::uniform_int_distribution<long long> ee(-3, 3);
    for (int it = 0; it < 30; ++it) {
        long long l = ee(g);
        Phrase P = Phrase::zpow(3, ee(g));
        Phrase Q = Phrase::zpow(3, ee(g));
        WrapElement a = WrapElement::pure(sl2(), P, {1, 0, 0});
        WrapElement b = WrapElement::pure(sl2(), Q, {0, 0, 1});
        // wrap parts
        WrapElement lhs = d_l_wrap(l, wrap_bracket(a, b));
        WrapElement rhs = wrap_bracket(d_l_wrap(l, a), b);
        rhs += wrap_bracket(a, d_l_wrap(l, b));
        CN z = random_unit(g, 3) * 1.3;
        auto vl = eval_wrap(lhs, z);
        auto vr = eval_wrap(rhs, z);
        for (int t = 0; t < 3; ++t)
            REQUIRE(norm(vl[t] - vr[t]) < 1e-9 * std::max(1.0, norm(vl[t])));
        // K components: omega(d_l a, b) + omega(a, d_l b) = 0
        CN w = cocycle(z0, d_l_wrap(l, a), b, M) + cocycle(z0, a, d_l_wrap(l, b), M);
        REQUIRE(norm(w) < 1e-9);
    }
}

TEST_CASE("cocycle identity suite") {
    auto rows = cocycle_identity_suite(sl2(), 120, 999);
    REQUIRE(rows.size() == 4);
    for (const SuiteRow& r : rows) {
        INFO(r.identity);
        CHECK(r.defect < 1e-9);
    }
}

TEST_CASE("central generator is structural") {
    // [K-part, K-part] contributes nothing: two elements with only kappa
    ExtendedElement A = ExtendedElement::make(WrapElement{3, &sl2(), {}});
    A.kappa = CN::gen(3, 1);
    ExtendedElement B = ExtendedElement::make(WrapElement{3, &sl2(), {}});
    B.kappa = CN::gen(3, 2);
    ExtendedElement C = extended_bracket(A, B, CN::zero(3), Direction::gen(3, 1));
    CHECK(C.wrap.pairs.empty());
    CHECK(norm(C.kappa) == 0.0);
    CHECK(norm(C.delta) == 0.0);
}

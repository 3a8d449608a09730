#include <catch2/catch_amalgamated.hpp>

#include "octowrap/cayley.hpp"
#include "testutil.hpp"

using namespace ocw;
using namespace ocw::testutil;

namespace {

// Independent doubling-formula product on coordinate halves, used as the
// oracle against the table-driven mul.
CN mul_recursive(const CN& a, const CN& b, int level) {
    if (level == 0) {
        CN r(a.level);
        r.c[0] = a.c[0] * b.c[0];
        return r;
    }
    int h = 1 << (level - 1);
    auto lo = [&](const CN& z) {
        CN r = z;
        for (int j = h; j < 8; ++j) r.c[j] = 0.0;
        return r;
    };
    auto hi = [&](const CN& z) {
        CN r(z.level);
        for (int j = 0; j < h; ++j) r.c[j] = z.c[j + h];
        return r;
    };
    auto join = [&](const CN& u, const CN& v) {
        CN r = u;
        for (int j = 0; j < h; ++j) r.c[j + h] = v.c[j];
        return r;
    };
    auto cj = [&](CN z) {
        for (int j = 1; j < h; ++j) z.c[j] = -z.c[j];
        return z;
    };
    CN u = lo(a), v = hi(a), w = lo(b), x = hi(b);
    CN first = mul_recursive(u, w, level - 1) - mul_recursive(cj(x), v, level - 1);
    CN second = mul_recursive(x, u, level - 1) + mul_recursive(v, cj(w), level - 1);
    return join(first, second);
}

}  // namespace

TEST_CASE("generator table basics") {
    REQUIRE_THROWS_AS(make_table(0), std::invalid_argument);
    REQUIRE_THROWS_AS(make_table(4), std::invalid_argument);

    for (int r = 1; r <= 3; ++r) {
        const MulTable& t = table(r);
        int n = 1 << r;
        for (int j = 0; j < n; ++j) {
            // i_0 i_j = i_j i_0 = i_j
            CHECK(t.index[0][j] == j);
            CHECK(t.sign[0][j] == 1);
            CHECK(t.index[j][0] == j);
            CHECK(t.sign[j][0] == 1);
            if (j >= 1) {
                // i_j^2 = -1
                CHECK(t.index[j][j] == 0);
                CHECK(t.sign[j][j] == -1);
            }
            for (int k = 1; k < n; ++k) {
                if (j == 0 || j == k) continue;
                // anti-commutation, exact
                CHECK(t.index[j][k] == t.index[k][j]);
                CHECK(t.sign[j][k] == -t.sign[k][j]);
            }
        }
    }
}

TEST_CASE("doubling index conventions") {
    const MulTable& q = table(2);
    CHECK(q.index[1][2] == 3);  // N3 = N1 N2
    CHECK(q.sign[1][2] == 1);
    const MulTable& o = table(3);
    for (int p = 1; p <= 3; ++p) {
        CHECK(o.index[p][4] == 4 + p);  // N_{4+p} = N_p N_4
        CHECK(o.sign[p][4] == 1);
    }
}

TEST_CASE("octonion table restricted to quaternion indices equals quaternion table") {
    const MulTable& q = table(2);
    const MulTable& o = table(3);
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            CHECK(o.sign[j][k] == q.sign[j][k]);
            CHECK(o.index[j][k] == q.index[j][k]);
        }
}

TEST_CASE("basic products") {
    // (1+i1)(1-i1) = 2
    CN a = CN::one(2) + CN::gen(2, 1);
    CN b = CN::one(2) - CN::gen(2, 1);
    CHECK(norm(mul(a, b) - 2.0 * CN::one(2)) < 1e-15);

    // i1 i2 = i3
    CHECK(norm(mul(CN::gen(2, 1), CN::gen(2, 2)) - CN::gen(2, 3)) < 1e-15);

    // octonion associator of (i1, i2, i4) differs by sign between orders
    CN lhs = mul(mul(CN::gen(3, 1), CN::gen(3, 2)), CN::gen(3, 4));
    CN rhs = mul(CN::gen(3, 1), mul(CN::gen(3, 2), CN::gen(3, 4)));
    CHECK(norm(lhs + rhs) < 1e-15);  // equal magnitude, opposite sign
    CHECK(norm(lhs) == 1.0);
}

TEST_CASE("table product matches coordinate-wise doubling oracle") {
    auto g = rng(11);
    for (int r = 1; r <= 3; ++r) {
        for (int it = 0; it < 200; ++it) {
            CN a = random_num(g, r, 2.0);
            CN b = random_num(g, r, 2.0);
            CN via_table = mul(a, b);
            CN via_recursion = mul_recursive(a, b, r);
            REQUIRE(norm(via_table - via_recursion) < 1e-12);
        }
    }
}

TEST_CASE("norm multiplicativity and z conj(z) = |z|^2") {
    auto g = rng(12);
    for (int it = 0; it < 500; ++it) {
        CN x = random_num(g, 3, 3.0);
        CN y = random_num(g, 3, 3.0);
        double lhs = norm(mul(x, y));
        double rhs = norm(x) * norm(y);
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
        CN zz = mul(x, conj(x));
        REQUIRE(std::abs(re(zz) - norm_sq(x)) < 1e-12 * (1.0 + norm_sq(x)));
        REQUIRE(norm(im(zz)) < 1e-12 * (1.0 + norm_sq(x)));
    }
}

TEST_CASE("alternativity") {
    auto g = rng(13);
    for (int it = 0; it < 300; ++it) {
        CN x = random_num(g, 3, 2.0);
        CN y = random_num(g, 3, 2.0);
        CN xx = mul(x, x);
        REQUIRE(norm(mul(xx, y) - mul(x, mul(x, y))) < 1e-12);
        REQUIRE(norm(mul(y, xx) - mul(mul(y, x), x)) < 1e-12);
    }
}

TEST_CASE("reals are central, exact in rational mode") {
    auto g = rng(14);
    for (int it = 0; it < 50; ++it) {
        CNQ x = random_rational_num(g, 3);
        CNQ y = random_rational_num(g, 3);
        Rational b(7, 3);
        CNQ bx = x;
        for (int j = 0; j < bx.dim(); ++j) bx.c[j] = b * bx.c[j];
        CNQ by = y;
        for (int j = 0; j < by.dim(); ++j) by.c[j] = b * by.c[j];
        CNQ p1 = mul(bx, y);
        CNQ p2 = mul(x, by);
        CNQ p3 = mul(x, y);
        for (int j = 0; j < 8; ++j) {
            REQUIRE(p1.c[j] == p2.c[j]);
            REQUIRE(p1.c[j] == b * p3.c[j]);
        }
    }
}

TEST_CASE("inverse") {
    CHECK(norm(inverse(CN::gen(2, 1)) + CN::gen(2, 1)) < 1e-15);
    CHECK(norm(inverse(2.0 * CN::one(2)) - 0.5 * CN::one(2)) < 1e-15);
    REQUIRE_THROWS_AS(inverse(CN::zero(3)), std::domain_error);

    auto g = rng(15);
    for (int it = 0; it < 200; ++it) {
        CN x = random_num(g, 3, 2.0);
        if (norm(x) < 1e-3) continue;
        CN y = random_num(g, 3, 2.0);
        REQUIRE(norm(mul(x, inverse(x)) - CN::one(3)) < 1e-12);
        REQUIRE(norm(mul(inverse(x), x) - CN::one(3)) < 1e-12);
        // left division solves the equation: x (x^{-1} y) = y by alternativity
        REQUIRE(norm(mul(x, mul(inverse(x), y)) - y) < 1e-11);
    }
}

TEST_CASE("polar form") {
    Polar p1 = polar(CN::gen(3, 1));
    CHECK(p1.rho == Catch::Approx(1.0));
    CHECK(p1.theta == Catch::Approx(0.25));
    CHECK(norm(p1.M.value - CN::gen(3, 1)) < 1e-15);

    Polar p2 = polar(3.0 * CN::one(3));
    CHECK(p2.rho == Catch::Approx(3.0));
    CHECK(p2.theta == 0.0);
    CHECK(norm(p2.M.value - CN::gen(3, 1)) < 1e-15);  // canonical direction

    Polar p3 = polar(CN::one(3) + CN::gen(3, 2));
    CHECK(p3.rho == Catch::Approx(std::sqrt(2.0)));
    CHECK(p3.theta == Catch::Approx(0.125));
    CHECK(norm(p3.M.value - CN::gen(3, 2)) < 1e-15);

    REQUIRE_THROWS_AS(polar(CN::zero(3)), std::domain_error);
    REQUIRE_THROWS_AS(polar(-1.0 * CN::one(3)), std::domain_error);

    auto g = rng(16);
    for (int it = 0; it < 100; ++it) {
        CN z = random_num(g, 3, 2.0);
        if (norm(im(z)) < 1e-6) continue;
        Polar p = polar(z);
        double c = std::cos(2.0 * M_PI * p.theta), s = std::sin(2.0 * M_PI * p.theta);
        CN back = p.rho * (s * p.M.value);
        back.c[0] += p.rho * c;
        REQUIRE(norm(back - z) < 1e-12 * (1.0 + norm(z)));
        REQUIRE(p.theta >= 0.0);
        REQUIRE(p.theta <= 0.5);
    }
}

TEST_CASE("exp and ln") {
    // exp(pi i1) = -1
    CN e = exp_cd(M_PI * CN::gen(3, 1));
    CHECK(norm(e + CN::one(3)) < 1e-14);

    // ln(i3) = (pi/2) i3
    CHECK(norm(ln_cd(CN::gen(3, 3)) - (M_PI / 2.0) * CN::gen(3, 3)) < 1e-14);

    // round trip
    CN z = 2.0 * CN::one(3) + CN::gen(3, 5);
    CHECK(norm(exp_cd(ln_cd(z)) - z) < 1e-12);

    REQUIRE_THROWS_AS(ln_cd(CN::zero(3)), std::domain_error);
    REQUIRE_THROWS_AS(ln_cd(-2.0 * CN::one(3)), std::domain_error);

    // series oracle for exp on random inputs
    auto g = rng(17);
    for (int it = 0; it < 50; ++it) {
        CN w = random_num(g, 3, 1.5);
        CN series = CN::zero(3);
        CN pw = CN::one(3);
        double fact = 1.0;
        for (int n = 0; n < 40; ++n) {
            series = series + (1.0 / fact) * pw;
            pw = mul(pw, w);
            fact *= (n + 1.0);
        }
        REQUIRE(norm(exp_cd(w) - series) < 1e-11);
        if (norm(im(w)) > 1e-3 && norm(im(w)) < M_PI - 0.1) {
            REQUIRE(norm(ln_cd(exp_cd(w)) - w) < 1e-11);
        }
    }
}

TEST_CASE("commutator associator moufang") {
    // quaternion associator vanishes
    auto g = rng(18);
    for (int it = 0; it < 100; ++it) {
        CN x = random_num(g, 2, 2.0), y = random_num(g, 2, 2.0), z = random_num(g, 2, 2.0);
        REQUIRE(norm(associator(x, y, z)) < 1e-12);
    }
    // octonion associator of generators is nonzero
    CHECK(norm(associator(CN::gen(3, 1), CN::gen(3, 2), CN::gen(3, 4))) > 1.0);

    for (int it = 0; it < 200; ++it) {
        CN x = random_num(g, 3, 2.0), y = random_num(g, 3, 2.0), z = random_num(g, 3, 2.0);
        REQUIRE(moufang_check(x, y, z).max() < 1e-12 * std::max(1.0, norm(x) * norm(y) * norm(z) * norm(x)));
    }
}

TEST_CASE("plane decomposition") {
    Direction M1 = Direction::gen(3, 1);

    CN z1 = CN::one(3) + 2.0 * CN::gen(3, 1);
    PlaneSplit s1 = plane_decompose(z1, M1);
    CHECK(s1.in_plane);
    CHECK(s1.y == 0.0);
    CHECK(norm(s1.x - z1) < 1e-15);
    CHECK(norm(s1.N - CN::gen(3, 2)) < 1e-12);  // canonical lowest orthogonal

    PlaneSplit s2 = plane_decompose(CN::gen(3, 2), M1);
    CHECK(norm(s2.x) < 1e-15);
    CHECK(s2.y == Catch::Approx(1.0));
    CHECK(norm(s2.N - CN::gen(3, 2)) < 1e-15);

    auto g = rng(19);
    Direction M3 = Direction::gen(3, 3);
    for (int it = 0; it < 100; ++it) {
        CN z = random_num(g, 3, 2.0);
        PlaneSplit s = plane_decompose(z, M3);
        CN back = s.x + s.y * s.N;
        REQUIRE(norm(back - z) < 1e-12);
        REQUIRE(std::abs(re(mul(M3.value, conj(s.N)))) < 1e-12);
        // x lies in C_M
        REQUIRE(norm(im(s.x) - dot(im(s.x), M3.value) * M3.value) < 1e-12);
    }
}

TEST_CASE("direction validation") {
    REQUIRE_THROWS_AS(Direction(CN::one(3)), std::invalid_argument);
    CHECK_NOTHROW(Direction::gen(3, 7));
    Direction d = imag_direction(CN::one(3) + 3.0 * CN::gen(3, 4));
    CHECK(norm(d.value - CN::gen(3, 4)) < 1e-15);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "cstareq/exactmat.hpp"
#include "test_util.hpp"

using namespace cstareq;
using testutil::char_poly_at;
using testutil::eval_poly;
using testutil::random_matrix;
using testutil::random_unimodular;

TEST_CASE("hnf of the identity is the identity") {
    IntMatrix id = IntMatrix::identity(3);
    HnfResult r = hnf(id);
    CHECK(r.h == id);
    CHECK(r.u == id);
}

TEST_CASE("hnf: transform is unimodular and reproduces the input lattice") {
    std::mt19937 rng(12345);
    for (int t = 0; t < 50; ++t) {
        IntMatrix m = random_matrix(rng, 3, 4);
        HnfResult r = hnf(m);
        CHECK(m * r.u == r.h);
        mpz_class du = det(r.u);
        CHECK((du == 1 || du == -1));
        // column echelon: pivot rows strictly increase, pivots positive,
        // row entries left of the pivot reduced into [0, pivot)
        std::size_t last_row = 0;
        bool seen_zero = false;
        for (std::size_t j = 0; j < r.h.cols(); ++j) {
            std::size_t i = 0;
            while (i < r.h.rows() && r.h(i, j) == 0) ++i;
            if (i == r.h.rows()) {
                seen_zero = true;
                continue;
            }
            CHECK(!seen_zero);  // zero columns trail
            if (j > 0) CHECK(i >= last_row);
            if (j > 0 && !seen_zero) CHECK(i > last_row - 1);
            last_row = i + 1;
            CHECK(r.h(i, j) > 0);
            for (std::size_t jj = 0; jj < j; ++jj) {
                CHECK(r.h(i, jj) >= 0);
                CHECK(r.h(i, jj) < r.h(i, j));
            }
        }
    }
}

TEST_CASE("hnf is a lattice invariant: unimodular column mixing is erased") {
    std::mt19937 rng(777);
    for (int t = 0; t < 30; ++t) {
        IntMatrix m = random_matrix(rng, 3, 3);
        IntMatrix v = random_unimodular(rng, 3);
        CHECK(hnf(m).h == hnf(m * v).h);
    }
}

TEST_CASE("snf: diagonal divisibility chain and transforms") {
    std::mt19937 rng(999);
    for (int t = 0; t < 50; ++t) {
        IntMatrix m = random_matrix(rng, 3, 3);
        SnfResult r = snf(m);
        CHECK(r.u * m * r.v == r.s);
        mpz_class du = det(r.u), dv = det(r.v);
        CHECK((du == 1 || du == -1));
        CHECK((dv == 1 || dv == -1));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (i != j) CHECK(r.s(i, j) == 0);
        for (std::size_t i = 0; i + 1 < 3; ++i) {
            CHECK(r.s(i, i) >= 0);
            if (r.s(i + 1, i + 1) != 0) {
                CHECK(r.s(i, i) != 0);
                CHECK(r.s(i + 1, i + 1) % r.s(i, i) == 0);
            }
        }
    }
}

TEST_CASE("snf of [[2,4],[6,8]]") {
    IntMatrix m({{2, 4}, {6, 8}});
    // oracle: d1 = gcd of all entries, d1*d2 = |det|
    mpz_class g = 2;  // gcd(2,4,6,8)
    mpz_class d = det(m);
    mpz_class d2 = abs(d) / g;
    SnfResult r = snf(m);
    CHECK(r.s(0, 0) == g);
    CHECK(r.s(1, 1) == d2);
    CHECK(d2 == 4);
}

TEST_CASE("kernel: saturated basis of the integer null space") {
    IntMatrix m({{1, 1, 1}});
    IntMatrix k = kernel(m);
    CHECK(k.cols() == 2);
    CHECK((m * k).is_zero());
    // saturation: SNF invariants of the basis are all 1
    SnfResult s = snf(k);
    CHECK(s.s(0, 0) == 1);
    CHECK(s.s(1, 1) == 1);
}

TEST_CASE("char_poly matches det(xI - A) at interpolation points") {
    std::mt19937 rng(4242);
    for (int t = 0; t < 40; ++t) {
        std::size_t n = 2 + t % 4;
        IntMatrix a = random_matrix(rng, n, n);
        auto c = char_poly(a);
        REQUIRE(c.size() == n + 1);
        CHECK(c[0] == 1);
        for (long x = -2; x <= static_cast<long>(n); ++x) CHECK(eval_poly(c, x) == char_poly_at(a, x));
    }
}

TEST_CASE("char_poly of [[1,1],[2,0]] is x^2 - x - 2") {
    auto c = char_poly(IntMatrix({{1, 1}, {2, 0}}));
    CHECK(c[0] == 1);
    CHECK(c[1] == -1);
    CHECK(c[2] == -2);
}

TEST_CASE("det: Bareiss agrees with cofactor expansion") {
    std::mt19937 rng(31337);
    for (int t = 0; t < 40; ++t) {
        IntMatrix a = random_matrix(rng, 3, 3);
        // cofactor oracle
        auto m2 = [&](std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) -> mpz_class {
            return a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
        };
        mpz_class oracle = a(0, 0) * m2(1, 1, 2, 2) - a(0, 1) * m2(1, 0, 2, 2) + a(0, 2) * m2(1, 0, 2, 1);
        CHECK(det(a) == oracle);
    }
}

TEST_CASE("is_primitive on small cases") {
    CHECK(is_primitive(IntMatrix({{1, 1}, {2, 0}})));
    CHECK(is_primitive(IntMatrix({{19, 5}, {4, 1}})));
    CHECK(is_primitive(IntMatrix({{3, 1}, {2, 3}})));
    CHECK(!is_primitive(IntMatrix({{0, 1}, {1, 0}})));       // period 2
    CHECK(!is_primitive(IntMatrix::identity(2)));            // reducible
    CHECK(!is_primitive(IntMatrix({{1, -1}, {1, 1}})));      // negative entry
    CHECK(is_primitive(IntMatrix({{2}})));
    CHECK(!is_primitive(IntMatrix({{0}})));
}

TEST_CASE("is_primitive: Wielandt matrix needs the full exponent") {
    // cycle 1->2->...->n->1 plus the extra edge n->2: primitive with
    // exponent exactly (n-1)^2 + 1
    const std::size_t n = 4;
    IntMatrix w(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) w(i, i + 1) = 1;
    w(n - 1, 0) = 1;
    w(n - 1, 1) = 1;
    CHECK(is_primitive(w));
    // one power below the Wielandt bound is not yet positive
    IntMatrix p = w.pow((n - 1) * (n - 1));
    CHECK(!p.is_positive());
    CHECK(w.pow((n - 1) * (n - 1) + 1).is_positive());
}

TEST_CASE("saturate: full-rank diagonal lattice saturates to Z^2") {
    Lattice l = saturate(IntMatrix({{2, 0}, {0, 3}}));
    CHECK(l.rank() == 2);
    CHECK(l.basis == IntMatrix::identity(2));
}

TEST_CASE("saturate: rank-1 lattice divides out content") {
    IntMatrix m(2, 1);
    m(0, 0) = 2;
    m(1, 0) = 4;
    Lattice l = saturate(m);
    REQUIRE(l.rank() == 1);
    CHECK(l.basis(0, 0) == 1);
    CHECK(l.basis(1, 0) == 2);
}

TEST_CASE("saturate: contains the original columns with integer coordinates") {
    std::mt19937 rng(2024);
    for (int t = 0; t < 30; ++t) {
        IntMatrix m = random_matrix(rng, 4, 2, -6, 6);
        Lattice l = saturate(m);
        if (l.rank() == 0) {
            CHECK(m.is_zero());
            continue;
        }
        auto x = solve(RatMatrix(l.basis), RatMatrix(m));
        REQUIRE(x.has_value());
        CHECK(x->is_integral());
        CHECK(RatMatrix(l.basis) * *x == RatMatrix(m));
        // saturation is idempotent
        CHECK(saturate(l.basis).basis == l.basis);
        // and the basis has trivial SNF invariants
        SnfResult s = snf(l.basis);
        for (std::size_t i = 0; i < l.rank(); ++i) CHECK(s.s(i, i) == 1);
    }
}

TEST_CASE("intertwiner_lattice: every basis element intertwines") {
    IntMatrix a({{1, 1}, {2, 0}});
    IntMatrix b({{0, 1}, {2, 1}});
    auto basis = intertwiner_lattice(a, b);
    REQUIRE(!basis.empty());
    for (const auto& j : basis) CHECK(b * j == j * a);
    // the dimension-group isomorphism between these two shifts lies in
    // the lattice: J = [[1,0],[1,1]]
    IntMatrix j({{1, 0}, {1, 1}});
    CHECK(b * j == j * a);
    // J is an integer point of the rational span, and the lattice basis is
    // saturated, so J must have integer coordinates in the basis
    IntMatrix flat(4, basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c)
        for (std::size_t p = 0; p < 2; ++p)
            for (std::size_t i = 0; i < 2; ++i) flat(p * 2 + i, c) = basis[c](i, p);
    RatMatrix rhs(4, 1);
    for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t i = 0; i < 2; ++i) rhs(p * 2 + i, 0) = j(i, p);
    auto x = solve(RatMatrix(flat), rhs);
    REQUIRE(x.has_value());
    CHECK(x->is_integral());
}

TEST_CASE("intertwiner_lattice: commutant of a matrix with distinct eigenvalues") {
    IntMatrix a({{1, 1}, {2, 0}});
    auto basis = intertwiner_lattice(a, a);
    CHECK(basis.size() == 2);  // spanned by I and A
}

TEST_CASE("rational solve and inverse round-trip") {
    std::mt19937 rng(5150);
    for (int t = 0; t < 30; ++t) {
        IntMatrix a = random_matrix(rng, 3, 3);
        if (det(a) == 0) continue;
        auto ai = inverse(a);
        REQUIRE(ai.has_value());
        CHECK(RatMatrix(a) * *ai == RatMatrix::identity(3));
        IntMatrix b = random_matrix(rng, 3, 2);
        auto x = solve(RatMatrix(a), RatMatrix(b));
        REQUIRE(x.has_value());
        CHECK(RatMatrix(a) * *x == RatMatrix(b));
    }
}

TEST_CASE("solve detects inconsistency") {
    RatMatrix a(2, 1), b(2, 1);
    a(0, 0) = 1;
    a(1, 0) = 1;
    b(0, 0) = 1;
    b(1, 0) = 2;
    CHECK(!solve(a, b).has_value());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cstareq/reduction.hpp"
#include "test_util.hpp"

using namespace cstareq;
using testutil::random_matrix;

namespace {

void check_identities(const IntMatrix& a, const ReductionResult& res) {
    const std::size_t n = a.rows();
    CHECK(a * res.r == res.r * res.c);
    CHECK(res.s * a == res.c * res.s);
    CHECK(res.s * res.r == res.c.pow(n));
    CHECK(res.r * res.s == a.pow(n));
    if (res.c.rows() > 0) CHECK(det(res.c) != 0);
}

}  // namespace

TEST_CASE("eventual_range_reduce: nonsingular input is unchanged") {
    IntMatrix a({{1, 1}, {2, 0}});
    ReductionResult res = eventual_range_reduce(a);
    CHECK(!res.was_singular);
    CHECK(res.c == a);
    CHECK(res.r == IntMatrix::identity(2));
    check_identities(a, res);
}

TEST_CASE("eventual_range_reduce: singular 3x3 with rank-2 eventual range") {
    IntMatrix a({{1, 1, 1}, {0, 1, 2}, {2, 1, 0}});
    REQUIRE(det(a) == 0);
    ReductionResult res = eventual_range_reduce(a);
    CHECK(res.was_singular);
    CHECK(!res.nilpotent);
    CHECK(res.c.rows() == 2);  // one eigenvalue is 0, eventual range has rank 2
    check_identities(a, res);
}

TEST_CASE("eventual_range_reduce: nilpotent input collapses to nothing") {
    IntMatrix a({{0, 1}, {0, 0}});
    ReductionResult res = eventual_range_reduce(a);
    CHECK(res.was_singular);
    CHECK(res.nilpotent);
    CHECK(res.c.rows() == 0);
}

TEST_CASE("eventual_range_reduce: random rank-deficient matrices") {
    std::mt19937 rng(31415);
    int done = 0;
    for (int t = 0; t < 200 && done < 40; ++t) {
        IntMatrix b = random_matrix(rng, 4, 2, -4, 4);
        IntMatrix c = random_matrix(rng, 2, 4, -4, 4);
        IntMatrix a = b * c;  // rank <= 2
        ReductionResult res = eventual_range_reduce(a);
        CHECK(res.was_singular);
        if (res.nilpotent) continue;
        check_identities(a, res);
        CHECK(res.c.rows() <= 2);
        ++done;
    }
    CHECK(done >= 30);
}

TEST_CASE("drazin_inverse: defining identities") {
    std::mt19937 rng(2718);
    for (int t = 0; t < 30; ++t) {
        IntMatrix b = random_matrix(rng, 3, 2, -3, 3);
        IntMatrix c = random_matrix(rng, 2, 3, -3, 3);
        IntMatrix a = b * c;
        RatMatrix x = drazin_inverse(a);
        RatMatrix ra(a);
        CHECK(x * ra * x == x);
        CHECK(ra * x == x * ra);
        CHECK(RatMatrix(a.pow(4)) * x == RatMatrix(a.pow(3)));
    }
}

TEST_CASE("drazin_inverse: nonsingular gives the inverse, nilpotent gives 0") {
    IntMatrix a({{1, 1}, {2, 0}});
    CHECK(drazin_inverse(a) == *inverse(a));
    IntMatrix nil({{0, 1}, {0, 0}});
    CHECK(drazin_inverse(nil).is_zero());
}

TEST_CASE("positive_cone_basis: unimodular, with u strictly interior") {
    std::mt19937 rng(6283);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 1 + t % 4;
        IntMatrix u = random_matrix(rng, n, 1, -8, 8);
        if (u.is_zero()) continue;
        IntMatrix w = positive_cone_basis(u);
        mpz_class d = det(w);
        CHECK((d == 1 || d == -1));
        auto x = solve(RatMatrix(w), RatMatrix(u));
        REQUIRE(x.has_value());
        for (std::size_t i = 0; i < n; ++i) CHECK((*x)(i, 0) > 0);
    }
}

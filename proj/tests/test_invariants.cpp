#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cstareq/invariants.hpp"
#include "cstareq/numth.hpp"
#include "test_util.hpp"

using namespace cstareq;
using testutil::random_matrix;

TEST_CASE("prim_set lists the prime divisors") {
    CHECK(prim_set(-2) == std::set<mpz_class>{2});
    CHECK(prim_set(1) == std::set<mpz_class>{});
    CHECK(prim_set(12) == std::set<mpz_class>{2, 3});
    CHECK_THROWS_AS(prim_set(0), PreconditionError);
}

TEST_CASE("local torsion counts from trailing coefficients") {
    IntMatrix a({{4, 1}, {1, 2}});  // char poly x^2 - 6x + 7
    CHECK(ulm_numbers(a) == std::map<mpz_class, unsigned>{{7, 1}});
    IntMatrix d223({{2, 0, 0}, {0, 2, 0}, {0, 0, 3}});
    CHECK(ulm_numbers(d223) == std::map<mpz_class, unsigned>{{2, 2}, {3, 1}});
    IntMatrix b({{1, 1}, {2, 0}});  // char poly x^2 - x - 2
    CHECK(ulm_numbers(b) == std::map<mpz_class, unsigned>{{2, 1}});
}

TEST_CASE("torsion quotient oracle is the Smith diagonal of the power") {
    IntMatrix d23({{2, 0}, {0, 3}});
    CHECK(torsion_quotient_oracle(d23, 2) == std::vector<mpz_class>{1, 36});
    CHECK(torsion_quotient_oracle(IntMatrix::identity(3), 5) ==
          std::vector<mpz_class>{1, 1, 1});
    IntMatrix b({{1, 1}, {2, 0}});
    auto div3 = torsion_quotient_oracle(b, 3);
    mpz_class twopart = 1;
    for (const auto& dv : div3) twopart *= pow_z(2, valuation(dv, 2));
    CHECK(twopart == 8);  // det(A^3) = -8 and n(2) = 1: one growing divisor
}

TEST_CASE("torsion counts match the growth of Smith divisors") {
    std::mt19937 rng(321);
    int done = 0;
    while (done < 50) {
        IntMatrix a = random_matrix(rng, 3, 3, -5, 5);
        if (det(a) == 0) continue;
        ++done;
        auto ulm = ulm_numbers(a);
        for (const auto& [p, np] : ulm) {
            // valuations of the Smith divisors of A^k for k = 1..6
            std::vector<std::vector<unsigned>> val;
            for (unsigned k = 1; k <= 6; ++k) {
                auto divs = torsion_quotient_oracle(a, k);
                std::vector<unsigned> v;
                for (const auto& dv : divs) v.push_back(valuation(dv, p));
                val.push_back(v);
            }
            // eigenvalue valuations can be fractional with denominator <= 3,
            // so single steps oscillate; over a 3-step window every unbounded
            // divisor grows by at least 1 while bounded ones have stabilized
            unsigned growing = 0;
            for (std::size_t j = 0; j < 3; ++j)
                if (val[5][j] > val[2][j]) ++growing;
            CHECK(growing == np);
            // total valuation is exactly linear in k
            unsigned vdet = valuation(det(a), p);
            for (unsigned k = 1; k <= 6; ++k) {
                unsigned total = 0;
                for (std::size_t j = 0; j < 3; ++j) total += val[k - 1][j];
                CHECK(total == k * vdet);
            }
        }
    }
}

TEST_CASE("prime set and torsion counts are transpose-invariant") {
    std::mt19937 rng(77);
    int done = 0;
    while (done < 30) {
        IntMatrix a = random_matrix(rng, 3, 3, -6, 6);
        if (det(a) == 0) continue;
        ++done;
        CHECK(prim_set(det(a)) == prim_set(det(a.transpose())));
        CHECK(ulm_numbers(a) == ulm_numbers(a.transpose()));
    }
}

TEST_CASE("trace range modules of the quadratic pair") {
    IntMatrix a({{19, 5}, {4, 1}});
    AlgebraicNumber w = field_omega(101);
    TraceModule ta = trace_range_module(a);
    REQUIRE(ta.quadratic);
    CHECK(*ta.module == QuadModule(101, AlgebraicNumber(2), w - AlgebraicNumber(5)));
    TraceModule tat = trace_range_module(a.transpose());
    REQUIRE(tat.quadratic);
    CHECK(*tat.module == QuadModule(101, AlgebraicNumber(2), w + AlgebraicNumber(4)));
    CHECK(*ta.module != *tat.module);
    // squaring the matrix leaves these modules fixed
    CHECK(*trace_range_module(a * a).module == *ta.module);
    CHECK(*trace_range_module(a.transpose() * a.transpose()).module == *tat.module);
}

TEST_CASE("trace range for an integer dominant eigenvalue") {
    IntMatrix a({{1, 5}, {3, 3}});  // lambda = 6, v = (3, 5)
    TraceModule t = trace_range_module(a);
    REQUIRE(!t.quadratic);
    CHECK(t.lambda_den == 6);
    CHECK(t.str() == "Z[1/6]");
}

TEST_CASE("prime ideals over the dominant eigenvalue") {
    // rational lambda = 2
    auto r1 = lambda_prime_ideals(perron_data(IntMatrix({{1, 1}, {2, 0}})));
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == LambdaIdeal{2, 'q', 0, 1});
    // rational lambda = 6
    auto r6 = lambda_prime_ideals(perron_data(IntMatrix({{1, 5}, {3, 3}})));
    REQUIRE(r6.size() == 2);
    CHECK(r6[0] == LambdaIdeal{2, 'q', 0, 1});
    CHECK(r6[1] == LambdaIdeal{3, 'q', 0, 1});
    // 10 + sqrt(101) is a unit: no ideals at all
    CHECK(lambda_prime_ideals(perron_data(IntMatrix({{19, 5}, {4, 1}}))).empty());
    // lambda = 3 + sqrt(2), norm 7, and 2 is a square mod 7: one split ideal
    auto r7 = lambda_prime_ideals(perron_data(IntMatrix({{3, 1}, {2, 3}})));
    REQUIRE(r7.size() == 1);
    CHECK(r7[0].p == 7);
    CHECK(r7[0].kind == 's');
    CHECK(r7[0].v == 1);
    // the same characteristic polynomial gives the same ideal list
    CHECK(lambda_prime_ideals(perron_data(IntMatrix({{4, 1}, {1, 2}}))) == r7);
}

TEST_CASE("prime ideal kinds: ramified, inert, and split at 2") {
    // lambda = 5 + sqrt(7): norm 18 = 2 * 3^2, 2 ramified, 3 splits
    PerronData pd7{AlgebraicNumber(5, 1, 7), {1, -10, 18}, 7, {}, {}};
    auto r = lambda_prime_ideals(pd7);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == LambdaIdeal{2, 'r', 0, 1});
    CHECK(r[1].p == 3);
    CHECK(r[1].kind == 's');
    CHECK(r[1].v == 2);  // 5 + sqrt(7) is divisible by the full 3-part
    // lambda = 1 + sqrt(5): norm -4, and 2 is inert in Q(sqrt(5))
    PerronData pd5{AlgebraicNumber(1, 1, 5), {1, -2, -4}, 5, {}, {}};
    auto ri = lambda_prime_ideals(pd5);
    REQUIRE(ri.size() == 1);
    CHECK(ri[0] == LambdaIdeal{2, 'i', 0, 1});
    // lambda = (3 + sqrt(17))/2: norm -2, d = 17 = 1 mod 8, 2 splits
    PerronData pd17{AlgebraicNumber(mpq_class(3, 2), mpq_class(1, 2), 17),
                    {1, -3, -2},
                    17,
                    {},
                    {}};
    auto rs = lambda_prime_ideals(pd17);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0] == LambdaIdeal{2, 's', 1, 1});
}

TEST_CASE("extension columns span the kernel of the eventual idempotent") {
    IntMatrix a({{1, 1}, {2, 0}});
    PadicMatrix e2 = extension_matrix(a, 2, 6);
    REQUIRE(e2.a.cols() == 1);
    CHECK(row_module(e2.a.transpose(), 2, 6) ==
          row_module(IntMatrix({{1, 1}}), 2, 6));  // the 2-eigenvector (1,1)
    // a prime away from the determinant contributes nothing
    CHECK(extension_matrix(a, 5, 4).a.cols() == 0);
    IntMatrix d23({{2, 0}, {0, 3}});
    PadicMatrix e3 = extension_matrix(d23, 3, 5);
    REQUIRE(e3.a.cols() == 1);
    CHECK(row_module(e3.a.transpose(), 3, 5) == row_module(IntMatrix({{0, 1}}), 3, 5));
}

TEST_CASE("extension rank and eventual-row-space rank are complementary") {
    std::mt19937 rng(2024);
    int done = 0;
    while (done < 25) {
        IntMatrix a = random_matrix(rng, 3, 3, -6, 6);
        if (det(a) == 0) continue;
        ++done;
        auto ulm = ulm_numbers(a);
        for (const auto& [p, np] : ulm) {
            unsigned m = 6;
            CHECK(extension_matrix(a, p, m).a.cols() == np);
            CHECK(unit_rank(eventual_row_space(a, p, m)) == 3 - np);
        }
    }
}

TEST_CASE("the full battery for [[1,1],[2,0]]") {
    IntMatrix a({{1, 1}, {2, 0}});
    InvariantReport rep = analyze(a);
    CHECK(rep.prim_det == std::set<mpz_class>{2});
    CHECK(rep.ulm == std::map<mpz_class, unsigned>{{2, 1}});
    CHECK(rep.field_tag == "Q");
    REQUIRE(rep.lambda_primes.size() == 1);
    CHECK(rep.lambda_primes[0] == LambdaIdeal{2, 'q', 0, 1});
    CHECK(!rep.trace_module.quadratic);
    CHECK(rep.trace_module.lambda_den == 2);
    CHECK(rep.inner_product == AlgebraicNumber(3));  // v = (2,1), w = (1,1)
    REQUIRE(rep.extension_columns.count(2) == 1);
    CHECK(rep.extension_columns.at(2).a.cols() == 1);
    CHECK_THROWS_AS(analyze(IntMatrix({{1, 1}, {1, 1}})), PreconditionError);
}

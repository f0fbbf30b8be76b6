#pragma once

// The invariant battery attached to a primitive (or reduced nonsingular)
// integer matrix: prime sets, local torsion counts, trace-range modules,
// dominant-eigenvalue prime-ideal data, and extension-class columns.

#include <map>
#include <set>

#include "cstareq/padic.hpp"
#include "cstareq/quadmod.hpp"
#include "cstareq/spectral.hpp"

namespace cstareq {

// Prime divisors of |n|, n != 0.
std::set<mpz_class> prim_set(const mpz_class& n);

// For each p | det A the local torsion count n(p): the number of p-adically
// non-unit eigenvalues, read off the characteristic polynomial
// x^N + c_1 x^(N-1) + ... + c_N as N - max{ j : p does not divide c_j }
// (c_0 = 1).  Requires det A != 0.
std::map<mpz_class, unsigned> ulm_numbers(const IntMatrix& a);

// Brute-force cross-check: the elementary divisors of Z^N / A^k Z^N,
// i.e. the Smith diagonal of A^k.  Requires det A != 0, k >= 1.
std::vector<mpz_class> torsion_quotient_oracle(const IntMatrix& a, unsigned k);

// Range of the trace functional g -> <v(A), g> on the dimension group,
// recorded up to powers of lambda.
struct TraceModule {
    bool quadratic = false;
    std::optional<QuadModule> module;  // quadratic lambda: Z[lambda]-span of v
    mpz_class lambda_den;              // rational lambda: the ideal is Z[1/lambda]
    std::string str() const;
};

TraceModule trace_range_module(const IntMatrix& a);

// Columns: a basis mod p^m of the null space of the eventual idempotent of
// A at p (equivalently, of the column span of I - E); N x n(p).
PadicMatrix extension_matrix(const IntMatrix& a, const mpz_class& p, unsigned m);

// One prime (or prime ideal, for quadratic lambda) dividing the dominant
// eigenvalue, with its valuation.
struct LambdaIdeal {
    mpz_class p;
    // 'q' rational prime; 'i' inert; 'r' ramified; 's' split
    char kind = 'q';
    // split ideals are identified by the residue of omega mod p
    mpz_class root;
    unsigned v = 0;
    bool operator==(const LambdaIdeal& o) const {
        return p == o.p && kind == o.kind && root == o.root && v == o.v;
    }
    bool operator<(const LambdaIdeal& o) const {
        if (p != o.p) return p < o.p;
        if (kind != o.kind) return kind < o.kind;
        if (root != o.root) return root < o.root;
        return v < o.v;
    }
};

// Factorization of the ideal generated by the dominant eigenvalue; only
// ideals of positive valuation are listed, sorted.
std::vector<LambdaIdeal> lambda_prime_ideals(const PerronData& pd);

struct InvariantReport {
    std::set<mpz_class> prim_det;
    std::map<mpz_class, unsigned> ulm;
    std::string field_tag;  // "Q" or "Q(sqrt(d))"
    std::vector<LambdaIdeal> lambda_primes;
    TraceModule trace_module;
    AlgebraicNumber inner_product;
    std::map<mpz_class, PadicMatrix> extension_columns;
};

// Full battery for a primitive nonsingular matrix; precision 0 selects the
// default p-adic working precision per prime.
InvariantReport analyze(const IntMatrix& a, unsigned precision = 0);

}  // namespace cstareq

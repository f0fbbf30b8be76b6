#pragma once

// Truncated p-adic arithmetic: everything is computed modulo p^m for an
// explicit precision m, with canonical (Howell-form) representations of row
// modules over Z/p^m so that module equality is a plain comparison.

#include <optional>
#include <vector>

#include "cstareq/exactmat.hpp"
#include "cstareq/spectral.hpp"

namespace cstareq {

// A p-adic integer truncated to precision m: a residue mod p^m.
struct PadicInt {
    mpz_class p;
    unsigned m = 0;
    mpz_class value;  // in [0, p^m)

    std::vector<unsigned long> digits() const;  // base-p, least significant first
    bool operator==(const PadicInt& o) const = default;
};

// Square integer matrix with entries mod p^m.
struct PadicMatrix {
    mpz_class p;
    unsigned m = 0;
    IntMatrix a;  // entries reduced into [0, p^m)

    bool operator==(const PadicMatrix& o) const = default;
};

PadicMatrix reduce_mod(const IntMatrix& a, const mpz_class& p, unsigned m);
PadicMatrix mul(const PadicMatrix& x, const PadicMatrix& y);

// Row span of an integer matrix over Z/p^m in canonical Howell form: two
// matrices generate the same row module iff their RowModules compare equal.
struct RowModule {
    mpz_class p;
    unsigned m = 0;
    IntMatrix rows;  // Howell form, no zero rows

    bool operator==(const RowModule& o) const = default;
    bool contains(const IntMatrix& row_vector) const;  // 1 x n
};

RowModule row_module(const IntMatrix& rows, const mpz_class& p, unsigned m);

// Default working precision for eventual-range computations on A at p.
unsigned default_precision(const IntMatrix& a, const mpz_class& p);

// The idempotent limit of the powers of A mod p^m: A^e for an exponent e
// that is a multiple of the period of every unit eigenvalue and exceeds the
// nilpotency depth, computed in closed form and verified by squaring.
PadicMatrix matrix_idempotent(const IntMatrix& a, const mpz_class& p, unsigned m);

// Row span of the eventual idempotent: the truncation of the eventual
// p-adic row space of A.
RowModule eventual_row_space(const IntMatrix& a, const mpz_class& p, unsigned m);

// Rank of the reduction mod p (= number of p-adic unit eigenvalues).
std::size_t unit_rank(const RowModule& rm);

// Does J carry the eventual row space of B onto that of A at precision m?
// J may be rational with denominators supported on the primes of det(A);
// prime-to-p denominators are units and p-denominators are handled by a
// precision shift.
bool check_witness_padic(const IntMatrix& a, const IntMatrix& b, const RatMatrix& j,
                         const mpz_class& p, unsigned m);

// Square root of the unit a in Z/p^m for odd p (nullopt when a is not a
// quadratic residue).  Canonical choice: the root with the smaller least
// digit is returned.
std::optional<PadicInt> hensel_sqrt(const mpz_class& a, const mpz_class& p, unsigned m);

// One segment of the Newton polygon: `count` roots of p-adic valuation `v`.
struct NewtonSlope {
    mpq_class v;
    unsigned count = 0;
    bool operator==(const NewtonSlope& o) const = default;
};

// Newton polygon of a monic integer polynomial (descending coefficients)
// with respect to p; segments sorted by increasing root valuation.
std::vector<NewtonSlope> newton_polygon(const MonicPoly& poly, const mpz_class& p);

// Number of p-adic unit roots read off the polygon.
unsigned unit_root_count(const MonicPoly& poly, const mpz_class& p);

}  // namespace cstareq

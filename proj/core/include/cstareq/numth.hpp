#pragma once

// Small exact number-theory helpers shared across modules.

#include <gmpxx.h>

#include <map>
#include <vector>

namespace cstareq {

// Prime factorization of |n| (n != 0): map prime -> exponent.
// Trial division backed by Pollard rho; primality via mpz_probab_prime_p.
std::map<mpz_class, unsigned> factorize(const mpz_class& n);

bool is_probable_prime(const mpz_class& n);

mpz_class isqrt(const mpz_class& n);  // floor sqrt, n >= 0
bool is_square(const mpz_class& n);

// n = s^2 * d with d squarefree; returns {d, s}.  Sign of n goes to d.
std::pair<mpz_class, mpz_class> squarefree_decompose(const mpz_class& n);

// p-adic valuation of n (n != 0).
unsigned valuation(const mpz_class& n, const mpz_class& p);
// valuation of a rational: v(num) - v(den).
long valuation(const mpq_class& q, const mpz_class& p);

mpz_class pow_z(const mpz_class& b, unsigned long e);

// Modular inverse of a mod m (gcd(a, m) = 1).
mpz_class inv_mod(const mpz_class& a, const mpz_class& m);

// Multiplicative order of a modulo m (gcd(a, m) = 1).
mpz_class mult_order(const mpz_class& a, const mpz_class& m);

}  // namespace cstareq

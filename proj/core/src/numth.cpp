#include "cstareq/numth.hpp"

#include <cassert>
#include <cstdlib>
#include <stdexcept>

namespace cstareq {

bool is_probable_prime(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

mpz_class isqrt(const mpz_class& n) {
    assert(n >= 0);
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const mpz_class& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

namespace {

mpz_class pollard_rho(const mpz_class& n) {
    // Brent's variant; n composite, odd, not a perfect power of small primes
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xC0FFEE);
    for (;;) {
        mpz_class x = rng.get_z_range(n - 2) + 2;
        mpz_class c = rng.get_z_range(n - 1) + 1;
        mpz_class y = x, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            mpz_class diff = x - y;
            if (diff == 0) break;  // cycle; retry with new parameters
            mpz_class a = abs(diff);
            mpz_gcd(d.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_into(mpz_class n, std::map<mpz_class, unsigned>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        ++out[n];
        return;
    }
    mpz_class d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::map<mpz_class, unsigned> factorize(const mpz_class& n) {
    if (n == 0) throw std::invalid_argument("factorize(0)");
    std::map<mpz_class, unsigned> out;
    mpz_class m = abs(n);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
        while (m % p == 0) {
            ++out[mpz_class(p)];
            m /= p;
        }
    }
    mpz_class p = 41;
    while (p * p <= m && p < 100000) {
        while (m % p == 0) {
            ++out[p];
            m /= p;
        }
        p += 2;
    }
    if (m > 1) factor_into(m, out);
    return out;
}

std::pair<mpz_class, mpz_class> squarefree_decompose(const mpz_class& n) {
    if (n == 0) return {0, 1};
    mpz_class d = n < 0 ? -1 : 1, s = 1;
    for (const auto& [p, e] : factorize(n)) {
        if (e % 2) d *= p;
        mpz_class h;
        mpz_pow_ui(h.get_mpz_t(), p.get_mpz_t(), e / 2);
        s *= h;
    }
    return {d, s};
}

unsigned valuation(const mpz_class& n, const mpz_class& p) {
    assert(n != 0 && p > 1);
    unsigned v = 0;
    mpz_class m = n;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

long valuation(const mpq_class& q, const mpz_class& p) {
    assert(q != 0);
    long v = 0;
    if (q.get_num() % p == 0) v += valuation(q.get_num(), p);
    if (q.get_den() % p == 0) v -= valuation(q.get_den(), p);
    return v;
}

mpz_class pow_z(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

mpz_class inv_mod(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        throw std::invalid_argument("inv_mod: not invertible");
    return r;
}

mpz_class mult_order(const mpz_class& a, const mpz_class& m) {
    mpz_class x = ((a % m) + m) % m, cur = x, ord = 1;
    while (cur != 1) {
        cur = (cur * x) % m;
        ++ord;
        if (ord > m) throw std::invalid_argument("mult_order: not a unit");
    }
    return ord;
}

}  // namespace cstareq

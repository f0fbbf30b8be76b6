#include "cstareq/padic.hpp"

#include <cassert>
#include <map>

#include "cstareq/numth.hpp"

namespace cstareq {

namespace {

mpz_class mod_pos(const mpz_class& x, const mpz_class& mod) {
    mpz_class r = x % mod;
    if (r < 0) r += mod;
    return r;
}

// valuation of a residue in [0, p^m); m stands for "zero"
unsigned res_valuation(const mpz_class& r, const mpz_class& p, unsigned m) {
    if (r == 0) return m;
    unsigned v = valuation(r, p);
    return v > m ? m : v;
}

}  // namespace

std::vector<unsigned long> PadicInt::digits() const {
    std::vector<unsigned long> out;
    mpz_class v = value;
    for (unsigned i = 0; i < m; ++i) {
        mpz_class d = v % p;
        out.push_back(d.get_ui());
        v /= p;
    }
    return out;
}

PadicMatrix reduce_mod(const IntMatrix& a, const mpz_class& p, unsigned m) {
    mpz_class mod = pow_z(p, m);
    IntMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = mod_pos(a(i, j), mod);
    return {p, m, r};
}

PadicMatrix mul(const PadicMatrix& x, const PadicMatrix& y) {
    assert(x.p == y.p && x.m == y.m);
    return reduce_mod(x.a * y.a, x.p, x.m);
}

// --- Howell form ----------------------------------------------------------

RowModule row_module(const IntMatrix& rows_in, const mpz_class& p, unsigned m) {
    const std::size_t n = rows_in.cols();
    mpz_class mod = pow_z(p, m);
    std::vector<std::vector<mpz_class>> work;
    for (std::size_t i = 0; i < rows_in.rows(); ++i) {
        std::vector<mpz_class> row(n);
        bool nz = false;
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = mod_pos(rows_in(i, j), mod);
            nz = nz || row[j] != 0;
        }
        if (nz) work.push_back(std::move(row));
    }
    std::vector<std::vector<mpz_class>> done;
    for (std::size_t j = 0; j < n; ++j) {
        // row with minimal valuation at column j among the unprocessed ones
        std::size_t best = work.size();
        unsigned bestv = m;
        for (std::size_t i = 0; i < work.size(); ++i) {
            unsigned v = res_valuation(work[i][j], p, m);
            if (v < bestv) {
                bestv = v;
                best = i;
            }
        }
        if (best == work.size()) continue;  // column is zero below the pivots
        std::vector<mpz_class> piv = std::move(work[best]);
        work.erase(work.begin() + best);
        // normalize the leading entry to exactly p^v
        mpz_class pv = pow_z(p, bestv);
        mpz_class unit = piv[j] / pv;
        mpz_class uinv = inv_mod(unit, mod);
        for (auto& x : piv) x = mod_pos(x * uinv, mod);
        piv[j] = pv;
        // clear column j in the remaining rows (their valuation is >= v)
        for (auto& row : work) {
            if (row[j] == 0) continue;
            mpz_class q = row[j] / pv;
            for (std::size_t k = 0; k < n; ++k) row[k] = mod_pos(row[k] - q * piv[k], mod);
        }
        // reduce column j of the finished rows into [0, p^v)
        for (auto& row : done) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), row[j].get_mpz_t(), pv.get_mpz_t());
            if (q == 0) continue;
            for (std::size_t k = 0; k < n; ++k) row[k] = mod_pos(row[k] - q * piv[k], mod);
        }
        // Howell closure: p^(m-v) * pivot row generates the part of the
        // module that dies in this column
        if (bestv > 0) {
            mpz_class f = pow_z(p, m - bestv);
            std::vector<mpz_class> extra(n);
            bool nz = false;
            for (std::size_t k = 0; k < n; ++k) {
                extra[k] = mod_pos(f * piv[k], mod);
                nz = nz || extra[k] != 0;
            }
            if (nz) work.push_back(std::move(extra));
        }
        done.push_back(std::move(piv));
        // drop rows that became zero
        std::erase_if(work, [](const std::vector<mpz_class>& r) {
            for (const auto& x : r)
                if (x != 0) return false;
            return true;
        });
    }
    IntMatrix out(done.size(), n);
    for (std::size_t i = 0; i < done.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = done[i][j];
    return {p, m, out};
}

bool RowModule::contains(const IntMatrix& v) const {
    assert(v.rows() == 1 && v.cols() == rows.cols());
    mpz_class mod = pow_z(p, m);
    std::vector<mpz_class> row(rows.cols());
    for (std::size_t j = 0; j < rows.cols(); ++j) row[j] = mod_pos(v(0, j), mod);
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        // pivot of Howell row i
        std::size_t j = 0;
        while (j < rows.cols() && rows(i, j) == 0) ++j;
        if (j == rows.cols()) continue;
        unsigned pv = res_valuation(rows(i, j), p, m);
        unsigned rv = res_valuation(row[j], p, m);
        if (row[j] == 0) continue;
        if (rv < pv) return false;
        mpz_class q = row[j] / rows(i, j);
        for (std::size_t k = 0; k < rows.cols(); ++k)
            row[k] = mod_pos(row[k] - q * rows(i, k), mod);
    }
    for (const auto& x : row)
        if (x != 0) return false;
    return true;
}

// --- eventual idempotent --------------------------------------------------

unsigned default_precision(const IntMatrix& a, const mpz_class& p) {
    mpz_class d = det(a);
    unsigned v = d == 0 ? 0 : valuation(d, p);
    return 8 * (1 + v);
}

PadicMatrix matrix_idempotent(const IntMatrix& a, const mpz_class& p, unsigned m) {
    assert(a.rows() == a.cols());
    const std::size_t n = a.rows();
    // The power sequence A, A^2, ... mod p^m is eventually periodic; the
    // idempotent limit is A^e for any multiple e of the period that clears
    // the tail.  Enumerating the cycle is hopeless (the period is a
    // multiplicative order mod p^m), but a closed-form multiple works:
    //   * the unit part of A has order dividing
    //       T = p^(m + ceil(log_p n)) * lcm_(k<=n) (p^k - 1)
    //     (exponent bound for GL_n(Z/p^m)), and
    //   * the non-unit part dies mod p^m once the exponent reaches
    //     n*(m+2)  (its eigenvalue valuations are >= 1/n).
    mpz_class t = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        mpz_class f = pow_z(p, k) - 1;
        mpz_lcm(t.get_mpz_t(), t.get_mpz_t(), f.get_mpz_t());
    }
    unsigned logn = 0;
    for (mpz_class q = 1; q < static_cast<long>(n); q *= p) ++logn;
    t *= pow_z(p, m + logn);
    mpz_class tail(static_cast<unsigned long>(n * (m + 2)));
    mpz_class mult = (tail + t - 1) / t;
    if (mult < 1) mult = 1;
    mpz_class e = t * mult;
    // binary powering of A^e mod p^m
    PadicMatrix result = reduce_mod(IntMatrix::identity(n), p, m);
    PadicMatrix base = reduce_mod(a, p, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = mul(result, base);
        e >>= 1;
        if (e > 0) base = mul(base, base);
    }
    assert(mul(result, result) == result);
    return result;
}

RowModule eventual_row_space(const IntMatrix& a, const mpz_class& p, unsigned m) {
    return row_module(matrix_idempotent(a, p, m).a, p, m);
}

std::size_t unit_rank(const RowModule& rm) {
    // rank over F_p of the rows, by a small F_p elimination
    const IntMatrix& r = rm.rows;
    std::size_t rank = 0;
    std::vector<std::vector<mpz_class>> rows(r.rows(), std::vector<mpz_class>(r.cols()));
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) rows[i][j] = mod_pos(r(i, j), rm.p);
    std::size_t lead = 0;
    for (std::size_t j = 0; j < r.cols() && lead < rows.size(); ++j) {
        std::size_t piv = rows.size();
        for (std::size_t i = lead; i < rows.size(); ++i)
            if (rows[i][j] != 0) {
                piv = i;
                break;
            }
        if (piv == rows.size()) continue;
        std::swap(rows[lead], rows[piv]);
        mpz_class inv = inv_mod(rows[lead][j], rm.p);
        for (auto& x : rows[lead]) x = mod_pos(x * inv, rm.p);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == lead || rows[i][j] == 0) continue;
            mpz_class f2 = rows[i][j];
            for (std::size_t k = 0; k < r.cols(); ++k)
                rows[i][k] = mod_pos(rows[i][k] - f2 * rows[lead][k], rm.p);
        }
        ++lead;
        ++rank;
    }
    return rank;
}

bool check_witness_padic(const IntMatrix& a, const IntMatrix& b, const RatMatrix& j,
                         const mpz_class& p, unsigned m) {
    assert(a.rows() == a.cols() && b.rows() == b.cols());
    // clear denominators: the prime-to-p part is a unit and does not move
    // the row module, the p-part shifts the whole module by p^s
    mpz_class den = j.denominator_lcm();
    unsigned s = den % p == 0 ? valuation(den, p) : 0;
    IntMatrix ji(j.rows(), j.cols());
    for (std::size_t r = 0; r < j.rows(); ++r)
        for (std::size_t c = 0; c < j.cols(); ++c) {
            mpq_class v = j(r, c) * mpq_class(den);
            ji(r, c) = v.get_num();
        }
    unsigned mm = m + s;
    PadicMatrix ea = matrix_idempotent(a, p, mm);
    PadicMatrix eb = matrix_idempotent(b, p, mm);
    mpz_class ps = pow_z(p, s);
    RowModule lhs = row_module(eb.a * ji, p, mm);
    RowModule rhs = row_module(ea.a * ps, p, mm);
    return lhs == rhs;
}

// --- Hensel square roots --------------------------------------------------

std::optional<PadicInt> hensel_sqrt(const mpz_class& a, const mpz_class& p, unsigned m) {
    if (p == 2) throw PreconditionError("hensel_sqrt requires an odd prime");
    mpz_class a0 = mod_pos(a, p);
    if (a0 == 0) throw PreconditionError("hensel_sqrt requires a p-adic unit");
    // root mod p by direct search (desk-scale p)
    mpz_class r0 = -1;
    for (mpz_class x = 1; x < p; ++x)
        if (mod_pos(x * x - a0, p) == 0) {
            r0 = x;
            break;
        }
    if (r0 == -1) return std::nullopt;
    // canonical branch: smaller least digit
    if (mod_pos(p - r0, p) < r0) r0 = p - r0;
    // Newton lifting x -> (x + a/x) / 2, doubling precision each step
    mpz_class mod = pow_z(p, m);
    mpz_class x = r0;
    unsigned prec = 1;
    while (prec < m) {
        prec = std::min(2 * prec, m);
        mpz_class pm = pow_z(p, prec);
        mpz_class xinv = inv_mod(x, pm);
        mpz_class two_inv = inv_mod(mpz_class(2), pm);
        x = mod_pos((x + mod_pos(a, pm) * xinv) * two_inv, pm);
    }
    return PadicInt{p, m, mod_pos(x, mod)};
}

// --- Newton polygon -------------------------------------------------------

std::vector<NewtonSlope> newton_polygon(const MonicPoly& poly, const mpz_class& p) {
    if (poly.empty() || poly[0] != 1) throw PreconditionError("polynomial must be monic");
    const long n = static_cast<long>(poly.size()) - 1;
    // points (i, v_p(a_i)) for the coefficient a_i of x^i; a_n = 1
    std::vector<std::pair<long, long>> pts;
    for (long i = 0; i <= n; ++i) {
        const mpz_class& c = poly[n - i];
        if (c == 0) continue;
        pts.emplace_back(i, static_cast<long>(valuation(c, p)));
    }
    // lower convex hull, left to right
    std::vector<std::pair<long, long>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            // drop b if it lies on or above segment a-pt
            if ((b.second - a.second) * (pt.first - a.first) >=
                (pt.second - a.second) * (b.first - a.first))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    std::vector<NewtonSlope> out;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        long dx = hull[k + 1].first - hull[k].first;
        long dy = hull[k + 1].second - hull[k].second;
        // segment slope dy/dx; the dx roots on it have valuation -slope
        NewtonSlope s{mpq_class(-dy, dx), static_cast<unsigned>(dx)};
        s.v.canonicalize();
        out.push_back(s);
    }
    // zero roots of the polynomial (trailing zero coefficients) have
    // infinite valuation and are not reported as polygon segments; callers
    // see them via the sum of counts being short of the degree
    std::sort(out.begin(), out.end(),
              [](const NewtonSlope& x, const NewtonSlope& y) { return x.v < y.v; });
    return out;
}

unsigned unit_root_count(const MonicPoly& poly, const mpz_class& p) {
    unsigned c = 0;
    for (const auto& s : newton_polygon(poly, p))
        if (s.v == 0) c += s.count;
    return c;
}

}  // namespace cstareq

#include "cstareq/spectral.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "cstareq/numth.hpp"

namespace cstareq {

// --- AlgebraicNumber ------------------------------------------------------

AlgebraicNumber::AlgebraicNumber(const mpq_class& a, const mpq_class& b, const mpz_class& d)
    : a_(a), b_(b), d_(d) {
    normalize();
}

void AlgebraicNumber::normalize() {
    a_.canonicalize();
    b_.canonicalize();
    if (b_ == 0) {
        d_ = 0;
        return;
    }
    if (d_ <= 1 || is_square(d_))
        throw PreconditionError("quadratic part requires squarefree d > 1");
}

mpq_class AlgebraicNumber::as_rational() const {
    if (!is_rational()) throw PreconditionError("not a rational number");
    return a_;
}

namespace {

// common field of two operands; mixing two distinct quadratic fields is an
// error, a rational operand is promoted
mpz_class join_fields(const mpz_class& d1, const mpz_class& d2) {
    if (d1 == 0) return d2;
    if (d2 == 0 || d1 == d2) return d1;
    throw PreconditionError("arithmetic across distinct quadratic fields");
}

}  // namespace

int AlgebraicNumber::sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // a and b*sqrt(d) pull in opposite directions: compare a^2 with b^2 d
    return sgn(norm()) * sa;
}

AlgebraicNumber AlgebraicNumber::operator+(const AlgebraicNumber& o) const {
    mpz_class d = join_fields(d_, o.d_);
    return {a_ + o.a_, b_ + o.b_, d};
}

AlgebraicNumber AlgebraicNumber::operator-(const AlgebraicNumber& o) const {
    mpz_class d = join_fields(d_, o.d_);
    return {a_ - o.a_, b_ - o.b_, d};
}

AlgebraicNumber AlgebraicNumber::operator*(const AlgebraicNumber& o) const {
    mpz_class d = join_fields(d_, o.d_);
    return {a_ * o.a_ + b_ * o.b_ * d, a_ * o.b_ + b_ * o.a_, d};
}

AlgebraicNumber AlgebraicNumber::operator/(const AlgebraicNumber& o) const {
    mpq_class n = o.norm();
    if (n == 0) throw PreconditionError("division by zero");
    AlgebraicNumber num = *this * o.conjugate();
    return {num.a_ / n, num.b_ / n, join_fields(d_, o.d_)};
}

bool AlgebraicNumber::operator==(const AlgebraicNumber& o) const {
    return a_ == o.a_ && b_ == o.b_ && (b_ == 0 || d_ == o.d_);
}

std::string AlgebraicNumber::str() const {
    if (is_rational()) return a_.get_str();
    std::ostringstream os;
    os << a_.get_str() << (b_ < 0 ? "-" : "+") << mpq_class(::abs(b_)).get_str() << "*sqrt("
       << d_.get_str() << ")";
    return os.str();
}

// --- AlgMatrix ------------------------------------------------------------

AlgMatrix::AlgMatrix(const IntMatrix& m) : rows_(m.rows()), cols_(m.cols()), a_(rows_ * cols_) {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = mpq_class(m(i, j));
}

AlgMatrix::AlgMatrix(const RatMatrix& m) : rows_(m.rows()), cols_(m.cols()), a_(rows_ * cols_) {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = m(i, j);
}

AlgMatrix AlgMatrix::identity(std::size_t n) {
    AlgMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

AlgMatrix AlgMatrix::operator+(const AlgMatrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    AlgMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

AlgMatrix AlgMatrix::operator-(const AlgMatrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    AlgMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

AlgMatrix AlgMatrix::operator*(const AlgMatrix& o) const {
    assert(cols_ == o.rows_);
    AlgMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k)
            for (std::size_t j = 0; j < o.cols_; ++j)
                r(i, j) = r(i, j) + (*this)(i, k) * o(k, j);
    return r;
}

AlgMatrix AlgMatrix::operator*(const AlgebraicNumber& s) const {
    AlgMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

AlgMatrix AlgMatrix::transpose() const {
    AlgMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

AlgMatrix AlgMatrix::conjugate() const {
    AlgMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k].conjugate();
    return r;
}

bool AlgMatrix::is_zero() const {
    for (const auto& v : a_)
        if (v != AlgebraicNumber(0)) return false;
    return true;
}

namespace {

struct AlgRref {
    AlgMatrix a, b;
    std::vector<std::size_t> pivots;
};

AlgRref alg_rref(AlgMatrix a, AlgMatrix b) {
    const std::size_t n = a.rows(), m = a.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t j = 0; j < m && r < n; ++j) {
        std::size_t piv = n;
        for (std::size_t i = r; i < n; ++i)
            if (a(i, j) != AlgebraicNumber(0)) {
                piv = i;
                break;
            }
        if (piv == n) continue;
        for (std::size_t k = 0; k < m; ++k) std::swap(a(r, k), a(piv, k));
        for (std::size_t k = 0; k < b.cols(); ++k) std::swap(b(r, k), b(piv, k));
        AlgebraicNumber inv = AlgebraicNumber(1) / a(r, j);
        for (std::size_t k = 0; k < m; ++k) a(r, k) = a(r, k) * inv;
        for (std::size_t k = 0; k < b.cols(); ++k) b(r, k) = b(r, k) * inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || a(i, j) == AlgebraicNumber(0)) continue;
            AlgebraicNumber f = a(i, j);
            for (std::size_t k = 0; k < m; ++k) a(i, k) = a(i, k) - f * a(r, k);
            for (std::size_t k = 0; k < b.cols(); ++k) b(i, k) = b(i, k) - f * b(r, k);
        }
        pivots.push_back(j);
        ++r;
    }
    return {std::move(a), std::move(b), std::move(pivots)};
}

}  // namespace

std::size_t rank(const AlgMatrix& m) { return alg_rref(m, AlgMatrix(m.rows(), 0)).pivots.size(); }

AlgMatrix kernel_basis(const AlgMatrix& m) {
    AlgRref r = alg_rref(m, AlgMatrix(m.rows(), 0));
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (std::find(r.pivots.begin(), r.pivots.end(), j) == r.pivots.end())
            free_cols.push_back(j);
    AlgMatrix k(m.cols(), free_cols.size());
    for (std::size_t c = 0; c < free_cols.size(); ++c) {
        k(free_cols[c], c) = 1;
        for (std::size_t p = 0; p < r.pivots.size(); ++p)
            k(r.pivots[p], c) = AlgebraicNumber(0) - r.a(p, free_cols[c]);
    }
    return k;
}

AlgebraicNumber det(const AlgMatrix& m) {
    assert(m.rows() == m.cols());
    AlgMatrix a = m;
    AlgebraicNumber d(1);
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t piv = n;
        for (std::size_t i = j; i < n; ++i)
            if (a(i, j) != AlgebraicNumber(0)) {
                piv = i;
                break;
            }
        if (piv == n) return AlgebraicNumber(0);
        if (piv != j) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a(j, k), a(piv, k));
            d = AlgebraicNumber(0) - d;
        }
        d = d * a(j, j);
        AlgebraicNumber inv = AlgebraicNumber(1) / a(j, j);
        for (std::size_t i = j + 1; i < n; ++i) {
            AlgebraicNumber f = a(i, j) * inv;
            for (std::size_t k = j; k < n; ++k) a(i, k) = a(i, k) - f * a(j, k);
        }
    }
    return d;
}

std::optional<AlgMatrix> inverse(const AlgMatrix& m) {
    assert(m.rows() == m.cols());
    AlgRref r = alg_rref(m, AlgMatrix::identity(m.rows()));
    if (r.pivots.size() != m.rows()) return std::nullopt;
    return r.b;
}

std::optional<AlgMatrix> solve(const AlgMatrix& a, const AlgMatrix& b) {
    assert(a.rows() == b.rows());
    AlgRref r = alg_rref(a, b);
    for (std::size_t i = r.pivots.size(); i < a.rows(); ++i)
        for (std::size_t k = 0; k < b.cols(); ++k)
            if (r.b(i, k) != AlgebraicNumber(0)) return std::nullopt;
    AlgMatrix x(a.cols(), b.cols());
    for (std::size_t p = 0; p < r.pivots.size(); ++p)
        for (std::size_t k = 0; k < b.cols(); ++k) x(r.pivots[p], k) = r.b(p, k);
    return x;
}

// --- polynomial factorization ---------------------------------------------

namespace {

// exact division of monic p by monic q; nullopt when not divisible
std::optional<MonicPoly> poly_divide(const MonicPoly& p, const MonicPoly& q) {
    if (q.size() > p.size()) return std::nullopt;
    std::vector<mpz_class> rem(p);
    MonicPoly quot(p.size() - q.size() + 1);
    for (std::size_t i = 0; i + q.size() <= rem.size(); ++i) {
        mpz_class f = rem[i];
        quot[i] = f;
        if (f == 0) continue;
        for (std::size_t j = 0; j < q.size(); ++j) rem[i + j] -= f * q[j];
    }
    for (std::size_t i = p.size() - q.size() + 1; i < rem.size(); ++i)
        if (rem[i] != 0) return std::nullopt;
    return quot;
}

std::vector<mpz_class> divisors_signed(const mpz_class& n) {
    std::vector<mpz_class> divs{1};
    for (const auto& [p, e] : factorize(n)) {
        std::size_t sz = divs.size();
        mpz_class pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < sz; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::size_t sz = divs.size();
    for (std::size_t i = 0; i < sz; ++i) divs.push_back(-divs[i]);
    return divs;
}

void push_factor(std::vector<PolyFactor>& out, const MonicPoly& f, unsigned mult) {
    for (auto& pf : out)
        if (pf.poly == f) {
            pf.multiplicity += mult;
            return;
        }
    out.push_back({f, mult});
}

}  // namespace

CharFactorization factor_char_poly(const MonicPoly& p) {
    if (p.empty() || p[0] != 1) throw PreconditionError("polynomial must be monic");
    CharFactorization out;
    MonicPoly cur = p;
    // roots at zero
    unsigned zero_mult = 0;
    while (cur.size() > 1 && cur.back() == 0) {
        cur.pop_back();
        ++zero_mult;
    }
    if (zero_mult) push_factor(out.factors, {1, 0}, zero_mult);
    // integer roots: candidates divide the constant term
    bool progress = true;
    while (progress && cur.size() > 1) {
        progress = false;
        for (const mpz_class& r : divisors_signed(cur.back())) {
            MonicPoly lin{1, -r};
            while (auto q = poly_divide(cur, lin)) {
                push_factor(out.factors, lin, 1);
                cur = *q;
                progress = true;
                if (cur.size() == 1) break;
            }
            if (cur.size() == 1 || cur.back() == 0) break;
        }
        while (cur.size() > 1 && cur.back() == 0) {  // may re-expose zero roots
            cur.pop_back();
            push_factor(out.factors, {1, 0}, 1);
            progress = true;
        }
    }
    // irreducible quadratic factors x^2 + b x + c: c divides the constant
    // term and |b| <= 2 * (1 + max |coefficient|) (Cauchy root bound)
    if (cur.size() > 2) {
        mpz_class bound = 0;
        for (const auto& ci : cur)
            if (cmp(::abs(ci), bound) > 0) bound = ::abs(ci);
        bound = 2 * (bound + 1);
        bool again = true;
        while (again && cur.size() > 2) {
            again = false;
            for (const mpz_class& c : divisors_signed(cur.back())) {
                for (mpz_class b = -bound; b <= bound; ++b) {
                    if (is_square(b * b - 4 * c)) continue;  // reducible over Q
                    MonicPoly quad{1, b, c};
                    while (auto q = poly_divide(cur, quad)) {
                        push_factor(out.factors, quad, 1);
                        cur = *q;
                        again = true;
                        if (cur.size() <= 2) break;
                    }
                    if (cur.size() <= 2) break;
                }
                if (cur.size() <= 2) break;
            }
        }
    }
    if (cur.size() == 2) {  // leftover linear factor (root not found above: impossible
        push_factor(out.factors, cur, 1);  // for monic integer p, but keep it safe)
        cur = {1};
    }
    out.remainder = cur;
    out.complete = cur.size() == 1;
    return out;
}

std::vector<AlgebraicNumber> real_roots(const MonicPoly& f) {
    if (f.size() == 2) return {AlgebraicNumber(mpq_class(-f[1]))};
    if (f.size() != 3) throw PreconditionError("real_roots expects degree 1 or 2");
    mpz_class disc = f[1] * f[1] - 4 * f[2];
    if (disc < 0) return {};
    auto [d, s] = squarefree_decompose(disc);
    if (d == 1) {  // rational roots
        mpq_class r1((-f[1] + s) / mpq_class(2)), r2((-f[1] - s) / mpq_class(2));
        return {AlgebraicNumber(r1), AlgebraicNumber(r2)};
    }
    mpq_class a(-f[1]);
    a /= 2;
    mpq_class b(s);
    b /= 2;
    return {AlgebraicNumber(a, b, d), AlgebraicNumber(a, -b, d)};
}

// --- eigen data -----------------------------------------------------------

AlgebraicNumber field_omega(const mpz_class& d) {
    if (d % 4 == 1) return {mpq_class(1, 2), mpq_class(1, 2), d};
    return {0, 1, d};
}

OmegaCoords omega_coords(const AlgebraicNumber& x) {
    // x = a + b sqrt(d) = (s + t*omega)/q in the order Z + Z*omega
    mpq_class u, v;  // x = u + v*omega
    if (x.field_d() % 4 == 1) {
        // sqrt(d) = 2*omega - 1
        u = x.rat_part() - x.irr_part();
        v = 2 * x.irr_part();
    } else {
        u = x.rat_part();
        v = x.irr_part();
    }
    mpz_class q;
    mpz_lcm(q.get_mpz_t(), u.get_den().get_mpz_t(), v.get_den().get_mpz_t());
    mpq_class us = u * q, vs = v * q;
    OmegaCoords oc{us.get_num(), vs.get_num(), q};
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), oc.s.get_mpz_t(), oc.t.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), oc.q.get_mpz_t());
    if (g > 1) {
        oc.s /= g;
        oc.t /= g;
        oc.q /= g;
    }
    return oc;
}

namespace {

// scale a nonzero kernel vector to algebraic-integer entries of content 1,
// entrywise positive
std::vector<AlgebraicNumber> normalize_eigenvector(std::vector<AlgebraicNumber> v,
                                                   const mpz_class& d) {
    AlgebraicNumber omega = d == 0 ? AlgebraicNumber(0) : field_omega(d);
    // clear denominators
    mpz_class q = 1;
    for (auto& x : v) {
        OmegaCoords oc = omega_coords(AlgebraicNumber(x.rat_part(), x.irr_part(), d));
        mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), oc.q.get_mpz_t());
    }
    for (auto& x : v) x = x * AlgebraicNumber(mpq_class(q));
    // divide by the content (gcd of all omega-coordinates)
    mpz_class g = 0;
    for (auto& x : v) {
        OmegaCoords oc = omega_coords(AlgebraicNumber(x.rat_part(), x.irr_part(), d));
        assert(oc.q == 1);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), oc.s.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), oc.t.get_mpz_t());
    }
    if (g > 1)
        for (auto& x : v) x = x / AlgebraicNumber(mpq_class(g));
    // fix the overall sign: a PF eigenvector has entries of one strict sign
    int s = 0;
    for (auto& x : v) {
        int sx = x.sign();
        if (sx == 0 || (s != 0 && sx != s))
            throw UnsupportedError("eigenvector is not of one strict sign");
        s = sx;
    }
    if (s < 0)
        for (auto& x : v) x = -x;
    return v;
}

std::vector<AlgebraicNumber> eigen_kernel_vector(const IntMatrix& a, const AlgebraicNumber& lam) {
    AlgMatrix m(a);
    for (std::size_t i = 0; i < a.rows(); ++i) m(i, i) = m(i, i) - lam;
    AlgMatrix k = kernel_basis(m);
    if (k.cols() != 1) throw UnsupportedError("expected a simple eigenvalue");
    std::vector<AlgebraicNumber> v(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) v[i] = k(i, 0);
    return v;
}

}  // namespace

PerronData perron_data(const IntMatrix& a) {
    if (!is_primitive(a)) throw PreconditionError("perron_data requires a primitive matrix");
    CharFactorization f = factor_char_poly(char_poly(a));
    // candidates for the spectral radius: all real roots of the split part
    PerronData pd;
    bool have = false;
    MonicPoly lam_poly;
    for (const auto& pf : f.factors) {
        for (const auto& r : real_roots(pf.poly)) {
            if (!have || r > pd.lambda) {
                pd.lambda = r;
                lam_poly = pf.poly;
                have = true;
            }
        }
    }
    if (!f.complete) {
        // the dominant root might live in the unfactored part
        throw UnsupportedError("Perron root outside Q and real quadratic fields");
    }
    if (!have || !(pd.lambda > AlgebraicNumber(0)))
        throw UnsupportedError("no positive real dominant root found");
    // dominance check against complex pairs: |z|^2 equals the constant term
    for (const auto& pf : f.factors) {
        if (pf.poly.size() == 3 && real_roots(pf.poly).empty()) {
            AlgebraicNumber mod2 = pd.lambda * pd.lambda - AlgebraicNumber(mpq_class(pf.poly[2]));
            if (!(mod2 > AlgebraicNumber(0)))
                throw UnsupportedError("dominant eigenvalue is not real quadratic");
        }
    }
    pd.min_poly = lam_poly;
    pd.d = pd.lambda.field_d();
    pd.w = normalize_eigenvector(eigen_kernel_vector(a, pd.lambda), pd.d);
    pd.v = normalize_eigenvector(eigen_kernel_vector(a.transpose(), pd.lambda), pd.d);
    return pd;
}

std::vector<Eigenspace> generalized_eigenspaces(const IntMatrix& a) {
    CharFactorization f = factor_char_poly(char_poly(a));
    if (!f.complete)
        throw UnsupportedError("eigenvalues of degree > 2 are not supported");
    std::vector<Eigenspace> out;
    for (const auto& pf : f.factors) {
        auto roots = real_roots(pf.poly);
        if (roots.empty())
            throw UnsupportedError("complex eigenvalue pairs are not supported");
        for (const auto& lam : roots) {
            Eigenspace es;
            es.eigenvalue = lam;
            es.multiplicity = pf.multiplicity;
            AlgMatrix m(a);
            for (std::size_t i = 0; i < a.rows(); ++i) m(i, i) = m(i, i) - lam;
            AlgMatrix mp = AlgMatrix::identity(a.rows());
            for (unsigned k = 0; k < pf.multiplicity; ++k) mp = mp * m;
            es.column_basis = kernel_basis(mp);
            es.row_basis = kernel_basis(mp.transpose()).transpose();
            out.push_back(std::move(es));
        }
    }
    return out;
}

AlgebraicNumber inner_product_invariant(const IntMatrix& a) {
    PerronData pd = perron_data(a);
    AlgebraicNumber s(0);
    for (std::size_t i = 0; i < pd.v.size(); ++i) s = s + pd.v[i] * pd.w[i];
    return s;
}

AlgebraicNumber fundamental_unit(const mpz_class& d, bool maximal_order) {
    if (d <= 1 || is_square(d)) throw PreconditionError("d must be squarefree > 1");
    if (maximal_order && d % 4 == 1) {
        // smallest y > 0 with x^2 - d y^2 = +-4; the parity condition
        // x = y mod 2 is automatic since d = 1 mod 4
        const unsigned long cap = 10000000;
        for (mpz_class y = 1; y < cap; ++y) {
            for (int s : {-1, +1}) {
                mpz_class t = d * y * y + 4 * s;
                if (t < 0 || !is_square(t)) continue;
                mpz_class x = isqrt(t);
                return {mpq_class(x, 2), mpq_class(y, 2), d};
            }
        }
        throw UnsupportedError("fundamental unit search exceeded its budget");
    }
    // Pell equation via the continued fraction of sqrt(d): at the end of the
    // first period the convergent p/q solves p^2 - d q^2 = +-1
    mpz_class a0 = isqrt(d);
    mpz_class p_prev = 1, p_cur = a0, q_prev = 0, q_cur = 1;
    mpz_class P = a0, Q = d - a0 * a0;  // state after the first partial quotient
    if (Q == 0) throw PreconditionError("d must not be a square");
    while (Q != 1) {
        mpz_class a = (a0 + P) / Q;
        mpz_class p_next = a * p_cur + p_prev;
        mpz_class q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        p_cur = p_next;
        q_prev = q_cur;
        q_cur = q_next;
        P = a * Q - P;
        Q = (d - P * P) / Q;
    }
    return {mpq_class(p_cur), mpq_class(q_cur), d};
}

}  // namespace cstareq

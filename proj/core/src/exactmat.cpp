#include "cstareq/exactmat.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace cstareq {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged initializer");
        for (long v : r) a_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    IntMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    IntMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    assert(cols_ == o.rows_);
    IntMatrix r(rows_, o.cols_);
    mpz_class t;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const mpz_class& aik = (*this)(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                t = aik * o(k, j);
                r(i, j) += t;
            }
        }
    return r;
}

IntMatrix IntMatrix::operator*(const mpz_class& s) const {
    IntMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

IntMatrix IntMatrix::operator-() const { return *this * mpz_class(-1); }

IntMatrix IntMatrix::transpose() const {
    IntMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

IntMatrix IntMatrix::pow(unsigned long e) const {
    assert(rows_ == cols_);
    IntMatrix result = identity(rows_);
    IntMatrix base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

mpz_class IntMatrix::trace() const {
    assert(rows_ == cols_);
    mpz_class t = 0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

bool IntMatrix::is_zero() const {
    for (const auto& v : a_)
        if (v != 0) return false;
    return true;
}

bool IntMatrix::is_nonnegative() const {
    for (const auto& v : a_)
        if (v < 0) return false;
    return true;
}

bool IntMatrix::is_positive() const {
    for (const auto& v : a_)
        if (v <= 0) return false;
    return true;
}

IntMatrix IntMatrix::col(std::size_t j) const {
    IntMatrix r(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) r(i, 0) = (*this)(i, j);
    return r;
}

IntMatrix IntMatrix::submatrix_cols(std::size_t j0, std::size_t j1) const {
    assert(j0 <= j1 && j1 <= cols_);
    IntMatrix r(rows_, j1 - j0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = j0; j < j1; ++j) r(i, j - j0) = (*this)(i, j);
    return r;
}

std::string IntMatrix::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "\n" : "");
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? " " : "") << (*this)(i, j).get_str();
    }
    return os.str();
}

RatMatrix::RatMatrix(const IntMatrix& m) : rows_(m.rows()), cols_(m.cols()), a_(rows_ * cols_) {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = m(i, j);
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    RatMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    RatMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
    assert(cols_ == o.rows_);
    RatMatrix r(rows_, o.cols_);
    mpq_class t;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const mpq_class& aik = (*this)(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                t = aik * o(k, j);
                r(i, j) += t;
            }
        }
    return r;
}

RatMatrix RatMatrix::operator*(const mpq_class& s) const {
    RatMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

bool RatMatrix::is_zero() const {
    for (const auto& v : a_)
        if (v != 0) return false;
    return true;
}

bool RatMatrix::is_integral() const {
    for (const auto& v : a_)
        if (v.get_den() != 1) return false;
    return true;
}

IntMatrix RatMatrix::to_integer() const {
    assert(is_integral());
    IntMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).get_num();
    return r;
}

mpz_class RatMatrix::denominator_lcm() const {
    mpz_class l = 1;
    for (const auto& v : a_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
    return l;
}

std::string RatMatrix::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "\n" : "");
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? " " : "") << (*this)(i, j).get_str();
    }
    return os.str();
}

// --- Hermite normal form --------------------------------------------------

namespace {

int cmpabs(const mpz_class& a, const mpz_class& b) {
    return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

void addmul_col(IntMatrix& m, std::size_t dst, std::size_t src, const mpz_class& q) {
    // col_dst += q * col_src
    if (q == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += q * m(i, src);
}

void negate_col(IntMatrix& m, std::size_t j) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = -m(i, j);
}

mpz_class fdiv_q(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

HnfResult hnf(const IntMatrix& m) {
    const std::size_t n = m.rows(), mm = m.cols();
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(mm);
    std::size_t r = 0;  // next pivot column
    for (std::size_t i = 0; i < n && r < mm; ++i) {
        // Clear row i across columns >= r down to a single entry at column r.
        for (;;) {
            // locate smallest nonzero |entry| among cols >= r
            std::size_t best = mm;
            for (std::size_t j = r; j < mm; ++j) {
                if (h(i, j) == 0) continue;
                if (best == mm || cmpabs(h(i, j), h(i, best)) < 0) best = j;
            }
            if (best == mm) break;  // all zero in this row
            swap_cols(h, r, best);
            swap_cols(u, r, best);
            bool others = false;
            for (std::size_t j = r + 1; j < mm; ++j) {
                if (h(i, j) == 0) continue;
                mpz_class q = -fdiv_q(h(i, j), h(i, r));
                addmul_col(h, j, r, q);
                addmul_col(u, j, r, q);
                if (h(i, j) != 0) others = true;
            }
            if (!others) break;
        }
        if (h(i, r) == 0) continue;  // no pivot in this row
        if (h(i, r) < 0) {
            negate_col(h, r);
            negate_col(u, r);
        }
        // Reduce earlier pivot columns at this row into [0, pivot).
        for (std::size_t j = 0; j < r; ++j) {
            mpz_class q = -fdiv_q(h(i, j), h(i, r));
            addmul_col(h, j, r, q);
            addmul_col(u, j, r, q);
        }
        ++r;
    }
    return {h, u};
}

IntMatrix kernel(const IntMatrix& m) {
    HnfResult res = hnf(m);
    // Zero columns of h sit at the end; matching columns of u span the kernel.
    std::size_t r = res.h.cols();
    while (r > 0) {
        bool zero = true;
        for (std::size_t i = 0; i < res.h.rows(); ++i)
            if (res.h(i, r - 1) != 0) zero = false;
        if (!zero) break;
        --r;
    }
    IntMatrix ker = res.u.submatrix_cols(r, res.u.cols());
    return hnf(ker).h.submatrix_cols(0, ker.cols());  // canonical basis
}

// --- Smith normal form ----------------------------------------------------

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void addmul_row(IntMatrix& m, std::size_t dst, std::size_t src, const mpz_class& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += q * m(src, j);
}

void negate_row(IntMatrix& m, std::size_t i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
}

}  // namespace

SnfResult snf(const IntMatrix& m) {
    const std::size_t n = m.rows(), mm = m.cols();
    IntMatrix s = m;
    IntMatrix u = IntMatrix::identity(n);
    IntMatrix v = IntMatrix::identity(mm);
    std::size_t t = 0;
    while (t < n && t < mm) {
        // find nonzero entry of minimal |value| in the remaining block
        std::size_t pi = n, pj = mm;
        for (std::size_t i = t; i < n; ++i)
            for (std::size_t j = t; j < mm; ++j) {
                if (s(i, j) == 0) continue;
                if (pi == n || cmpabs(s(i, j), s(pi, pj)) < 0) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi == n) break;  // remaining block is zero
        swap_rows(s, t, pi);
        swap_rows(u, t, pi);
        swap_cols(s, t, pj);
        swap_cols(v, t, pj);
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (std::size_t i = t + 1; i < n; ++i) {
                if (s(i, t) == 0) continue;
                mpz_class q = -fdiv_q(s(i, t), s(t, t));
                addmul_row(s, i, t, q);
                addmul_row(u, i, t, q);
                if (s(i, t) != 0) {
                    swap_rows(s, t, i);
                    swap_rows(u, t, i);
                    dirty = true;
                }
            }
            for (std::size_t j = t + 1; j < mm; ++j) {
                if (s(t, j) == 0) continue;
                mpz_class q = -fdiv_q(s(t, j), s(t, t));
                addmul_col(s, j, t, q);
                addmul_col(v, j, t, q);
                if (s(t, j) != 0) {
                    swap_cols(s, t, j);
                    swap_cols(v, t, j);
                    dirty = true;
                }
            }
        }
        if (s(t, t) < 0) {
            negate_row(s, t);
            negate_row(u, t);
        }
        // enforce divisibility d_t | s(i,j) for the remaining block
        bool redo = false;
        for (std::size_t i = t + 1; i < n && !redo; ++i)
            for (std::size_t j = t + 1; j < mm && !redo; ++j)
                if (s(i, j) % s(t, t) != 0) {
                    // fold row i into row t and restart this pivot
                    addmul_row(s, t, i, 1);
                    addmul_row(u, t, i, 1);
                    redo = true;
                }
        if (!redo) ++t;
    }
    return {s, u, v};
}

// --- characteristic polynomial and determinant ----------------------------

std::vector<mpz_class> char_poly(const IntMatrix& m) {
    assert(m.rows() == m.cols());
    const std::size_t n = m.rows();
    std::vector<mpz_class> c(n + 1);
    c[0] = 1;
    IntMatrix mk = IntMatrix::identity(n);  // M_0
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk;
        mpz_class t = mk.trace();
        mpz_class ck;
        mpz_class kk(static_cast<unsigned long>(k));
        // c_k = -tr(M_k)/k, always an exact division
        mpz_class neg = -t;
        mpz_divexact(ck.get_mpz_t(), neg.get_mpz_t(), kk.get_mpz_t());
        c[k] = ck;
        for (std::size_t i = 0; i < n; ++i) mk(i, i) += ck;
    }
    return c;
}

mpz_class det(const IntMatrix& m) {
    assert(m.rows() == m.cols());
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t piv = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (a(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv == n) return 0;
            swap_rows(a, k, piv);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// --- primitivity ----------------------------------------------------------

bool is_primitive(const IntMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    if (!m.is_nonnegative()) return false;
    const std::size_t n = m.rows();
    // work on the positivity pattern; square up to the Wielandt bound
    std::vector<char> p(n * n), acc(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p[i * n + j] = m(i, j) > 0;
    auto all_pos = [&](const std::vector<char>& x) {
        for (char v : x)
            if (!v) return false;
        return true;
    };
    auto mul = [&](const std::vector<char>& x, const std::vector<char>& y) {
        std::vector<char> r(n * n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (x[i * n + k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (y[k * n + j]) r[i * n + j] = 1;
        return r;
    };
    unsigned long e = (n - 1) * (n - 1) + 1;  // Wielandt exponent, sharp
    // compute pattern of m^e by binary powering
    bool first = true;
    std::vector<char> base = p;
    while (e) {
        if (e & 1) {
            acc = first ? base : mul(acc, base);
            first = false;
            if (all_pos(acc)) return true;
        }
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return all_pos(acc);
}

// --- saturation and intertwiners ------------------------------------------

Lattice saturate(const IntMatrix& m) {
    // left kernel of m, as rows
    IntMatrix left = kernel(m.transpose()).transpose();
    IntMatrix sat;
    if (left.rows() == 0) {
        sat = IntMatrix::identity(m.rows());
    } else {
        sat = kernel(left);
    }
    return {sat};
}

std::vector<IntMatrix> intertwiner_lattice(const IntMatrix& a, const IntMatrix& b) {
    assert(a.rows() == a.cols() && b.rows() == b.cols() && a.rows() == b.rows());
    const std::size_t n = a.rows();
    // vec is column-major: vec(B J - J A) = (I (x) B - A^T (x) I) vec(J)
    IntMatrix t(n * n, n * n);
    for (std::size_t p = 0; p < n; ++p)        // column block (column p of J)
        for (std::size_t i = 0; i < n; ++i)    // row within block
            for (std::size_t q = 0; q < n; ++q) {
                // d(BJ)_{i,p} / dJ_{q,p} = B_{i,q}
                t(p * n + i, p * n + q) += b(i, q);
                // d(JA)_{i,p} / dJ_{i,q} = A_{q,p}
                t(p * n + i, q * n + i) -= a(q, p);
            }
    IntMatrix ker = kernel(t);
    std::vector<IntMatrix> basis;
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        IntMatrix j(n, n);
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t i = 0; i < n; ++i) j(i, p) = ker(p * n + i, c);
        basis.push_back(j);
    }
    return basis;
}

// --- rational solvers -----------------------------------------------------

namespace {

// Gauss-Jordan on [a | b]; returns reduced a, transformed b, pivot columns.
struct Rref {
    RatMatrix a, b;
    std::vector<std::size_t> pivots;
};

Rref rref(RatMatrix a, RatMatrix b) {
    const std::size_t n = a.rows(), m = a.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t j = 0; j < m && r < n; ++j) {
        std::size_t piv = n;
        for (std::size_t i = r; i < n; ++i)
            if (a(i, j) != 0) {
                piv = i;
                break;
            }
        if (piv == n) continue;
        for (std::size_t k = 0; k < m; ++k) std::swap(a(r, k), a(piv, k));
        for (std::size_t k = 0; k < b.cols(); ++k) std::swap(b(r, k), b(piv, k));
        mpq_class inv = 1 / a(r, j);
        for (std::size_t k = 0; k < m; ++k) a(r, k) *= inv;
        for (std::size_t k = 0; k < b.cols(); ++k) b(r, k) *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || a(i, j) == 0) continue;
            mpq_class f = a(i, j);
            for (std::size_t k = 0; k < m; ++k) a(i, k) -= f * a(r, k);
            for (std::size_t k = 0; k < b.cols(); ++k) b(i, k) -= f * b(r, k);
        }
        pivots.push_back(j);
        ++r;
    }
    return {std::move(a), std::move(b), std::move(pivots)};
}

}  // namespace

std::size_t rank(const RatMatrix& m) {
    return rref(m, RatMatrix(m.rows(), 0)).pivots.size();
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
    assert(m.rows() == m.cols());
    Rref r = rref(m, RatMatrix::identity(m.rows()));
    if (r.pivots.size() != m.rows()) return std::nullopt;
    return r.b;
}

std::optional<RatMatrix> inverse(const IntMatrix& m) { return inverse(RatMatrix(m)); }

std::optional<RatMatrix> solve(const RatMatrix& a, const RatMatrix& b) {
    assert(a.rows() == b.rows());
    Rref r = rref(a, b);
    // consistency: zero rows of a must have zero rhs
    for (std::size_t i = r.pivots.size(); i < a.rows(); ++i)
        for (std::size_t k = 0; k < b.cols(); ++k)
            if (r.b(i, k) != 0) return std::nullopt;
    RatMatrix x(a.cols(), b.cols());
    for (std::size_t p = 0; p < r.pivots.size(); ++p)
        for (std::size_t k = 0; k < b.cols(); ++k) x(r.pivots[p], k) = r.b(p, k);
    return x;
}

mpq_class det(const RatMatrix& m) {
    assert(m.rows() == m.cols());
    // clear denominators, use the integer Bareiss determinant
    mpz_class l = m.denominator_lcm();
    IntMatrix z(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            mpq_class v = m(i, j) * mpq_class(l);
            z(i, j) = v.get_num();
        }
    mpq_class d(det(z));
    mpz_class ln;
    mpz_pow_ui(ln.get_mpz_t(), l.get_mpz_t(), m.rows());
    d /= mpq_class(ln);
    return d;
}

}  // namespace cstareq

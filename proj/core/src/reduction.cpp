#include "cstareq/reduction.hpp"

#include <cassert>
#include <stdexcept>

namespace cstareq {

ReductionResult eventual_range_reduce(const IntMatrix& a) {
    assert(a.rows() == a.cols());
    const std::size_t n = a.rows();
    ReductionResult res;
    if (det(a) != 0) {
        res.c = a;
        res.r = IntMatrix::identity(n);
        res.s = a.pow(n);
        return res;
    }
    res.was_singular = true;
    IntMatrix an = a.pow(n);
    if (an.is_zero()) {
        res.nilpotent = true;
        res.c = IntMatrix(0, 0);
        res.r = IntMatrix(n, 0);
        res.s = IntMatrix(0, n);
        return res;
    }
    // integer points of the eventual range, as a saturated column basis
    IntMatrix r = saturate(an).basis;
    // A maps the lattice into itself, so both solves are integral
    auto c = solve(RatMatrix(r), RatMatrix(a * r));
    auto s = solve(RatMatrix(r), RatMatrix(an));
    if (!c || !c->is_integral() || !s || !s->is_integral())
        throw std::logic_error("eventual range is not invariant");  // unreachable
    res.c = c->to_integer();
    res.r = r;
    res.s = s->to_integer();
    return res;
}

RatMatrix drazin_inverse(const IntMatrix& a) {
    assert(a.rows() == a.cols());
    const std::size_t n = a.rows();
    IntMatrix an = a.pow(n);
    if (an.is_zero()) return RatMatrix(n, n);  // nilpotent: X = 0
    IntMatrix r = saturate(an).basis;          // basis of the eventual range
    const std::size_t m = r.cols();
    IntMatrix k = kernel(an);  // complement: null space of A^N
    // T = [R | K] is nonsingular; the first M rows of T^-1 give coordinates
    // on the range along the null space
    IntMatrix t(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) t(i, j) = r(i, j);
        for (std::size_t j = 0; j < k.cols(); ++j) t(i, m + j) = k(i, j);
    }
    auto tinv = inverse(t);
    if (!tinv) throw std::logic_error("range/null decomposition failed");  // unreachable
    auto c = solve(RatMatrix(r), RatMatrix(a * r));
    if (!c) throw std::logic_error("range not invariant");  // unreachable
    auto cinv = inverse(*c);
    if (!cinv) throw std::logic_error("core is singular");  // unreachable
    RatMatrix top(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) top(i, j) = (*tinv)(i, j);
    return RatMatrix(r) * *cinv * top;
}

IntMatrix positive_cone_basis(const IntMatrix& u) {
    assert(u.cols() == 1);
    const std::size_t n = u.rows();
    if (u.is_zero()) throw std::invalid_argument("zero vector has no interior cone");
    // unimodular T with T u = g e1 (g = content of u): transpose of the
    // column transform that brings the row u^T to (g, 0, ..., 0)
    HnfResult h = hnf(u.transpose());
    IntMatrix t = h.u.transpose();
    // W' = [e1 - sum_(i>=2) e_i | e2 | ... | eN] has det 1 and
    // W'^-1 (g e1) = (g, ..., g), strictly positive
    IntMatrix wp = IntMatrix::identity(n);
    for (std::size_t i = 1; i < n; ++i) wp(i, 0) = -1;
    auto tinv = inverse(t);
    RatMatrix w = *tinv * RatMatrix(wp);
    return w.to_integer();
}

}  // namespace cstareq

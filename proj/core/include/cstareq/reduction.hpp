#pragma once

// Reduction of a singular square integer matrix to a nonsingular core acting
// on the integer points of its eventual range, together with the transfer
// matrices tying the two dimension groups together.

#include "cstareq/exactmat.hpp"

namespace cstareq {

struct ReductionResult {
    // Core matrix C (M x M, nonsingular unless the input was nilpotent) and
    // transfer matrices R (N x M) and S (M x N) with
    //   A R = R C,   S A = C S,   S R = C^N,   R S = A^N.
    IntMatrix c;
    IntMatrix r;
    IntMatrix s;
    bool was_singular = false;
    bool nilpotent = false;  // eventual range is 0; c is the 0x0 matrix
};

// Restrict A to the integer points of its eventual range A^N Q^N.
// Nonsingular input is returned unchanged (C = A, R = S-compatible identity).
ReductionResult eventual_range_reduce(const IntMatrix& a);

// Drazin inverse: the unique X with X A X = X, A X = X A, A^(N+1) X = A^N.
// Rational in general; equals A^-1 for nonsingular A and 0 for nilpotent A.
RatMatrix drazin_inverse(const IntMatrix& a);

// For a nonzero integer vector u (N x 1): a unimodular W whose column cone
// contains u in its strict interior, i.e. W^-1 u is entrywise positive.
IntMatrix positive_cone_basis(const IntMatrix& u);

}  // namespace cstareq

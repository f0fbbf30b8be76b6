#pragma once

// The decision battery: necessary-condition screening, subcase deciders,
// witness verification and search, elementary shift-equivalence enumeration,
// and the congruence-class set of attainable matrix reductions.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cstareq/invariants.hpp"
#include "cstareq/reduction.hpp"

namespace cstareq {

enum class Mode { Ordered, Unordered };

struct Config {
    long entry_height = 10;          // H: coefficient bound for witness search
    unsigned padic_precision = 0;    // 0 = per-prime default precision
    unsigned diag_exponent_bound = 0;  // 0 = derived from eigenvector denominators
    unsigned k_max = 4;              // schedule slope bound
    unsigned l_max = 8;              // schedule offset bound
    unsigned n_max = 6;              // schedule grid depth
    long factorization_entry_bound = 0;  // 0 = derived from the matrix entries
};

// Linear power schedule m = k*n + l used by the positivity grid.
struct Schedule {
    unsigned k = 0, l = 0, n_max = 0;
    bool found = false;
    bool operator==(const Schedule& o) const = default;
};

struct WitnessReport {
    RatMatrix j;          // B J = J A; entries in Z[1/det A]
    AlgebraicNumber mu;   // v(B) J = mu v(A); mu > 0 in ordered mode
    // p -> (row spaces carried correctly, precision used)
    std::map<mpz_class, std::pair<bool, unsigned>> padic_checks;
    Schedule schedule;    // positivity grid result (redundant check)
};

struct Certificate {
    std::string invariant;  // name of the distinguishing invariant
    std::string value_a;
    std::string value_b;
    std::string anchor;     // one-line statement of why it distinguishes
};

struct UnknownReport {
    std::vector<std::string> checks_passed;
    std::vector<std::string> unsupported_steps;
    std::string bounds;  // search bounds in effect when giving up
};

enum class VerdictKind { Equivalent, NotEquivalent, Unknown };

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::optional<WitnessReport> witness;    // present for Equivalent (when found)
    std::optional<Certificate> certificate;  // present for NotEquivalent
    UnknownReport report;                    // filled for Unknown
    std::string method;                      // which decider produced the verdict
};

enum class VerifyKind { Verified, Refuted, Inconclusive };

struct VerifyResult {
    VerifyKind kind = VerifyKind::Inconclusive;
    std::string reason;
    AlgebraicNumber mu;
    std::map<mpz_class, std::pair<bool, unsigned>> padic_checks;
    Schedule schedule;
};

// Full decision pipeline: reduce to nonsingular cores, screen the cheap
// invariants, route to the applicable subcase decider, fall back to witness
// search, and otherwise return an auditable Unknown.
Verdict decide_pair(const IntMatrix& a, const IntMatrix& b, Mode mode,
                    const Config& cfg = {});

// Check a proposed witness J (B J = J A convention):
//  (a) entries of J and J^-1 lie in Z[1/det A];
//  (b) ordered mode: v(B) J = mu v(A) with mu > 0, exactly;
//  (c) J carries the eventual p-adic row space of B onto that of A for
//      every p | det A, at the configured precision.
// The linear-schedule positivity grid runs as a redundant check and is
// recorded in the result without gating the verdict.
VerifyResult verify_witness(const IntMatrix& a, const IntMatrix& b, const RatMatrix& j,
                            Mode mode, const Config& cfg = {});

// Bounded search over the integer intertwiner lattice (coefficients up to
// cfg.entry_height) and small power twists B^a J A^(-b); returns the first
// candidate that verifies.
std::optional<WitnessReport> search_witness(const IntMatrix& a, const IntMatrix& b,
                                            const Config& cfg = {});

// All pairs (K, J) of nonnegative integer 2x2 matrices with A = K J and
// target = J K.  Complete: J entries range over [0, max entry of A] (a
// nonzero K entry forces every J entry it multiplies to be at most the
// matching entry of A) and K is recovered exactly as A J^-1.  Requires
// nonsingular A and target; sizes other than 2x2 raise UnsupportedError.
std::vector<std::pair<IntMatrix, IntMatrix>> elementary_shift_factorizations(
    const IntMatrix& a, const IntMatrix& target);

// Decider for matrices with all eigenvalues rational, the same
// characteristic polynomial, and each eigenvalue divisible by a prime not
// dividing the others.  Enumerates diagonal rescalings D (entries +-
// products of eigenvalue primes with exponents bounded by the derived or
// configured bound) and tests eventual integrality of both transfer
// directions by an exact prime-local periodic-window criterion.
Verdict decide_rational_case(const IntMatrix& a, const IntMatrix& b,
                             const Config& cfg = {});

// Decider for 2x2 matrices with irreducible quadratic characteristic
// polynomials: field and eigenvalue-ideal screening, then equivalence of
// the trace-range modules.
Verdict decide_irreducible_case(const IntMatrix& a, const IntMatrix& b);

enum class LocalIsoKind { Yes, No, Unsupported };

struct LocalIsoResult {
    LocalIsoKind kind = LocalIsoKind::Unsupported;
    std::string detail;
};

// Strong local isomorphism of the p-local dimension groups: the minimal
// fields of definition of the eventual row spaces must agree, the unit
// eigenvalue sets must agree, and some intertwiner congruence class modulo
// p must carry one eventual row space onto the other invertibly.
LocalIsoResult strong_local_iso(const IntMatrix& a, const IntMatrix& b,
                                const mpz_class& p, const Config& cfg = {});

// Decider for integer dominant eigenvalue with lambda = |det| and size >= 3:
// with equal eigenvalue prime sets, equivalence holds exactly when the
// normalized eigenvector pairings agree up to sign and primes of lambda.
Verdict lambda_det_decide(const IntMatrix& a, const IntMatrix& b);

// The set of mod-m1 reductions of matrices over Z[1/m2] whose determinant
// is +-f times a power of m2's primes: computed as G * D * G where G is the
// multiplicative closure of the elementary matrices mod m1 and D the
// admissible diagonal matrices.  Requires gcd(m1, m2) = gcd(f, m1) = 1.
// Returned sorted by entry rows for deterministic output.
std::vector<IntMatrix> cc_set(const mpz_class& m1, const mpz_class& m2,
                              const mpz_class& f, std::size_t n);

}  // namespace cstareq

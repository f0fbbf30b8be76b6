#pragma once

// Rank-2 modules in a real quadratic field Q(sqrt(d)) and the decision
// whether two such modules differ by a field multiplier, routed through the
// classical correspondence with proper classes of indefinite binary
// quadratic forms.

#include <string>

#include "cstareq/spectral.hpp"

namespace cstareq {

// A full-rank Z-module M = Z*alpha + Z*beta inside Q(sqrt(d)).  The stored
// basis is oriented (positive sign of the sqrt(d)-part of conj(alpha)*beta;
// bases are swapped, never negated, to normalize).  Canonical shape:
// M = (1/q) * ( a*Z + (b + c*omega)*Z ) with a, c > 0, 0 <= b < a, q
// minimal, where omega = sqrt(d) or (1 + sqrt(d))/2 for d = 1 mod 4.
class QuadModule {
public:
    QuadModule(const mpz_class& d, const AlgebraicNumber& alpha,
               const AlgebraicNumber& beta);

    // Module generated by any finite set of elements; must have rank 2.
    static QuadModule from_generators(const mpz_class& d,
                                      const std::vector<AlgebraicNumber>& gens);

    const mpz_class& field_d() const { return d_; }
    const AlgebraicNumber& alpha() const { return alpha_; }
    const AlgebraicNumber& beta() const { return beta_; }

    // canonical data (equality compares exactly these)
    const mpz_class& q() const { return q_; }
    const mpz_class& rat_gen() const { return a_; }    // a
    const mpz_class& mix_rat() const { return b_; }    // b
    const mpz_class& mix_omega() const { return c_; }  // c

    bool operator==(const QuadModule& o) const;
    bool operator!=(const QuadModule& o) const { return !(*this == o); }

    bool contains(const AlgebraicNumber& x) const;
    QuadModule scaled(const AlgebraicNumber& f) const;  // the module f*M

    std::string str() const;  // e.g. "(1/q)(2, 1+1*omega)"

private:
    QuadModule() = default;
    void canonicalize();
    mpz_class d_;
    AlgebraicNumber alpha_, beta_;   // oriented basis as given
    mpz_class q_, a_, b_, c_;        // canonical (1/q)(aZ + (b+c*omega)Z)
};

// Conductor f of the multiplier ring {x : x*M <= M} inside the maximal
// order of Q(sqrt(d)) (f = 1 means the maximal order).
mpz_class multiplier_conductor(const QuadModule& m);

// Integral binary quadratic form A x^2 + B xy + C y^2, content 1.
struct BinaryForm {
    mpz_class a, b, c;
    mpz_class disc() const { return b * b - 4 * a * c; }
    bool operator==(const BinaryForm& o) const = default;
    BinaryForm operator-() const { return {-a, -b, -c}; }
    std::string str() const;
};

// Norm form of the oriented basis, Nm(x*alpha + y*beta) cleared of
// denominators and divided by its content.
BinaryForm module_to_form(const QuadModule& m);

// SL(2,Z)-equivalence of indefinite forms via reduction cycles.  Forms of
// unequal discriminant are inequivalent; definite or square-discriminant
// input raises UnsupportedError.
bool forms_properly_equivalent(const BinaryForm& f1, const BinaryForm& f2);

// The full reduction cycle of (the reduced form of) f, starting at its
// reduced representative.
std::vector<BinaryForm> reduction_cycle(const BinaryForm& f);

// The colon module (O : M) = {x : x*M <= O} for the maximal order O.
QuadModule colon_dual(const QuadModule& m);

// Generalized index [O : M] (rational for non-integral M).
mpq_class module_index(const QuadModule& m);

// The distinguished representative of the multiplier class of M: the
// integral multiple f*M of smallest index in the maximal order, with ties
// broken by the lexicographically smallest canonical data.  Two modules are
// field-multiplier equivalent iff their representatives coincide.
QuadModule canonical_class_rep(const QuadModule& m);

enum class ModuleVerdict { Equivalent, NotEquivalent, Unsupported };

struct ModuleEquivalence {
    ModuleVerdict verdict;
    std::string detail;  // multiplier class, certificate, or unsupported step
};

// Does some field element f satisfy f*ma = mb, up to powers of lambda?
// Decided by (i) equality of multiplier rings, (ii) proper equivalence of
// the associated forms, testing both signs of the multiplier norm.  Both
// modules must be closed under multiplication by lambda.
ModuleEquivalence modules_equivalent(const QuadModule& ma, const QuadModule& mb,
                                     const AlgebraicNumber& lambda);

}  // namespace cstareq

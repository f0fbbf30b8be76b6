#pragma once

// Exact spectral data for integer matrices whose eigenvalues live in Q or in
// a real quadratic field Q(sqrt(d)).  Everything is computed symbolically;
// no floating point is used anywhere.

#include <stdexcept>
#include <string>
#include <vector>

#include "cstareq/exactmat.hpp"

namespace cstareq {

// Violated caller-facing precondition (maps to CLI exit code 3).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the implemented (tractable) fragment (reported, not fatal).
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A real number a + b*sqrt(d) with a, b rational and d squarefree > 1.
// Rational numbers are the b == 0, d == 0 case.  Mixed-field arithmetic is
// allowed only when one operand is rational.
class AlgebraicNumber {
public:
    AlgebraicNumber() : a_(0), b_(0), d_(0) {}
    AlgebraicNumber(const mpq_class& r) : a_(r), b_(0), d_(0) {}
    AlgebraicNumber(long r) : a_(r), b_(0), d_(0) {}
    AlgebraicNumber(const mpq_class& a, const mpq_class& b, const mpz_class& d);

    const mpq_class& rat_part() const { return a_; }
    const mpq_class& irr_part() const { return b_; }
    const mpz_class& field_d() const { return d_; }
    bool is_rational() const { return b_ == 0; }
    mpq_class as_rational() const;  // requires is_rational()

    AlgebraicNumber conjugate() const { return {a_, -b_, d_}; }
    mpq_class norm() const { return a_ * a_ - b_ * b_ * d_; }
    mpq_class trace() const { return 2 * a_; }
    int sign() const;  // exact sign as a real number
    AlgebraicNumber abs() const { return sign() >= 0 ? *this : -*this; }

    AlgebraicNumber operator-() const { return {-a_, -b_, d_}; }
    AlgebraicNumber operator+(const AlgebraicNumber& o) const;
    AlgebraicNumber operator-(const AlgebraicNumber& o) const;
    AlgebraicNumber operator*(const AlgebraicNumber& o) const;
    AlgebraicNumber operator/(const AlgebraicNumber& o) const;
    bool operator==(const AlgebraicNumber& o) const;
    bool operator!=(const AlgebraicNumber& o) const { return !(*this == o); }
    bool operator<(const AlgebraicNumber& o) const { return (*this - o).sign() < 0; }
    bool operator>(const AlgebraicNumber& o) const { return (*this - o).sign() > 0; }

    // "3/2" for rationals, "10+1*sqrt(101)" for quadratic values.
    std::string str() const;

private:
    mpq_class a_, b_;
    mpz_class d_;
    void normalize();
};

// Matrix over Q(sqrt(d)) (or Q); all entries must share one field.
class AlgMatrix {
public:
    AlgMatrix() : rows_(0), cols_(0) {}
    AlgMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}
    explicit AlgMatrix(const IntMatrix& m);
    explicit AlgMatrix(const RatMatrix& m);

    static AlgMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    AlgebraicNumber& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const AlgebraicNumber& operator()(std::size_t i, std::size_t j) const {
        return a_[i * cols_ + j];
    }
    bool operator==(const AlgMatrix& o) const = default;

    AlgMatrix operator+(const AlgMatrix& o) const;
    AlgMatrix operator-(const AlgMatrix& o) const;
    AlgMatrix operator*(const AlgMatrix& o) const;
    AlgMatrix operator*(const AlgebraicNumber& s) const;
    AlgMatrix transpose() const;
    AlgMatrix conjugate() const;  // entrywise Galois conjugate
    bool is_zero() const;

private:
    std::size_t rows_, cols_;
    std::vector<AlgebraicNumber> a_;
};

std::size_t rank(const AlgMatrix& m);
AlgMatrix kernel_basis(const AlgMatrix& m);  // columns span {x : m x = 0}
AlgebraicNumber det(const AlgMatrix& m);
std::optional<AlgMatrix> inverse(const AlgMatrix& m);
std::optional<AlgMatrix> solve(const AlgMatrix& a, const AlgMatrix& b);

// Monic integer polynomial, coefficients descending (c[0] = 1 = leading).
using MonicPoly = std::vector<mpz_class>;

struct PolyFactor {
    MonicPoly poly;  // irreducible over Q, degree 1 or 2
    unsigned multiplicity;
    bool operator==(const PolyFactor& o) const = default;
};

struct CharFactorization {
    std::vector<PolyFactor> factors;
    MonicPoly remainder;  // degree 0 (= {1}) when complete
    bool complete = false;
};

// Split a monic integer polynomial into irreducible factors of degree <= 2;
// any part with only higher-degree irreducible factors is left in
// `remainder` and `complete` is false.
CharFactorization factor_char_poly(const MonicPoly& p);

// The roots (in Q or a real quadratic field) of an irreducible factor of
// degree <= 2; for a quadratic factor with negative discriminant (complex
// pair) an empty vector is returned.
std::vector<AlgebraicNumber> real_roots(const MonicPoly& factor);

struct PerronData {
    AlgebraicNumber lambda;               // Perron-Frobenius eigenvalue
    MonicPoly min_poly;                   // its minimal polynomial over Q
    mpz_class d;                          // 0 for rational lambda, else squarefree > 1
    std::vector<AlgebraicNumber> v;       // left (row) eigenvector
    std::vector<AlgebraicNumber> w;       // right (column) eigenvector
};

// Exact Perron-Frobenius data of a primitive matrix.  Eigenvectors are
// normalized to have algebraic-integer entries (in Z + Z*omega, with
// omega = sqrt(d), or (1+sqrt(d))/2 when d = 1 mod 4) of content 1, and to
// be entrywise positive.  Throws UnsupportedError when the Perron root does
// not lie in Q or a real quadratic field.
PerronData perron_data(const IntMatrix& a);

struct Eigenspace {
    AlgebraicNumber eigenvalue;
    unsigned multiplicity;   // algebraic multiplicity
    AlgMatrix column_basis;  // basis of ker (A - lambda I)^mult, as columns
    AlgMatrix row_basis;     // basis of the corresponding left null space, as rows
};

// Generalized eigenspaces for all eigenvalues lying in Q or a real
// quadratic field; eigenvalues outside (complex quadratic pairs or degree
// > 2) raise UnsupportedError.
std::vector<Eigenspace> generalized_eigenspaces(const IntMatrix& a);

// <v, w> for the content-normalized positive PF eigenvectors.
AlgebraicNumber inner_product_invariant(const IntMatrix& a);

// Fundamental unit (> 1) of the quadratic order Z[sqrt(d)] or, when
// maximal_order and d = 1 mod 4, of Z[(1+sqrt(d))/2].  d squarefree > 1.
AlgebraicNumber fundamental_unit(const mpz_class& d, bool maximal_order);

// omega-coordinates of x in the order Z + Z*omega scaled by 1/q:
// returns (s, t, q) with x = (s + t*omega)/q, gcd(s, t, q) = 1, q > 0.
struct OmegaCoords {
    mpz_class s, t, q;
};
OmegaCoords omega_coords(const AlgebraicNumber& x);

// omega for the field: sqrt(d), or (1+sqrt(d))/2 when d = 1 mod 4.
AlgebraicNumber field_omega(const mpz_class& d);

}  // namespace cstareq

#pragma once

// Exact integer / rational dense linear algebra on top of GMP.
//
// Conventions used throughout the project:
//  * column-style Hermite normal form: for M (n x m) we return H = M*U with
//    U unimodular, H in column echelon form, pivots positive, pivot rows
//    strictly increasing, and the other entries of a pivot row reduced into
//    [0, pivot).  Zero columns are moved to the end; the corresponding
//    columns of U form a basis of the integer kernel of M.
//  * characteristic polynomials are monic in x, stored as coefficient
//    vectors c[0..N] with c[0] = 1 and c[j] the coefficient of x^(N-j).

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cstareq {

class RatMatrix;

class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<mpz_class> data)
        : rows_(rows), cols_(cols), a_(std::move(data)) {}
    // Row-major brace initialization: IntMatrix({{1,1},{2,0}}).
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix zero(std::size_t rows, std::size_t cols) { return IntMatrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const = default;

    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator*(const mpz_class& s) const;
    IntMatrix operator-() const;

    IntMatrix transpose() const;
    IntMatrix pow(unsigned long e) const;  // square matrices, e >= 0
    mpz_class trace() const;
    bool is_zero() const;
    bool is_nonnegative() const;
    bool is_positive() const;

    IntMatrix col(std::size_t j) const;          // column as rows x 1
    IntMatrix submatrix_cols(std::size_t j0, std::size_t j1) const;  // columns [j0, j1)

    std::string str() const;

private:
    std::size_t rows_, cols_;
    std::vector<mpz_class> a_;
};

class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}
    explicit RatMatrix(const IntMatrix& m);

    static RatMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    mpq_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const mpq_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const RatMatrix& o) const = default;

    RatMatrix operator+(const RatMatrix& o) const;
    RatMatrix operator-(const RatMatrix& o) const;
    RatMatrix operator*(const RatMatrix& o) const;
    RatMatrix operator*(const mpq_class& s) const;

    RatMatrix transpose() const;
    bool is_zero() const;
    bool is_integral() const;
    IntMatrix to_integer() const;        // requires is_integral()
    mpz_class denominator_lcm() const;   // lcm of entry denominators (>= 1)

    std::string str() const;

private:
    std::size_t rows_, cols_;
    std::vector<mpq_class> a_;
};

// Integer column-lattice, kept with a column-HNF basis (full column rank).
struct Lattice {
    IntMatrix basis;  // N x r, column HNF
    std::size_t rank() const { return basis.cols(); }
    bool operator==(const Lattice& o) const = default;
};

struct HnfResult {
    IntMatrix h;  // column HNF of the input
    IntMatrix u;  // unimodular, input * u == h
};

struct SnfResult {
    IntMatrix s;  // diagonal, d1 | d2 | ... | dr, positive
    IntMatrix u;  // unimodular row transform
    IntMatrix v;  // unimodular column transform, u * input * v == s
};

// Column-style Hermite normal form (see header comment for the convention).
HnfResult hnf(const IntMatrix& m);

// Smith normal form with transforms.
SnfResult snf(const IntMatrix& m);

// Basis of the integer kernel {x : m x = 0}, as columns (always saturated).
IntMatrix kernel(const IntMatrix& m);

// Monic characteristic polynomial of a square matrix (Faddeev-LeVerrier,
// all divisions exact).  c[0] = 1, c[j] = coefficient of x^(N-j).
std::vector<mpz_class> char_poly(const IntMatrix& m);

// Fraction-free determinant (Bareiss).
mpz_class det(const IntMatrix& m);

// Primitivity of a nonnegative square matrix: some power is entrywise
// positive.  Checked on the positivity pattern at the Wielandt exponent
// (N-1)^2 + 1, which is sharp.
bool is_primitive(const IntMatrix& m);

// Saturation of the column lattice: the lattice of all integer vectors in
// the rational column span of m.  Basis returned in column HNF.
Lattice saturate(const IntMatrix& m);

// Z-basis of the lattice {J : B J = J A} of integer intertwiners.
std::vector<IntMatrix> intertwiner_lattice(const IntMatrix& a, const IntMatrix& b);

// --- rational solvers -----------------------------------------------------

// Rank over Q.
std::size_t rank(const RatMatrix& m);

// Inverse of a nonsingular square rational matrix (nullopt when singular).
std::optional<RatMatrix> inverse(const RatMatrix& m);
std::optional<RatMatrix> inverse(const IntMatrix& m);

// Solve a X = b exactly over Q; nullopt when inconsistent.  When the system
// is underdetermined the solution with zero free variables is returned.
std::optional<RatMatrix> solve(const RatMatrix& a, const RatMatrix& b);

// Determinant over Q.
mpq_class det(const RatMatrix& m);

}  // namespace cstareq

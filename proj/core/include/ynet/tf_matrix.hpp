#pragma once

#include <Eigen/Dense>

#include "ynet/rational.hpp"

namespace ynet {

/// Rectangular matrix of rational transfer functions -- the representation in
/// which every admittance lives. Entries share whatever per-unit base the
/// owning case declares; the matrix itself is base-agnostic.
class TFMatrix {
public:
    TFMatrix() : rows_(0), cols_(0) {}
    TFMatrix(int rows, int cols);

    static TFMatrix identity(int n);
    static TFMatrix zeros(int rows, int cols) { return TFMatrix(rows, cols); }
    /// Constant matrix with trivial denominators.
    static TFMatrix constant(const Eigen::MatrixXcd& m);
    static TFMatrix constant(const Eigen::MatrixXd& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    RationalFunction& operator()(int i, int j);
    const RationalFunction& operator()(int i, int j) const;

    TFMatrix& operator+=(const TFMatrix& o);
    TFMatrix& operator-=(const TFMatrix& o);
    friend TFMatrix operator+(TFMatrix a, const TFMatrix& b) { return a += b; }
    friend TFMatrix operator-(TFMatrix a, const TFMatrix& b) { return a -= b; }
    TFMatrix operator*(const TFMatrix& o) const;
    friend TFMatrix operator*(const Eigen::MatrixXcd& m, const TFMatrix& a);
    friend TFMatrix operator*(const TFMatrix& a, const Eigen::MatrixXcd& m);

    TFMatrix transpose() const;

    /// Entrywise evaluation. Throws PoleError naming the entry if any
    /// denominator vanishes at s.
    Eigen::MatrixXcd eval(cdouble s) const;

    /// Fraction-aware determinant. Each row is cleared to a polynomial row by
    /// its own denominator product (duplicate denominators within a row are
    /// counted once), the polynomial determinant is expanded by memoized
    /// Laplace cofactors, and the cleared factors return as the denominator.
    /// The result is NOT implicitly simplified.
    RationalFunction det() const;

    /// Matrix with row r and column c removed.
    TFMatrix minor_matrix(int r, int c) const;
    /// (-1)^(r+c) * det(minor(r, c)).
    RationalFunction cofactor(int r, int c) const;

    /// Exact rational inverse of a 2x2 matrix.
    TFMatrix inverse2x2() const;

    /// Entrywise explicit simplify (never done implicitly).
    TFMatrix simplified(double tol = RationalFunction::kCancelTol) const;

    /// Place a block with its (0,0) entry at (i, j).
    void set_block(int i, int j, const TFMatrix& block);

private:
    int rows_, cols_;
    std::vector<RationalFunction> e_;  // row-major

    void check_range(int i, int j) const;
};

}  // namespace ynet

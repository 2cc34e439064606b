#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "crsing/gauss_rational.hpp"

namespace crs {

using Vector = std::vector<GaussRational>;

/// Dense row-major matrix over Q(i).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  GaussRational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const GaussRational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const;
  Vector column(std::size_t j) const;
  bool is_zero() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& v);
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GaussRational> data_;
};

/// Reduced row echelon form by exact Gauss-Jordan elimination.  Pivot columns
/// are chosen left to right, so ties go to the lowest index.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivot_cols;
};

Echelon row_reduce(Matrix m);
std::size_t rank(const Matrix& m);
/// Basis of the right kernel, one vector per free column (that entry set to 1).
std::vector<Vector> kernel(const Matrix& m);
/// A solution of m x = rhs with all free variables zero, or nullopt.
std::optional<Vector> solve(const Matrix& m, const Vector& rhs);
/// Throws ArithmeticError for singular input.
Matrix inverse(const Matrix& m);

/// Coefficients (lowest degree first) of det(x I - a); monic of degree n.
/// Computed with the Faddeev-LeVerrier recurrence.
std::vector<GaussRational> characteristic_polynomial(const Matrix& a);

GaussRational evaluate_polynomial(const std::vector<GaussRational>& coeffs, const GaussRational& x);

}  // namespace crs

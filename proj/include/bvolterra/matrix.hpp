#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <vector>

#include "bvolterra/lattice.hpp"
#include "bvolterra/scalar.hpp"

namespace bvolterra {

/// Dense row-major rational matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Scalar>> rows);

  static Matrix zero(std::size_t n) { return Matrix(n, n); }
  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  Vector apply(const Vector& x) const;
  Vector row(std::size_t i) const;
  Vector column(std::size_t j) const;

  bool is_zero() const;
  bool is_nonnegative() const;
  bool is_diagonal() const;
  Matrix abs() const;
  Matrix transpose() const;
  Matrix pow(unsigned k) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(const Scalar& factor);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(const Scalar& factor, Matrix m);
std::ostream& operator<<(std::ostream& os, const Matrix& m);

/// Entrywise a <= b.
bool entrywise_leq(const Matrix& a, const Matrix& b);

}  // namespace bvolterra

#include "bvolterra/matrix.hpp"

#include <algorithm>

#include "bvolterra/errors.hpp"

namespace bvolterra {

Matrix::Matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.dim(), d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) m(i, i) = d[i];
  return m;
}

Vector Matrix::apply(const Vector& x) const {
  if (x.dim() != cols_) throw DimensionMismatch("matrix-vector dimension mismatch");
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) {
      const Scalar& a = (*this)(i, j);
      if (sgn(a) != 0 && sgn(x[j]) != 0) acc += a * x[j];
    }
    out[i] = acc;
  }
  return out;
}

Vector Matrix::row(std::size_t i) const {
  Vector r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
  return r;
}

Vector Matrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return sgn(s) == 0; });
}

bool Matrix::is_nonnegative() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return sgn(s) >= 0; });
}

bool Matrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (i != j && sgn((*this)(i, j)) != 0) return false;
    }
  }
  return true;
}

Matrix Matrix::abs() const {
  Matrix m = *this;
  for (auto& e : m.data_) e = ::abs(e);
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  }
  return m;
}

Matrix Matrix::pow(unsigned k) const {
  if (!is_square()) throw DimensionMismatch("power of a non-square matrix");
  Matrix result = identity(rows_);
  for (unsigned i = 0; i < k; ++i) result = result * *this;
  return result;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix sum shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix difference shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(const Scalar& factor) {
  for (auto& e : data_) e *= factor;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(const Scalar& factor, Matrix m) { return m *= factor; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw DimensionMismatch("matrix product shape mismatch");
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Scalar& a = lhs(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) {
        if (sgn(rhs(k, j)) != 0) out(i, j) += a * rhs(k, j);
      }
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ',';
    os << m.row(i);
  }
  return os << ']';
}

bool entrywise_leq(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("entrywise comparison shape mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) > b(i, j)) return false;
    }
  }
  return true;
}

}  // namespace bvolterra

#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <variant>
#include <vector>

#include "bvolterra/scalar.hpp"

namespace bvolterra {

/// Element of E = Q^n with the coordinatewise order.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim) : entries_(dim) {}
  explicit Vector(std::vector<Scalar> entries) : entries_(std::move(entries)) {}
  Vector(std::initializer_list<Scalar> entries) : entries_(entries) {}

  /// Standard basis vector e_i, zero-based.
  static Vector unit(std::size_t dim, std::size_t i);
  static Vector constant(std::size_t dim, const Scalar& value);

  std::size_t dim() const { return entries_.size(); }
  const Scalar& operator[](std::size_t i) const { return entries_[i]; }
  Scalar& operator[](std::size_t i) { return entries_[i]; }
  std::span<const Scalar> entries() const { return entries_; }

  bool is_zero() const;
  bool is_nonnegative() const;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(const Scalar& factor);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<Scalar> entries_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator-(Vector v);
Vector operator*(const Scalar& factor, Vector v);
std::ostream& operator<<(std::ostream& os, const Vector& v);

void require_same_dim(const Vector& x, const Vector& y);

enum class LatticeOp { sup, inf, abs, pos_part, neg_part };

Vector sup(const Vector& x, const Vector& y);
Vector inf(const Vector& x, const Vector& y);
Vector abs(const Vector& x);
Vector pos_part(const Vector& x);
Vector neg_part(const Vector& x);

/// Dispatches to the Riesz-space operation named by `op`. Binary operations
/// require `y`; unary ones ignore it.
Vector lattice_eval(LatticeOp op, const Vector& x, const Vector* y = nullptr);

/// x <= y coordinatewise.
bool leq(const Vector& x, const Vector& y);

/// |x| ^ |y| = 0.
bool disjoint(const Vector& x, const Vector& y);

enum class NormKind { one, two, inf };

struct NormTag {
  NormKind p = NormKind::inf;
  friend bool operator==(const NormTag&, const NormTag&) = default;
};

inline constexpr NormTag kNorm1{NormKind::one};
inline constexpr NormTag kNorm2{NormKind::two};
inline constexpr NormTag kNormInf{NormKind::inf};

/// Relative tolerance for every ell_2 comparison.
inline constexpr double kNorm2Tolerance = 1e-9;

/// Exact for p in {1, inf}; binary floating point for p = 2.
using NormValue = std::variant<Scalar, double>;

NormValue norm(const Vector& x, NormTag tag);
/// ell_1 or ell_inf norm; throws Unsupported for p = 2.
Scalar exact_norm(const Vector& x, NormTag tag);
double to_double(const NormValue& value);
/// Exact equality for Scalar values, relative tolerance for doubles.
bool norm_equal(const NormValue& a, const NormValue& b);
bool norm_leq(const NormValue& a, const NormValue& b);

const char* to_string(NormKind p);
std::optional<NormKind> parse_norm_kind(std::string_view text);

}  // namespace bvolterra

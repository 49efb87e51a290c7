#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <variant>
#include <vector>

#include "bvolterra/lattice.hpp"
#include "bvolterra/matrix.hpp"

namespace bvolterra {

/// Band projection of Q^n onto a set of coordinates. Coordinates are stored as
/// a bitmask; the public coordinate lists are 1-based.
class OrderProjection {
 public:
  static constexpr std::size_t kMaxDim = 64;

  OrderProjection() = default;
  OrderProjection(std::size_t dim, std::uint64_t mask);

  static OrderProjection zero(std::size_t dim) { return {dim, 0}; }
  static OrderProjection one(std::size_t dim);
  /// Builds from 1-based coordinates.
  static OrderProjection from_coords(std::size_t dim, std::span<const std::size_t> coords);
  static OrderProjection from_coords(std::size_t dim, std::initializer_list<std::size_t> coords);

  std::size_t dim() const { return dim_; }
  std::uint64_t mask() const { return mask_; }
  /// Zero-based membership test.
  bool contains(std::size_t i) const { return (mask_ >> i) & 1u; }
  std::size_t count() const;
  bool is_zero() const { return mask_ == 0; }
  bool is_one() const { return mask_ == full_mask(dim_); }
  std::vector<std::size_t> coords() const;

  Vector apply(const Vector& x) const;
  Matrix matrix() const;
  /// pi * A (row masking).
  Matrix left(const Matrix& a) const;
  /// A * pi (column masking).
  Matrix right(const Matrix& a) const;

  static std::uint64_t full_mask(std::size_t dim);

  friend bool operator==(const OrderProjection&, const OrderProjection&) = default;
  friend auto operator<=>(const OrderProjection&, const OrderProjection&) = default;

 private:
  std::size_t dim_ = 0;
  std::uint64_t mask_ = 0;
};

std::ostream& operator<<(std::ostream& os, const OrderProjection& p);

OrderProjection meet(const OrderProjection& a, const OrderProjection& b);
OrderProjection join(const OrderProjection& a, const OrderProjection& b);
OrderProjection complement(const OrderProjection& a);
bool leq(const OrderProjection& a, const OrderProjection& b);

enum class BooleanOp { meet, join, complement, leq };
std::variant<OrderProjection, bool> boolean_ops(BooleanOp op, const OrderProjection& a,
                                                const OrderProjection* b = nullptr);

/// Finite Boolean subalgebra of the coordinate projections, represented by
/// its atoms. Members are the unions of atoms; the member with index k is the
/// union of the atoms whose bit is set in k, so indices enumerate the algebra
/// in a fixed order with 0 first and 1 last.
class BooleanSubalgebra {
 public:
  BooleanSubalgebra() = default;
  /// Atoms must partition {0..dim-1} into nonempty blocks.
  BooleanSubalgebra(std::size_t dim, std::vector<std::uint64_t> atoms);

  static BooleanSubalgebra trivial(std::size_t dim);
  static BooleanSubalgebra discrete(std::size_t dim);
  /// Blocks given as 1-based coordinate lists.
  static BooleanSubalgebra from_blocks(std::size_t dim, const std::vector<std::vector<std::size_t>>& blocks);

  std::size_t dim() const { return dim_; }
  std::span<const std::uint64_t> atoms() const { return atoms_; }
  std::size_t atom_count() const { return atoms_.size(); }
  OrderProjection atom(std::size_t k) const { return {dim_, atoms_[k]}; }
  /// Number of members, 2^atoms. Throws Unsupported above 2^62.
  std::uint64_t size() const;

  OrderProjection element(std::uint64_t index) const;
  std::optional<std::uint64_t> index_of(const OrderProjection& p) const;
  bool contains(const OrderProjection& p) const { return index_of(p).has_value(); }
  /// Every member in index order; refuses algebras with more than 2^20 members.
  std::vector<OrderProjection> elements() const;
  /// Index of the atom containing coordinate i (zero-based).
  std::size_t atom_of(std::size_t i) const;

  friend bool operator==(const BooleanSubalgebra&, const BooleanSubalgebra&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> atoms_;
};

std::ostream& operator<<(std::ostream& os, const BooleanSubalgebra& b);

/// Smallest Boolean subalgebra containing the generators. Atoms are the
/// classes of coordinates lying in exactly the same generators.
BooleanSubalgebra generated_subalgebra(std::size_t dim, std::span<const OrderProjection> generators);

/// Band projection generated by x: the coordinates where x is nonzero.
OrderProjection support_projection(const Vector& x);

/// True iff distinct members of the set meet in 0. Repeated entries count once.
bool is_antichain(std::span<const OrderProjection> set);

/// Sc(pi): the members of the algebra above pi, in index order.
std::vector<OrderProjection> section(const BooleanSubalgebra& algebra, const OrderProjection& p);

/// A transformation of a finite algebra stored as a full table.
class SectionalMap {
 public:
  SectionalMap(BooleanSubalgebra algebra, std::vector<OrderProjection> table);

  static SectionalMap identity(const BooleanSubalgebra& algebra);
  static SectionalMap from_function(const BooleanSubalgebra& algebra,
                                    const std::function<OrderProjection(const OrderProjection&)>& f);

  const BooleanSubalgebra& algebra() const { return algebra_; }
  std::span<const OrderProjection> table() const { return table_; }
  OrderProjection operator()(const OrderProjection& p) const;

  friend bool operator==(const SectionalMap&, const SectionalMap&) = default;

 private:
  BooleanSubalgebra algebra_;
  std::vector<OrderProjection> table_;
};

/// S(Sc(pi)) = Sc(S(pi)) as sets, for every pi in the algebra.
bool is_sectionally_open(const SectionalMap& s);
bool fixes_zero(const SectionalMap& s);
/// S(pi) >= pi for every pi.
bool is_inflationary(const SectionalMap& s);

}  // namespace bvolterra

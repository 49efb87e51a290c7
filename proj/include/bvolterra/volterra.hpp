#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bvolterra/filtration.hpp"
#include "bvolterra/lattice.hpp"
#include "bvolterra/matrix.hpp"
#include "bvolterra/projection.hpp"

namespace bvolterra {

/// Square matrix with nonnegative entries.
class PositiveOperator {
 public:
  PositiveOperator() = default;
  /// Throws PreconditionError unless `m` is square and entrywise >= 0.
  explicit PositiveOperator(Matrix m);

  static PositiveOperator identity(std::size_t n) { return PositiveOperator(Matrix::identity(n)); }

  std::size_t dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Vector apply(const Vector& x) const { return m_.apply(x); }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  friend bool operator==(const PositiveOperator&, const PositiveOperator&) = default;

 private:
  Matrix m_;
};

std::ostream& operator<<(std::ostream& os, const PositiveOperator& t);

struct VolterraWitness {
  OrderProjection pi;
  Vector x;
  Vector y;
};

struct VolterraVerdict {
  bool holds = true;
  std::optional<VolterraWitness> witness;
  explicit operator bool() const { return holds; }
};

/// Block-diagonal test on the atoms. A failure carries the first pair
/// (e_j, 0) with pi x = pi y and pi T x != pi T y, pi taken in index order.
VolterraVerdict is_b_volterra(const PositiveOperator& t, const BooleanSubalgebra& algebra);

struct Equivalences {
  bool definitional = false;
  bool left_absorbs = false;
  bool right_complement = false;
  bool band_invariant = false;
  bool agree() const {
    return definitional == left_absorbs && left_absorbs == right_complement && right_complement == band_invariant;
  }
};

/// Evaluates, over every member of the algebra: pi T e_j = 0 for j outside pi;
/// pi T = pi T pi; T pi* = pi* T pi*; pi* T pi = 0.
Equivalences volterra_equivalences(const PositiveOperator& t, const BooleanSubalgebra& algebra);

/// xi_n T xi_n* = 0 for every prefix level. A failure carries (xi_n, e_j, 0).
VolterraVerdict is_regular_volterra(const PositiveOperator& t, const ForwardFiltration& xi);

enum class DerivedKind { pi_t, affine, reflect, residual };

/// pi_t: pi T. affine: pi + T - pi T. reflect: pi - pi T + pi* T, needs
/// T <= I. residual: I + pi - T, needs pi T = pi and a nonnegative result.
PositiveOperator make_derived_operator(DerivedKind kind, const OrderProjection& pi, const PositiveOperator& t);

bool commutes_with(const OrderProjection& pi, const Matrix& s);

class BandPattern {
 public:
  BandPattern(std::size_t dim, std::vector<bool> mask) : dim_(dim), mask_(std::move(mask)) {}
  std::size_t dim() const { return dim_; }
  bool allows(std::size_t i, std::size_t j) const { return mask_[i * dim_ + j]; }

  friend bool operator==(const BandPattern&, const BandPattern&) = default;

 private:
  std::size_t dim_;
  std::vector<bool> mask_;
};

/// Entry (i, j) is allowed iff i and j lie in one atom.
BandPattern volterra_band_pattern(const BooleanSubalgebra& algebra);
bool band_contains(const BandPattern& pattern, const Matrix& a);

struct OperatorNorm {
  Scalar norm;
  Scalar regular;
};

/// Induced ell_1 (max column sum) or ell_inf (max row sum) norm. These agree
/// with the regular norm because T >= 0.
OperatorNorm operator_norm(const PositiveOperator& t, NormTag tag);

struct PropertyCheck {
  bool holds = true;
  std::string detail;
  explicit operator bool() const { return holds; }
};

/// pi rho T^k (t pi x + (1-t) x) = pi rho T^k y, given pi x ^ rho y = pi y ^ rho z.
/// Hypothesis violations throw PreconditionError.
PropertyCheck check_meet_condition_prop(const PositiveOperator& t, const BooleanSubalgebra& algebra,
                                        const OrderProjection& pi, const OrderProjection& rho, const Vector& x,
                                        const Vector& y, const Vector& z, const Scalar& s, unsigned k);

struct DisjointnessCheck {
  bool holds = true;
  Vector u;
  Vector v;
  BooleanSubalgebra algebra;
  explicit operator bool() const { return holds; }
};

/// The algebra is generated by the supports of `generators`, whose first three
/// entries are x1 >= x2 >= x3 >= 0. Checks
/// (pi_x1 - pi_x2) T sigma x  _|_  (pi_x2 - pi_x3) T (rho* sigma x + w).
DisjointnessCheck check_disjointness_prop(const PositiveOperator& t, std::span<const Vector> generators,
                                          const OrderProjection& sigma, const OrderProjection& rho, const Vector& x,
                                          const Vector& w);

struct Restriction {
  PositiveOperator op;
  ForwardFiltration filtration;
  /// Zero-based coordinates of the band, in increasing order.
  std::vector<std::size_t> coords;
};

/// Compression xi_k T xi_k to the coordinates of xi_k with xi'_m = xi_m xi_k.
Restriction restrict_operator(const PositiveOperator& t, const ForwardFiltration& xi, std::size_t k);

/// The relation R_t of the system with phi(u) = 1/(1+u).
bool system_relation(const ForwardFiltration& xi, const Scalar& t, const Vector& x, const Vector& y);
/// floor((1-t)/t) for 0 < t < 1.
std::size_t system_index(const Scalar& t);

class ChainSubspace {
 public:
  /// Indices nondecreasing; kInfinity is allowed.
  ChainSubspace(ForwardFiltration xi, std::vector<std::size_t> chain);

  const ForwardFiltration& filtration() const { return xi_; }
  std::span<const std::size_t> chain() const { return chain_; }
  std::size_t length() const { return chain_.size(); }

  /// xi_{n_i} x_i = xi_{n_i} x_j for i <= j.
  bool member(std::span<const Vector> tuple) const;
  /// xi_{n_i} x_i = xi_{n_j} x_j for all i, j.
  bool member_literal(std::span<const Vector> tuple) const;
  /// (T x_1, ..., T x_k); requires T regular Volterra and a member tuple.
  std::vector<Vector> apply(const PositiveOperator& t, std::span<const Vector> tuple) const;
  /// Drops the last entry; the result is a member of the shortened chain.
  std::vector<Vector> project(std::span<const Vector> tuple) const;
  ChainSubspace shortened() const;

 private:
  void require_arity(std::span<const Vector> tuple) const;

  ForwardFiltration xi_;
  std::vector<std::size_t> chain_;
};

struct ChainElement {
  ChainSubspace space;
  std::vector<Vector> tuple;
};

/// T'_F: sum over the chains in F of T applied to the first entry.
Vector tf_prime(const PositiveOperator& t, std::span<const ChainElement> family);

/// T >= 0, T^2 = T and T 1 strictly positive.
bool is_conditional_expectation(const PositiveOperator& t);

/// Filtration of the supports of a nested chain in the range of T, over the
/// algebra they generate. Both bands of every level must be T-invariant.
ForwardFiltration ce_filtration(const PositiveOperator& t, std::span<const Vector> range_chain);

}  // namespace bvolterra

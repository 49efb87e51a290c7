#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bvolterra/projection.hpp"

namespace bvolterra {

/// Index value standing for the point at infinity of {0, 1, ..., inf}.
inline constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

struct FiltrationCheck {
  bool ok = true;
  /// 1-based prefix position of the first violation, 0 when ok.
  std::size_t index = 0;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Monotone prefix inside the algebra (nondecreasing when `forward`,
/// nonincreasing otherwise).
FiltrationCheck validate_forward(const BooleanSubalgebra& algebra, std::span<const OrderProjection> prefix);
FiltrationCheck validate_backward(const BooleanSubalgebra& algebra, std::span<const OrderProjection> prefix);

/// xi_0 = 0 <= xi_1 <= ... <= xi_K, xi_n = xi_K for finite n >= K, xi_inf = 1.
/// The stabilized value xi_K need not be 1.
class ForwardFiltration {
 public:
  ForwardFiltration(BooleanSubalgebra algebra, std::vector<OrderProjection> prefix);

  const BooleanSubalgebra& algebra() const { return algebra_; }
  std::span<const OrderProjection> prefix() const { return prefix_; }
  std::size_t length() const { return prefix_.size(); }
  std::size_t dim() const { return algebra_.dim(); }

  /// xi_n for n in {0, 1, ..., kInfinity}.
  OrderProjection level(std::size_t n) const;
  /// xi_K, the value on every finite index >= K.
  OrderProjection stabilized() const { return level(length()); }

  friend bool operator==(const ForwardFiltration&, const ForwardFiltration&) = default;

 private:
  BooleanSubalgebra algebra_;
  std::vector<OrderProjection> prefix_;
};

/// xi_0 = 1 >= xi_1 >= ... >= xi_K, xi_n = xi_K for finite n >= K, xi_inf = 0.
class BackwardFiltration {
 public:
  BackwardFiltration(BooleanSubalgebra algebra, std::vector<OrderProjection> prefix);

  const BooleanSubalgebra& algebra() const { return algebra_; }
  std::span<const OrderProjection> prefix() const { return prefix_; }
  std::size_t length() const { return prefix_.size(); }
  std::size_t dim() const { return algebra_.dim(); }
  OrderProjection level(std::size_t n) const;

  friend bool operator==(const BackwardFiltration&, const BackwardFiltration&) = default;

 private:
  BooleanSubalgebra algebra_;
  std::vector<OrderProjection> prefix_;
};

std::ostream& operator<<(std::ostream& os, const ForwardFiltration& xi);
std::ostream& operator<<(std::ostream& os, const BackwardFiltration& xi);

BackwardFiltration dual(const ForwardFiltration& xi);
ForwardFiltration dual(const BackwardFiltration& xi);

/// L^k(xi): drops the first k levels. Once the prefix is exhausted the
/// result is the constant prefix [xi_K].
ForwardFiltration shift_L(const ForwardFiltration& xi, std::size_t k = 1);

/// Right-continuous step function from the reals into the algebra: 0 below
/// the first breakpoint, then the projection of the last breakpoint <= t.
class ResolutionOfIdentity {
 public:
  ResolutionOfIdentity(std::size_t dim, std::vector<std::pair<Scalar, OrderProjection>> breakpoints);

  std::size_t dim() const { return dim_; }
  std::span<const std::pair<Scalar, OrderProjection>> breakpoints() const { return breakpoints_; }
  OrderProjection value(const Scalar& t) const;
  /// e(t + shift).
  ResolutionOfIdentity translated(const Scalar& shift) const;

 private:
  std::size_t dim_;
  std::vector<std::pair<Scalar, OrderProjection>> breakpoints_;
};

/// xi_n = e(t_n) for the sampled t_n, after the optional translation
/// e(t) = e0(t + s0). Requires e(0) = 0 and strictly increasing samples.
ForwardFiltration discretize_resolution(const BooleanSubalgebra& algebra, const ResolutionOfIdentity& e,
                                        std::span<const Scalar> samples,
                                        const std::optional<Scalar>& s0 = std::nullopt);
/// Same, over the algebra generated by the breakpoint values.
ForwardFiltration discretize_resolution(const ResolutionOfIdentity& e, std::span<const Scalar> samples,
                                        const std::optional<Scalar>& s0 = std::nullopt);

/// Filtration of joins of the support blocks of pairwise disjoint vectors.
/// Coordinates outside every support join the last block. The returned
/// algebra's atoms are exactly the blocks.
ForwardFiltration from_disjoint_sum(std::span<const Vector> vectors);

/// n -> S(xi_n). Requires S sectionally open and S(0) = 0.
ForwardFiltration act_sectional(const SectionalMap& s, const ForwardFiltration& xi);

struct AntichainCheck {
  bool ok = true;
  /// First failing level (1-based), 0 when ok.
  std::size_t level = 0;
  explicit operator bool() const { return ok; }
};

/// Levelwise antichain test for n = 1 .. max stabilization index.
AntichainCheck is_antichain_of_filtrations(std::span<const ForwardFiltration> set);

}  // namespace bvolterra

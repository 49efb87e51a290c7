#pragma once

#include <cstddef>
#include <optional>

#include "bvolterra/martingale.hpp"
#include "bvolterra/projection.hpp"

namespace bvolterra {

inline constexpr std::size_t kDefaultHorizon = 64;

/// endo: the space M(xi) with the map T-hat at every stage.
/// shift: the spaces M(L^k(xi)) joined by s.
class DirectedSystem {
 public:
  enum class Kind { endo, shift };

  static DirectedSystem endo(const PositiveOperator& t, const ForwardFiltration& xi,
                             std::size_t horizon = kDefaultHorizon);
  static DirectedSystem shift(const ForwardFiltration& xi, std::size_t horizon = kDefaultHorizon);

  Kind kind() const { return kind_; }
  const ForwardFiltration& base() const { return base_; }
  std::size_t horizon() const { return horizon_; }
  /// Filtration of the space at stage k.
  ForwardFiltration space(std::size_t k) const;
  /// The stage map from k to k + 1.
  Martingale step(const Martingale& x) const;
  Martingale forward(const Martingale& x, std::size_t from, std::size_t to) const;

 private:
  DirectedSystem(Kind kind, ForwardFiltration base, std::optional<CoordwiseOperator> lift, std::size_t horizon);

  Kind kind_;
  ForwardFiltration base_;
  std::optional<CoordwiseOperator> lift_;
  std::size_t horizon_;
};

struct Germ {
  std::size_t stage = 0;
  Martingale rep;
};

struct GermEquality {
  bool equal = false;
  /// First stage where the forwarded representatives agree.
  std::size_t stage = 0;
  explicit operator bool() const { return equal; }
};

GermEquality germ_equal(const DirectedSystem& sys, const Germ& a, const Germ& b);

/// s-hat^k: applies s to the representative of a germ of (T, L^{k-1}(xi)).
Germ colimit_shift_map(const PositiveOperator& t, const ForwardFiltration& xi, std::size_t k, const Germ& g);
/// T-hat-hat: applies T-hat over L^k(xi) to a shift-system germ at stage k.
Germ colimit_T_map(const PositiveOperator& t, const ForwardFiltration& xi, const Germ& g);

/// The same entries read over `target`, revalidated there.
Martingale coerce_martingale(const Martingale& x, const ForwardFiltration& target);

/// S-hat on stage k: coerces a martingale over L^k(S(xi)) to one over L^k(xi).
/// Requires S sectionally open, S(0) = 0 and S inflationary.
Martingale induced_S_hat(const SectionalMap& s, const ForwardFiltration& xi, std::size_t k, const Martingale& x);

/// Limit of the forwarded representative norms once they are constant on
/// the stages [max(i, H/2), H]; empty otherwise.
std::optional<NormValue> germ_norm(const DirectedSystem& sys, const Germ& g, NormTag tag);

}  // namespace bvolterra

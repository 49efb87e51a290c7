#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bvolterra/filtration.hpp"
#include "bvolterra/kernels.hpp"
#include "bvolterra/lattice.hpp"
#include "bvolterra/volterra.hpp"

namespace bvolterra {

struct MartingaleCheck {
  bool ok = true;
  /// 1-based (n, m) of the first failing pair, zero when ok.
  std::size_t n = 0;
  std::size_t m = 0;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// xi_n x_m = x_n for 1 <= n <= m <= K, scanning n upward and m downward.
MartingaleCheck validate_martingale(const ForwardFiltration& xi, std::span<const Vector> prefix);
/// (I - eta_n) x_m = x_n for m >= n.
MartingaleCheck validate_backward_m1(const BackwardFiltration& eta, std::span<const Vector> prefix);

/// A martingale over a forward filtration with prefix length K, so that
/// x_n = x_K for n >= K. With K = 0 it is the zero martingale.
class Martingale {
 public:
  /// Validates; throws PreconditionError on a violation.
  Martingale(ForwardFiltration xi, std::vector<Vector> prefix);
  static Martingale zero(const ForwardFiltration& xi);

  const ForwardFiltration& filtration() const { return xi_; }
  std::span<const Vector> prefix() const { return prefix_; }
  std::size_t length() const { return prefix_.size(); }
  std::size_t dim() const { return xi_.dim(); }
  /// x_n for n >= 1.
  Vector value(std::size_t n) const;
  bool is_zero() const;
  bool is_nonnegative() const;

  Martingale& operator+=(const Martingale& other);
  Martingale& operator-=(const Martingale& other);
  Martingale& operator*=(const Scalar& factor);

  friend bool operator==(const Martingale&, const Martingale&) = default;

 private:
  ForwardFiltration xi_;
  std::vector<Vector> prefix_;
};

Martingale operator+(Martingale a, const Martingale& b);
Martingale operator-(Martingale a, const Martingale& b);
Martingale operator*(const Scalar& factor, Martingale x);
std::ostream& operator<<(std::ostream& os, const Martingale& x);

/// x_K, or the zero vector when K = 0.
Vector tail_value(const Martingale& x);
/// (xi_n v)_n; requires xi_K v = v.
Martingale from_tail(const ForwardFiltration& xi, const Vector& v);
/// (xi_n v)_n for any v.
Martingale iota(const ForwardFiltration& xi, const Vector& v);
/// Drops x_1; the result lives over L(xi).
Martingale shift_s(const Martingale& x, std::size_t k = 1);
/// from_tail(xi, e_j) for the coordinates j of xi_K in increasing order.
std::vector<Martingale> martingale_basis(const ForwardFiltration& xi);

/// Linear map between martingale spaces given by a function.
class MartingaleMap {
 public:
  using Fn = std::function<Martingale(const Martingale&)>;
  MartingaleMap(ForwardFiltration source, ForwardFiltration target, Fn fn);

  static MartingaleMap identity(const ForwardFiltration& xi);
  /// s : M(xi) -> M(L(xi)).
  static MartingaleMap shift(const ForwardFiltration& xi);

  const ForwardFiltration& source() const { return source_; }
  const ForwardFiltration& target() const { return target_; }
  /// Throws PreconditionError when x is not over the source.
  Martingale operator()(const Martingale& x) const;

 private:
  ForwardFiltration source_;
  ForwardFiltration target_;
  Fn fn_;
};

/// after o before.
MartingaleMap compose(const MartingaleMap& after, const MartingaleMap& before);

/// (S_n x_n)_n with the last stage repeated forever.
class CoordwiseOperator {
 public:
  CoordwiseOperator(ForwardFiltration source, ForwardFiltration target, std::vector<Matrix> stages);

  const ForwardFiltration& source() const { return source_; }
  const ForwardFiltration& target() const { return target_; }
  std::span<const Matrix> stages() const { return stages_; }
  const Matrix& stage(std::size_t n) const;

  /// Throws PreconditionError when the image is not a martingale over the target.
  Martingale apply(const Martingale& x) const;
  /// The image sequence on indices 1..horizon() without validation.
  std::vector<Vector> apply_raw(const Martingale& x) const;
  std::size_t horizon() const;
  /// Whether every basis element of the source maps to a target martingale.
  bool maps_into_target() const;
  MartingaleMap as_map() const;

 private:
  ForwardFiltration source_;
  ForwardFiltration target_;
  std::vector<Matrix> stages_;
};

/// T-hat: (xi_n T x_n)_n; requires T regular Volterra for xi.
CoordwiseOperator lift_T_hat(const PositiveOperator& t, const ForwardFiltration& xi);
/// T-hat applied l times.
Martingale apply_power(const CoordwiseOperator& op, const Martingale& x, unsigned l);

/// sup_n ||x_n||.
NormValue regular_norm(const Martingale& x, NormTag tag);

struct BruteForceNorm {
  /// Infimum over dominating positive grid martingales; empty when none exists.
  std::optional<NormValue> value;
  std::size_t candidates = 0;
  std::size_t admissible = 0;
};

/// Enumerates every sequence (y_1..y_K) with entries in `grid`, keeps the
/// positive martingales with y_n >= |x_n|, and minimizes sup_n ||y_n||.
BruteForceNorm regular_norm_bruteforce(const Martingale& x, NormTag tag, std::span<const Scalar> grid,
                                       Execution exec = Execution::parallel);

enum class SquareKind { shift_ladder, iota_square, shift_triangle };
const char* to_string(SquareKind kind);

struct SquareWitness {
  /// j with the squares taken at L^j(xi).
  std::size_t stage = 0;
  SquareKind kind = SquareKind::shift_ladder;
  /// Basis index: of M(L^j(xi)) for the ladder, of E otherwise.
  std::size_t basis = 0;
};

struct SquareVerdict {
  bool holds = true;
  std::optional<SquareWitness> witness;
  std::size_t checked = 0;
  explicit operator bool() const { return holds; }
};

/// For j < depth: s T-hat = T-hat s, iota T = T-hat iota, s iota = iota on bases.
SquareVerdict check_square(const PositiveOperator& t, const ForwardFiltration& xi, std::size_t depth,
                           Execution exec = Execution::parallel);

/// Finite truncation (y_0, ..., y_Kmax) of the ell_inf sum, y_k over L^k(xi).
class MartTuple {
 public:
  static constexpr std::size_t kDefaultKmax = 8;

  MartTuple(ForwardFiltration base, std::vector<Martingale> entries);
  /// (x, s x, s^2 x, ...).
  static MartTuple diagonal(const Martingale& x, std::size_t kmax = kDefaultKmax);

  const ForwardFiltration& base() const { return base_; }
  std::span<const Martingale> entries() const { return entries_; }
  std::size_t kmax() const { return entries_.size() - 1; }

  friend bool operator==(const MartTuple&, const MartTuple&) = default;

 private:
  ForwardFiltration base_;
  std::vector<Martingale> entries_;
};

/// (s^k T-hat^l y_0)_k.
MartTuple bang_operator(const PositiveOperator& t, const ForwardFiltration& xi, unsigned l, const MartTuple& tuple);

}  // namespace bvolterra

#include "bvolterra/limits.hpp"

#include <algorithm>

#include "bvolterra/errors.hpp"

namespace bvolterra {

DirectedSystem::DirectedSystem(Kind kind, ForwardFiltration base, std::optional<CoordwiseOperator> lift,
                               std::size_t horizon)
    : kind_(kind), base_(std::move(base)), lift_(std::move(lift)), horizon_(horizon) {}

DirectedSystem DirectedSystem::endo(const PositiveOperator& t, const ForwardFiltration& xi, std::size_t horizon) {
  return {Kind::endo, xi, lift_T_hat(t, xi), horizon};
}

DirectedSystem DirectedSystem::shift(const ForwardFiltration& xi, std::size_t horizon) {
  return {Kind::shift, xi, std::nullopt, horizon};
}

ForwardFiltration DirectedSystem::space(std::size_t k) const {
  return kind_ == Kind::endo ? base_ : shift_L(base_, k);
}

Martingale DirectedSystem::step(const Martingale& x) const {
  return kind_ == Kind::endo ? lift_->apply(x) : shift_s(x);
}

Martingale DirectedSystem::forward(const Martingale& x, std::size_t from, std::size_t to) const {
  if (to < from) throw PreconditionError("cannot forward a germ to an earlier stage");
  if (!(x.filtration() == space(from))) throw PreconditionError("representative is not over the stage space");
  Martingale y = x;
  if (kind_ == Kind::shift) return shift_s(y, to - from);
  for (std::size_t k = from; k < to; ++k) y = step(y);
  return y;
}

GermEquality germ_equal(const DirectedSystem& sys, const Germ& a, const Germ& b) {
  if (a.stage > sys.horizon() || b.stage > sys.horizon()) throw PreconditionError("germ stage beyond the horizon");
  std::size_t m = std::max(a.stage, b.stage);
  Martingale x = sys.forward(a.rep, a.stage, m);
  Martingale y = sys.forward(b.rep, b.stage, m);
  for (;;) {
    if (x == y) return {true, m};
    if (m == sys.horizon()) return {false, 0};
    x = sys.step(x);
    y = sys.step(y);
    ++m;
  }
}

Germ colimit_shift_map(const PositiveOperator& t, const ForwardFiltration& xi, std::size_t k, const Germ& g) {
  if (k == 0) throw PreconditionError("the shift index starts at 1");
  const ForwardFiltration from = shift_L(xi, k - 1);
  if (auto v = check_square(t, from, 1, Execution::serial); !v) {
    throw PreconditionError("ladder square does not commute at L^" + std::to_string(k - 1));
  }
  if (!(g.rep.filtration() == from)) throw PreconditionError("germ is not over L^(k-1)(xi)");
  return {g.stage, shift_s(g.rep)};
}

Germ colimit_T_map(const PositiveOperator& t, const ForwardFiltration& xi, const Germ& g) {
  if (auto v = check_square(t, xi, g.stage + 1, Execution::serial); !v) {
    throw PreconditionError("ladder does not commute up to the germ stage");
  }
  const ForwardFiltration here = shift_L(xi, g.stage);
  if (!(g.rep.filtration() == here)) throw PreconditionError("germ is not over L^k(xi)");
  return {g.stage, lift_T_hat(t, here).apply(g.rep)};
}

Martingale coerce_martingale(const Martingale& x, const ForwardFiltration& target) {
  if (x.dim() != target.dim()) throw DimensionMismatch("coerce_martingale: dimensions differ");
  std::vector<Vector> prefix;
  for (std::size_t n = 1; n <= target.length(); ++n) prefix.push_back(x.value(n));
  if (auto check = validate_martingale(target, prefix); !check) {
    throw PreconditionError("entries are not a martingale over the target at (" + std::to_string(check.n) + "," +
                            std::to_string(check.m) + ")");
  }
  return {target, std::move(prefix)};
}

Martingale induced_S_hat(const SectionalMap& s, const ForwardFiltration& xi, std::size_t k, const Martingale& x) {
  if (!is_sectionally_open(s)) throw PreconditionError("transformation is not sectionally open");
  if (!fixes_zero(s)) throw PreconditionError("transformation does not fix 0");
  if (!is_inflationary(s)) {
    throw PreconditionError("transformation is not inflationary (S(pi) >= pi fails), so S-hat is not defined");
  }
  const ForwardFiltration image = shift_L(act_sectional(s, xi), k);
  if (!(x.filtration() == image)) throw PreconditionError("martingale is not over L^k(S(xi))");
  try {
    return coerce_martingale(x, shift_L(xi, k));
  } catch (const PreconditionError& e) {
    throw InternalError(std::string("S-hat image failed validation: ") + e.what());
  }
}

std::optional<NormValue> germ_norm(const DirectedSystem& sys, const Germ& g, NormTag tag) {
  const std::size_t h = sys.horizon();
  if (g.stage > h) throw PreconditionError("germ stage beyond the horizon");
  const std::size_t from = std::max(g.stage, h / 2);
  Martingale x = sys.forward(g.rep, g.stage, from);
  const NormValue first = regular_norm(x, tag);
  for (std::size_t m = from; m < h; ++m) {
    x = sys.step(x);
    if (!norm_equal(regular_norm(x, tag), first)) return std::nullopt;
  }
  return first;
}

}  // namespace bvolterra

#include "bvolterra/filtration.hpp"

#include <algorithm>

#include "bvolterra/errors.hpp"

namespace bvolterra {

namespace {

FiltrationCheck validate_chain(const BooleanSubalgebra& algebra, std::span<const OrderProjection> prefix,
                               bool forward) {
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i].dim() != algebra.dim()) return {false, i + 1, "dimension differs from the algebra"};
    if (!algebra.contains(prefix[i])) return {false, i + 1, "level is not a member of the algebra"};
    if (i > 0) {
      const bool monotone = forward ? leq(prefix[i - 1], prefix[i]) : leq(prefix[i], prefix[i - 1]);
      if (!monotone) return {false, i + 1, forward ? "level decreases" : "level increases"};
    }
  }
  return {};
}

}  // namespace

FiltrationCheck validate_forward(const BooleanSubalgebra& algebra, std::span<const OrderProjection> prefix) {
  return validate_chain(algebra, prefix, true);
}

FiltrationCheck validate_backward(const BooleanSubalgebra& algebra, std::span<const OrderProjection> prefix) {
  return validate_chain(algebra, prefix, false);
}

ForwardFiltration::ForwardFiltration(BooleanSubalgebra algebra, std::vector<OrderProjection> prefix)
    : algebra_(std::move(algebra)), prefix_(std::move(prefix)) {
  if (auto check = validate_forward(algebra_, prefix_); !check) {
    throw PreconditionError("invalid forward filtration at index " + std::to_string(check.index) + ": " +
                            check.reason);
  }
}

OrderProjection ForwardFiltration::level(std::size_t n) const {
  if (n == kInfinity) return OrderProjection::one(dim());
  if (n == 0 || prefix_.empty()) return OrderProjection::zero(dim());
  return prefix_[std::min(n, prefix_.size()) - 1];
}

BackwardFiltration::BackwardFiltration(BooleanSubalgebra algebra, std::vector<OrderProjection> prefix)
    : algebra_(std::move(algebra)), prefix_(std::move(prefix)) {
  if (auto check = validate_backward(algebra_, prefix_); !check) {
    throw PreconditionError("invalid backward filtration at index " + std::to_string(check.index) + ": " +
                            check.reason);
  }
}

OrderProjection BackwardFiltration::level(std::size_t n) const {
  if (n == kInfinity) return OrderProjection::zero(dim());
  if (n == 0 || prefix_.empty()) return OrderProjection::one(dim());
  return prefix_[std::min(n, prefix_.size()) - 1];
}

namespace {

template <typename F>
std::ostream& print_prefix(std::ostream& os, const F& xi) {
  os << '[';
  for (std::size_t i = 0; i < xi.length(); ++i) {
    if (i) os << ',';
    os << xi.prefix()[i];
  }
  return os << ']';
}

std::vector<OrderProjection> complements(std::span<const OrderProjection> prefix) {
  std::vector<OrderProjection> out;
  out.reserve(prefix.size());
  for (const auto& p : prefix) out.push_back(complement(p));
  return out;
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const ForwardFiltration& xi) { return print_prefix(os, xi); }
std::ostream& operator<<(std::ostream& os, const BackwardFiltration& xi) { return print_prefix(os, xi); }

BackwardFiltration dual(const ForwardFiltration& xi) { return {xi.algebra(), complements(xi.prefix())}; }
ForwardFiltration dual(const BackwardFiltration& xi) { return {xi.algebra(), complements(xi.prefix())}; }

ForwardFiltration shift_L(const ForwardFiltration& xi, std::size_t k) {
  if (xi.length() == 0 || k == 0) return xi;
  const std::size_t drop = std::min(k, xi.length() - 1);
  return {xi.algebra(), std::vector<OrderProjection>(xi.prefix().begin() + static_cast<std::ptrdiff_t>(drop),
                                                     xi.prefix().end())};
}

ResolutionOfIdentity::ResolutionOfIdentity(std::size_t dim,
                                           std::vector<std::pair<Scalar, OrderProjection>> breakpoints)
    : dim_(dim), breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) throw PreconditionError("a resolution of the identity needs at least one breakpoint");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const auto& [t, p] = breakpoints_[i];
    if (p.dim() != dim_) throw DimensionMismatch("breakpoint projection of other dimension");
    if (i > 0) {
      if (!(breakpoints_[i - 1].first < t)) throw PreconditionError("breakpoints must be strictly increasing");
      if (!leq(breakpoints_[i - 1].second, p)) throw PreconditionError("resolution values must be nondecreasing");
    }
  }
  if (!breakpoints_.back().second.is_one()) throw PreconditionError("a resolution of the identity must reach 1");
}

OrderProjection ResolutionOfIdentity::value(const Scalar& t) const {
  OrderProjection out = OrderProjection::zero(dim_);
  for (const auto& [b, p] : breakpoints_) {
    if (b <= t) out = p;
  }
  return out;
}

ResolutionOfIdentity ResolutionOfIdentity::translated(const Scalar& shift) const {
  auto moved = breakpoints_;
  for (auto& [t, p] : moved) t -= shift;
  return {dim_, std::move(moved)};
}

ForwardFiltration discretize_resolution(const BooleanSubalgebra& algebra, const ResolutionOfIdentity& e0,
                                        std::span<const Scalar> samples, const std::optional<Scalar>& s0) {
  const ResolutionOfIdentity e = s0 ? e0.translated(*s0) : e0;
  if (!e.value(Scalar(0)).is_zero()) throw PreconditionError("resolution does not vanish at 0");
  std::vector<OrderProjection> prefix;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && !(samples[i - 1] < samples[i])) throw PreconditionError("sample sequence must be strictly increasing");
    prefix.push_back(e.value(samples[i]));
  }
  if (auto check = validate_forward(algebra, prefix); !check) {
    throw PreconditionError("sampled levels are not a forward filtration at index " + std::to_string(check.index));
  }
  return {algebra, std::move(prefix)};
}

ForwardFiltration discretize_resolution(const ResolutionOfIdentity& e, std::span<const Scalar> samples,
                                        const std::optional<Scalar>& s0) {
  std::vector<OrderProjection> values;
  for (const auto& [t, p] : e.breakpoints()) values.push_back(p);
  return discretize_resolution(generated_subalgebra(e.dim(), values), e, samples, s0);
}

ForwardFiltration from_disjoint_sum(std::span<const Vector> vectors) {
  if (vectors.empty()) throw PreconditionError("a disjoint sum needs at least one summand");
  const std::size_t dim = vectors.front().dim();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dim() != dim) throw DimensionMismatch("summands of different dimensions");
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      if (!disjoint(vectors[i], vectors[j])) {
        throw PreconditionError("summands " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                " are not disjoint");
      }
    }
  }
  std::vector<std::uint64_t> blocks;
  std::uint64_t covered = 0;
  for (const auto& v : vectors) {
    blocks.push_back(support_projection(v).mask());
    covered |= blocks.back();
  }
  blocks.back() |= OrderProjection::full_mask(dim) & ~covered;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i] == 0) {
      throw PreconditionError("summand " + std::to_string(i + 1) + " gives an empty partition block");
    }
  }
  BooleanSubalgebra algebra(dim, blocks);
  std::vector<OrderProjection> prefix;
  std::uint64_t acc = 0;
  for (std::uint64_t b : blocks) {
    acc |= b;
    prefix.emplace_back(dim, acc);
  }
  return {std::move(algebra), std::move(prefix)};
}

ForwardFiltration act_sectional(const SectionalMap& s, const ForwardFiltration& xi) {
  if (!(s.algebra() == xi.algebra())) throw PreconditionError("sectional map and filtration use different algebras");
  if (!is_sectionally_open(s)) throw PreconditionError("transformation is not sectionally open");
  if (!fixes_zero(s)) throw PreconditionError("transformation does not fix 0");
  if (!s(OrderProjection::one(xi.dim())).is_one()) throw InternalError("sectionally open map moved 1");
  std::vector<OrderProjection> prefix;
  for (const auto& p : xi.prefix()) prefix.push_back(s(p));
  if (auto check = validate_forward(xi.algebra(), prefix); !check) {
    throw InternalError("image of a forward filtration is not monotone at index " + std::to_string(check.index));
  }
  return {xi.algebra(), std::move(prefix)};
}

AntichainCheck is_antichain_of_filtrations(std::span<const ForwardFiltration> set) {
  if (set.empty()) return {};
  std::size_t depth = 1;
  for (const auto& xi : set) {
    if (xi.dim() != set.front().dim()) throw DimensionMismatch("filtrations of different dimensions");
    depth = std::max(depth, xi.length());
  }
  for (std::size_t n = 1; n <= depth; ++n) {
    std::vector<OrderProjection> levels;
    for (const auto& xi : set) levels.push_back(xi.level(n));
    if (!is_antichain(levels)) return {false, n};
  }
  return {};
}

}  // namespace bvolterra

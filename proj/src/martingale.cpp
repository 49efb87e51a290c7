#include "bvolterra/martingale.hpp"

#include <algorithm>

#include "bvolterra/errors.hpp"

namespace bvolterra {

namespace {

template <typename Level>
MartingaleCheck validate_law(std::size_t dim, std::size_t expected, std::span<const Vector> prefix, Level level) {
  if (prefix.size() != expected) {
    return {false, 0, 0, "prefix length " + std::to_string(prefix.size()) + " differs from the filtration length " +
                             std::to_string(expected)};
  }
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i].dim() != dim) return {false, i + 1, i + 1, "entry has the wrong dimension"};
  }
  const std::size_t k = prefix.size();
  for (std::size_t n = 1; n <= k; ++n) {
    for (std::size_t m = k; m >= n; --m) {
      if (!(level(n, prefix[m - 1]) == prefix[n - 1])) return {false, n, m, "martingale law fails"};
    }
  }
  return {};
}

void require_same_filtration(const Martingale& a, const Martingale& b) {
  if (!(a.filtration() == b.filtration())) throw PreconditionError("martingales over different filtrations");
}

}  // namespace

MartingaleCheck validate_martingale(const ForwardFiltration& xi, std::span<const Vector> prefix) {
  return validate_law(xi.dim(), xi.length(), prefix,
                      [&](std::size_t n, const Vector& v) { return xi.level(n).apply(v); });
}

MartingaleCheck validate_backward_m1(const BackwardFiltration& eta, std::span<const Vector> prefix) {
  return validate_law(eta.dim(), eta.length(), prefix,
                      [&](std::size_t n, const Vector& v) { return v - eta.level(n).apply(v); });
}

Martingale::Martingale(ForwardFiltration xi, std::vector<Vector> prefix) : xi_(std::move(xi)), prefix_(std::move(prefix)) {
  if (auto check = validate_martingale(xi_, prefix_); !check) {
    throw PreconditionError("invalid martingale at (" + std::to_string(check.n) + "," + std::to_string(check.m) +
                            "): " + check.reason);
  }
}

Martingale Martingale::zero(const ForwardFiltration& xi) {
  return {xi, std::vector<Vector>(xi.length(), Vector(xi.dim()))};
}

Vector Martingale::value(std::size_t n) const {
  if (n == 0) throw PreconditionError("martingale indices start at 1");
  if (prefix_.empty()) return Vector(dim());
  return prefix_[std::min(n, prefix_.size()) - 1];
}

bool Martingale::is_zero() const {
  return std::all_of(prefix_.begin(), prefix_.end(), [](const Vector& v) { return v.is_zero(); });
}

bool Martingale::is_nonnegative() const {
  return std::all_of(prefix_.begin(), prefix_.end(), [](const Vector& v) { return v.is_nonnegative(); });
}

Martingale& Martingale::operator+=(const Martingale& other) {
  require_same_filtration(*this, other);
  for (std::size_t i = 0; i < prefix_.size(); ++i) prefix_[i] += other.prefix_[i];
  return *this;
}

Martingale& Martingale::operator-=(const Martingale& other) {
  require_same_filtration(*this, other);
  for (std::size_t i = 0; i < prefix_.size(); ++i) prefix_[i] -= other.prefix_[i];
  return *this;
}

Martingale& Martingale::operator*=(const Scalar& factor) {
  for (auto& v : prefix_) v *= factor;
  return *this;
}

Martingale operator+(Martingale a, const Martingale& b) { return a += b; }
Martingale operator-(Martingale a, const Martingale& b) { return a -= b; }
Martingale operator*(const Scalar& factor, Martingale x) { return x *= factor; }

std::ostream& operator<<(std::ostream& os, const Martingale& x) {
  os << '[';
  for (std::size_t i = 0; i < x.length(); ++i) {
    if (i) os << ',';
    os << x.prefix()[i];
  }
  return os << ']';
}

Vector tail_value(const Martingale& x) { return x.length() ? x.prefix().back() : Vector(x.dim()); }

Martingale from_tail(const ForwardFiltration& xi, const Vector& v) {
  if (v.dim() != xi.dim()) throw DimensionMismatch("from_tail: dimensions differ");
  if (!(xi.stabilized().apply(v) == v)) throw PreconditionError("tail value lies outside the stabilized band");
  return iota(xi, v);
}

Martingale iota(const ForwardFiltration& xi, const Vector& v) {
  if (v.dim() != xi.dim()) throw DimensionMismatch("iota: dimensions differ");
  std::vector<Vector> prefix;
  prefix.reserve(xi.length());
  for (std::size_t n = 1; n <= xi.length(); ++n) prefix.push_back(xi.level(n).apply(v));
  return {xi, std::move(prefix)};
}

Martingale shift_s(const Martingale& x, std::size_t k) {
  if (k == 0 || x.length() <= 1) return Martingale(shift_L(x.filtration(), k), {x.prefix().begin(), x.prefix().end()});
  const std::size_t drop = std::min(k, x.length() - 1);
  return {shift_L(x.filtration(), k),
          std::vector<Vector>(x.prefix().begin() + static_cast<std::ptrdiff_t>(drop), x.prefix().end())};
}

std::vector<Martingale> martingale_basis(const ForwardFiltration& xi) {
  std::vector<Martingale> out;
  const OrderProjection top = xi.stabilized();
  for (std::size_t j = 0; j < xi.dim(); ++j) {
    if (top.contains(j)) out.push_back(from_tail(xi, Vector::unit(xi.dim(), j)));
  }
  return out;
}

MartingaleMap::MartingaleMap(ForwardFiltration source, ForwardFiltration target, Fn fn)
    : source_(std::move(source)), target_(std::move(target)), fn_(std::move(fn)) {
  if (source_.dim() != target_.dim()) throw DimensionMismatch("martingale map between different dimensions");
}

MartingaleMap MartingaleMap::identity(const ForwardFiltration& xi) {
  return {xi, xi, [](const Martingale& x) { return x; }};
}

MartingaleMap MartingaleMap::shift(const ForwardFiltration& xi) {
  return {xi, shift_L(xi), [](const Martingale& x) { return shift_s(x); }};
}

Martingale MartingaleMap::operator()(const Martingale& x) const {
  if (!(x.filtration() == source_)) throw PreconditionError("martingale is not over the source filtration");
  Martingale y = fn_(x);
  if (!(y.filtration() == target_)) throw InternalError("map produced a martingale over the wrong filtration");
  return y;
}

MartingaleMap compose(const MartingaleMap& after, const MartingaleMap& before) {
  if (!(before.target() == after.source())) throw PreconditionError("maps are not composable");
  return {before.source(), after.target(), [after, before](const Martingale& x) { return after(before(x)); }};
}

CoordwiseOperator::CoordwiseOperator(ForwardFiltration source, ForwardFiltration target, std::vector<Matrix> stages)
    : source_(std::move(source)), target_(std::move(target)), stages_(std::move(stages)) {
  if (stages_.empty()) throw PreconditionError("a coordinatewise operator needs at least one stage");
  if (source_.dim() != target_.dim()) throw DimensionMismatch("source and target dimensions differ");
  for (const auto& s : stages_) {
    if (s.rows() != source_.dim() || s.cols() != source_.dim()) throw DimensionMismatch("stage has the wrong shape");
  }
}

const Matrix& CoordwiseOperator::stage(std::size_t n) const {
  if (n == 0) throw PreconditionError("stages are indexed from 1");
  return stages_[std::min(n, stages_.size()) - 1];
}

std::size_t CoordwiseOperator::horizon() const {
  return std::max({source_.length(), target_.length(), stages_.size(), std::size_t{1}});
}

std::vector<Vector> CoordwiseOperator::apply_raw(const Martingale& x) const {
  if (!(x.filtration() == source_)) throw PreconditionError("martingale is not over the source filtration");
  std::vector<Vector> out;
  for (std::size_t n = 1; n <= horizon(); ++n) out.push_back(stage(n).apply(x.value(n)));
  return out;
}

Martingale CoordwiseOperator::apply(const Martingale& x) const {
  std::vector<Vector> raw = apply_raw(x);
  const std::size_t h = raw.size();
  for (std::size_t n = 1; n <= h; ++n) {
    const OrderProjection level = target_.level(n);
    for (std::size_t m = h; m >= n; --m) {
      if (!(level.apply(raw[m - 1]) == raw[n - 1])) {
        throw PreconditionError("image is not a martingale over the target at (" + std::to_string(n) + "," +
                                std::to_string(m) + ")");
      }
    }
  }
  raw.resize(target_.length());
  return {target_, std::move(raw)};
}

bool CoordwiseOperator::maps_into_target() const {
  for (const auto& b : martingale_basis(source_)) {
    try {
      apply(b);
    } catch (const PreconditionError&) {
      return false;
    }
  }
  return true;
}

MartingaleMap CoordwiseOperator::as_map() const {
  return {source_, target_, [op = *this](const Martingale& x) { return op.apply(x); }};
}

CoordwiseOperator lift_T_hat(const PositiveOperator& t, const ForwardFiltration& xi) {
  if (t.dim() != xi.dim()) throw DimensionMismatch("lift_T_hat: dimensions differ");
  if (auto v = is_regular_volterra(t, xi); !v) {
    throw PreconditionError("T is not regular Volterra for the filtration");
  }
  std::vector<Matrix> stages;
  for (std::size_t n = 1; n <= std::max<std::size_t>(xi.length(), 1); ++n) stages.push_back(xi.level(n).left(t.matrix()));
  CoordwiseOperator op(xi, xi, std::move(stages));
  return op;
}

Martingale apply_power(const CoordwiseOperator& op, const Martingale& x, unsigned l) {
  if (!(op.source() == op.target())) throw PreconditionError("powers need an endomorphism");
  Martingale y = x;
  for (unsigned i = 0; i < l; ++i) y = op.apply(y);
  return y;
}

NormValue regular_norm(const Martingale& x, NormTag tag) {
  if (tag.p == NormKind::two) {
    double best = 0;
    for (const auto& v : x.prefix()) best = std::max(best, std::get<double>(norm(v, tag)));
    return best;
  }
  Scalar best = 0;
  for (const auto& v : x.prefix()) best = std::max(best, exact_norm(v, tag));
  return best;
}

const char* to_string(SquareKind kind) {
  switch (kind) {
    case SquareKind::shift_ladder:
      return "shift-ladder";
    case SquareKind::iota_square:
      return "iota-square";
    case SquareKind::shift_triangle:
      return "shift-triangle";
  }
  return "?";
}

MartTuple::MartTuple(ForwardFiltration base, std::vector<Martingale> entries)
    : base_(std::move(base)), entries_(std::move(entries)) {
  if (entries_.empty()) throw PreconditionError("a tuple needs at least y_0");
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (!(entries_[k].filtration() == shift_L(base_, k))) {
      throw PreconditionError("tuple entry " + std::to_string(k) + " is not over L^k of the base filtration");
    }
  }
}

MartTuple MartTuple::diagonal(const Martingale& x, std::size_t kmax) {
  std::vector<Martingale> entries;
  for (std::size_t k = 0; k <= kmax; ++k) entries.push_back(shift_s(x, k));
  return {x.filtration(), std::move(entries)};
}

MartTuple bang_operator(const PositiveOperator& t, const ForwardFiltration& xi, unsigned l, const MartTuple& tuple) {
  if (!(tuple.base() == xi)) throw PreconditionError("tuple is not over the given filtration");
  const Martingale z = apply_power(lift_T_hat(t, xi), tuple.entries()[0], l);
  return MartTuple::diagonal(z, tuple.kmax());
}

}  // namespace bvolterra

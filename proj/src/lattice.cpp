#include "bvolterra/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "bvolterra/errors.hpp"

namespace bvolterra {

Vector Vector::unit(std::size_t dim, std::size_t i) {
  Vector v(dim);
  v[i] = 1;
  return v;
}

Vector Vector::constant(std::size_t dim, const Scalar& value) {
  return Vector(std::vector<Scalar>(dim, value));
}

bool Vector::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& s) { return sgn(s) == 0; });
}

bool Vector::is_nonnegative() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& s) { return sgn(s) >= 0; });
}

void require_same_dim(const Vector& x, const Vector& y) {
  if (x.dim() != y.dim()) {
    throw DimensionMismatch("vector dimensions differ: " + std::to_string(x.dim()) + " vs " +
                            std::to_string(y.dim()));
  }
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < dim(); ++i) entries_[i] += other[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < dim(); ++i) entries_[i] -= other[i];
  return *this;
}

Vector& Vector::operator*=(const Scalar& factor) {
  for (auto& e : entries_) e *= factor;
  return *this;
}

Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
Vector operator-(Vector v) { return v *= Scalar(-1); }
Vector operator*(const Scalar& factor, Vector v) { return v *= factor; }

std::ostream& operator<<(std::ostream& os, const Vector& v) {
  os << '(';
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) os << ',';
    os << to_string(v[i]);
  }
  return os << ')';
}

namespace {

template <typename F>
Vector zip(const Vector& x, const Vector& y, F f) {
  require_same_dim(x, y);
  Vector out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = f(x[i], y[i]);
  return out;
}

template <typename F>
Vector map(const Vector& x, F f) {
  Vector out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out[i] = f(x[i]);
  return out;
}

}  // namespace

Vector sup(const Vector& x, const Vector& y) {
  return zip(x, y, [](const Scalar& a, const Scalar& b) { return a < b ? b : a; });
}

Vector inf(const Vector& x, const Vector& y) {
  return zip(x, y, [](const Scalar& a, const Scalar& b) { return a < b ? a : b; });
}

Vector abs(const Vector& x) {
  return map(x, [](const Scalar& a) -> Scalar { return ::abs(a); });
}

Vector pos_part(const Vector& x) {
  return map(x, [](const Scalar& a) -> Scalar { return sgn(a) > 0 ? a : Scalar(0); });
}

Vector neg_part(const Vector& x) {
  return map(x, [](const Scalar& a) -> Scalar { return sgn(a) < 0 ? Scalar(-a) : Scalar(0); });
}

Vector lattice_eval(LatticeOp op, const Vector& x, const Vector* y) {
  switch (op) {
    case LatticeOp::sup:
    case LatticeOp::inf:
      if (y == nullptr) throw PreconditionError("binary lattice operation needs two operands");
      return op == LatticeOp::sup ? sup(x, *y) : inf(x, *y);
    case LatticeOp::abs:
      return abs(x);
    case LatticeOp::pos_part:
      return pos_part(x);
    case LatticeOp::neg_part:
      return neg_part(x);
  }
  throw InternalError("unknown lattice operation");
}

bool leq(const Vector& x, const Vector& y) {
  require_same_dim(x, y);
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (x[i] > y[i]) return false;
  }
  return true;
}

bool disjoint(const Vector& x, const Vector& y) {
  require_same_dim(x, y);
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (sgn(x[i]) != 0 && sgn(y[i]) != 0) return false;
  }
  return true;
}

Scalar exact_norm(const Vector& x, NormTag tag) {
  Scalar acc = 0;
  switch (tag.p) {
    case NormKind::one:
      for (const auto& e : x.entries()) acc += ::abs(e);
      return acc;
    case NormKind::inf:
      for (const auto& e : x.entries()) {
        Scalar a = ::abs(e);
        if (a > acc) acc = a;
      }
      return acc;
    case NormKind::two:
      break;
  }
  throw Unsupported("the ell_2 norm is not exact over the rationals");
}

NormValue norm(const Vector& x, NormTag tag) {
  if (tag.p != NormKind::two) return exact_norm(x, tag);
  double acc = 0.0;
  for (const auto& e : x.entries()) {
    const double d = e.get_d();
    acc += d * d;
  }
  return std::sqrt(acc);
}

double to_double(const NormValue& value) {
  if (const auto* s = std::get_if<Scalar>(&value)) return s->get_d();
  return std::get<double>(value);
}

bool norm_equal(const NormValue& a, const NormValue& b) {
  if (a.index() == 0 && b.index() == 0) return std::get<Scalar>(a) == std::get<Scalar>(b);
  const double x = to_double(a);
  const double y = to_double(b);
  return std::abs(x - y) <= kNorm2Tolerance * std::max({1.0, std::abs(x), std::abs(y)});
}

bool norm_leq(const NormValue& a, const NormValue& b) {
  if (a.index() == 0 && b.index() == 0) return std::get<Scalar>(a) <= std::get<Scalar>(b);
  const double x = to_double(a);
  const double y = to_double(b);
  return x <= y + kNorm2Tolerance * std::max({1.0, std::abs(x), std::abs(y)});
}

const char* to_string(NormKind p) {
  switch (p) {
    case NormKind::one:
      return "1";
    case NormKind::two:
      return "2";
    case NormKind::inf:
      return "inf";
  }
  return "?";
}

std::optional<NormKind> parse_norm_kind(std::string_view text) {
  if (text == "1") return NormKind::one;
  if (text == "2") return NormKind::two;
  if (text == "inf" || text == "infinity") return NormKind::inf;
  return std::nullopt;
}

}  // namespace bvolterra

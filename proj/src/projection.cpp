#include "bvolterra/projection.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "bvolterra/errors.hpp"

namespace bvolterra {

std::uint64_t OrderProjection::full_mask(std::size_t dim) {
  return dim >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << dim) - 1);
}

OrderProjection::OrderProjection(std::size_t dim, std::uint64_t mask) : dim_(dim), mask_(mask) {
  if (dim == 0 || dim > kMaxDim) {
    throw Unsupported("projection dimension must be in 1.." + std::to_string(kMaxDim));
  }
  if ((mask & ~full_mask(dim)) != 0) throw DimensionMismatch("projection mask exceeds dimension");
}

OrderProjection OrderProjection::one(std::size_t dim) { return {dim, full_mask(dim)}; }

OrderProjection OrderProjection::from_coords(std::size_t dim, std::span<const std::size_t> coords) {
  std::uint64_t mask = 0;
  for (std::size_t c : coords) {
    if (c == 0 || c > dim) {
      throw DimensionMismatch("coordinate " + std::to_string(c) + " outside 1.." + std::to_string(dim));
    }
    mask |= std::uint64_t{1} << (c - 1);
  }
  return {dim, mask};
}

OrderProjection OrderProjection::from_coords(std::size_t dim, std::initializer_list<std::size_t> coords) {
  return from_coords(dim, std::span<const std::size_t>(coords.begin(), coords.size()));
}

std::size_t OrderProjection::count() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<std::size_t> OrderProjection::coords() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (contains(i)) out.push_back(i + 1);
  }
  return out;
}

Vector OrderProjection::apply(const Vector& x) const {
  if (x.dim() != dim_) throw DimensionMismatch("projection applied to vector of other dimension");
  Vector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (contains(i)) out[i] = x[i];
  }
  return out;
}

Matrix OrderProjection::matrix() const {
  Matrix m(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (contains(i)) m(i, i) = 1;
  }
  return m;
}

Matrix OrderProjection::left(const Matrix& a) const {
  if (a.rows() != dim_) throw DimensionMismatch("projection times matrix shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (!contains(i)) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  }
  return out;
}

Matrix OrderProjection::right(const Matrix& a) const {
  if (a.cols() != dim_) throw DimensionMismatch("matrix times projection shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (contains(j)) out(i, j) = a(i, j);
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const OrderProjection& p) {
  os << '{';
  bool first = true;
  for (std::size_t c : p.coords()) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  return os << '}';
}

namespace {

void require_same_dim(const OrderProjection& a, const OrderProjection& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("projections of different dimensions");
}

}  // namespace

OrderProjection meet(const OrderProjection& a, const OrderProjection& b) {
  require_same_dim(a, b);
  return {a.dim(), a.mask() & b.mask()};
}

OrderProjection join(const OrderProjection& a, const OrderProjection& b) {
  require_same_dim(a, b);
  return {a.dim(), a.mask() | b.mask()};
}

OrderProjection complement(const OrderProjection& a) {
  return {a.dim(), ~a.mask() & OrderProjection::full_mask(a.dim())};
}

bool leq(const OrderProjection& a, const OrderProjection& b) {
  require_same_dim(a, b);
  return (a.mask() & ~b.mask()) == 0;
}

std::variant<OrderProjection, bool> boolean_ops(BooleanOp op, const OrderProjection& a,
                                                const OrderProjection* b) {
  if (op == BooleanOp::complement) return complement(a);
  if (b == nullptr) throw PreconditionError("binary Boolean operation needs two operands");
  switch (op) {
    case BooleanOp::meet:
      return meet(a, *b);
    case BooleanOp::join:
      return join(a, *b);
    case BooleanOp::leq:
      return leq(a, *b);
    case BooleanOp::complement:
      break;
  }
  throw InternalError("unknown Boolean operation");
}

BooleanSubalgebra::BooleanSubalgebra(std::size_t dim, std::vector<std::uint64_t> atoms)
    : dim_(dim), atoms_(std::move(atoms)) {
  if (dim == 0 || dim > OrderProjection::kMaxDim) throw Unsupported("algebra dimension out of range");
  std::uint64_t seen = 0;
  for (std::uint64_t a : atoms_) {
    if (a == 0) throw PreconditionError("empty atom in Boolean subalgebra");
    if ((a & seen) != 0) throw PreconditionError("atoms of a Boolean subalgebra must be disjoint");
    if ((a & ~OrderProjection::full_mask(dim)) != 0) throw DimensionMismatch("atom exceeds dimension");
    seen |= a;
  }
  if (seen != OrderProjection::full_mask(dim)) throw PreconditionError("atoms do not cover every coordinate");
  std::sort(atoms_.begin(), atoms_.end(),
            [](std::uint64_t x, std::uint64_t y) { return std::countr_zero(x) < std::countr_zero(y); });
}

BooleanSubalgebra BooleanSubalgebra::trivial(std::size_t dim) {
  return {dim, {OrderProjection::full_mask(dim)}};
}

BooleanSubalgebra BooleanSubalgebra::discrete(std::size_t dim) {
  std::vector<std::uint64_t> atoms;
  for (std::size_t i = 0; i < dim; ++i) atoms.push_back(std::uint64_t{1} << i);
  return {dim, std::move(atoms)};
}

BooleanSubalgebra BooleanSubalgebra::from_blocks(std::size_t dim,
                                                 const std::vector<std::vector<std::size_t>>& blocks) {
  std::vector<std::uint64_t> atoms;
  for (const auto& b : blocks) atoms.push_back(OrderProjection::from_coords(dim, b).mask());
  return {dim, std::move(atoms)};
}

std::uint64_t BooleanSubalgebra::size() const {
  if (atoms_.size() > 62) throw Unsupported("algebra too large to enumerate");
  return std::uint64_t{1} << atoms_.size();
}

OrderProjection BooleanSubalgebra::element(std::uint64_t index) const {
  if (index >= size()) throw PreconditionError("algebra element index out of range");
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if ((index >> k) & 1u) mask |= atoms_[k];
  }
  return {dim_, mask};
}

std::optional<std::uint64_t> BooleanSubalgebra::index_of(const OrderProjection& p) const {
  if (p.dim() != dim_) return std::nullopt;
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    const std::uint64_t overlap = p.mask() & atoms_[k];
    if (overlap == atoms_[k]) {
      index |= std::uint64_t{1} << k;
    } else if (overlap != 0) {
      return std::nullopt;
    }
  }
  return index;
}

std::vector<OrderProjection> BooleanSubalgebra::elements() const {
  if (atoms_.size() > 20) throw Unsupported("refusing to list more than 2^20 algebra members");
  std::vector<OrderProjection> out;
  out.reserve(size());
  for (std::uint64_t k = 0; k < size(); ++k) out.push_back(element(k));
  return out;
}

std::size_t BooleanSubalgebra::atom_of(std::size_t i) const {
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if ((atoms_[k] >> i) & 1u) return k;
  }
  throw DimensionMismatch("coordinate outside algebra");
}

std::ostream& operator<<(std::ostream& os, const BooleanSubalgebra& b) {
  os << '[';
  for (std::size_t k = 0; k < b.atom_count(); ++k) {
    if (k) os << ',';
    os << b.atom(k);
  }
  return os << ']';
}

BooleanSubalgebra generated_subalgebra(std::size_t dim, std::span<const OrderProjection> generators) {
  std::map<std::vector<bool>, std::uint64_t> classes;
  for (const auto& g : generators) {
    if (g.dim() != dim) throw DimensionMismatch("generator of other dimension");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<bool> signature;
    signature.reserve(generators.size());
    for (const auto& g : generators) signature.push_back(g.contains(i));
    classes[signature] |= std::uint64_t{1} << i;
  }
  std::vector<std::uint64_t> atoms;
  for (const auto& [sig, mask] : classes) atoms.push_back(mask);
  return {dim, std::move(atoms)};
}

OrderProjection support_projection(const Vector& x) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (sgn(x[i]) != 0) mask |= std::uint64_t{1} << i;
  }
  return {x.dim(), mask};
}

bool is_antichain(std::span<const OrderProjection> set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      if (set[i] == set[j]) continue;
      if (!meet(set[i], set[j]).is_zero()) return false;
    }
  }
  return true;
}

std::vector<OrderProjection> section(const BooleanSubalgebra& algebra, const OrderProjection& p) {
  if (!algebra.contains(p)) throw PreconditionError("section of a projection outside the algebra");
  std::vector<OrderProjection> out;
  for (const auto& q : algebra.elements()) {
    if (leq(p, q)) out.push_back(q);
  }
  return out;
}

SectionalMap::SectionalMap(BooleanSubalgebra algebra, std::vector<OrderProjection> table)
    : algebra_(std::move(algebra)), table_(std::move(table)) {
  if (table_.size() != algebra_.size()) throw PreconditionError("sectional map table must cover the algebra");
  for (const auto& t : table_) {
    if (!algebra_.contains(t)) throw PreconditionError("sectional map value outside the algebra");
  }
}

SectionalMap SectionalMap::identity(const BooleanSubalgebra& algebra) {
  return {algebra, algebra.elements()};
}

SectionalMap SectionalMap::from_function(const BooleanSubalgebra& algebra,
                                         const std::function<OrderProjection(const OrderProjection&)>& f) {
  std::vector<OrderProjection> table;
  for (const auto& p : algebra.elements()) table.push_back(f(p));
  return {algebra, std::move(table)};
}

OrderProjection SectionalMap::operator()(const OrderProjection& p) const {
  const auto index = algebra_.index_of(p);
  if (!index) throw PreconditionError("sectional map evaluated outside its algebra");
  return table_[*index];
}

bool is_sectionally_open(const SectionalMap& s) {
  const auto& algebra = s.algebra();
  for (const auto& p : algebra.elements()) {
    std::set<OrderProjection> image;
    for (const auto& q : section(algebra, p)) image.insert(s(q));
    const auto target = section(algebra, s(p));
    if (image != std::set<OrderProjection>(target.begin(), target.end())) return false;
  }
  return true;
}

bool fixes_zero(const SectionalMap& s) { return s(OrderProjection::zero(s.algebra().dim())).is_zero(); }

bool is_inflationary(const SectionalMap& s) {
  for (const auto& p : s.algebra().elements()) {
    if (!leq(p, s(p))) return false;
  }
  return true;
}

}  // namespace bvolterra

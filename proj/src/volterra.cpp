#include "bvolterra/volterra.hpp"

#include <algorithm>
#include <sstream>

#include "bvolterra/errors.hpp"

namespace bvolterra {

PositiveOperator::PositiveOperator(Matrix m) : m_(std::move(m)) {
  if (!m_.is_square()) throw PreconditionError("operator matrix must be square");
  if (!m_.is_nonnegative()) throw PreconditionError("operator is not positive: negative entry");
}

std::ostream& operator<<(std::ostream& os, const PositiveOperator& t) { return os << t.matrix(); }

namespace {

void require_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DimensionMismatch(std::string(what) + ": dimensions differ");
}

std::optional<std::size_t> first_leak_column(const Matrix& t, std::uint64_t rows) {
  for (std::size_t j = 0; j < t.cols(); ++j) {
    if ((rows >> j) & 1u) continue;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (((rows >> i) & 1u) && !is_zero(t(i, j))) return j;
    }
  }
  return std::nullopt;
}

}  // namespace

VolterraVerdict is_b_volterra(const PositiveOperator& t, const BooleanSubalgebra& algebra) {
  require_dim(t.dim(), algebra.dim(), "is_b_volterra");
  const std::size_t n = t.dim();
  for (std::size_t a = 0; a < algebra.atom_count(); ++a) {
    const std::uint64_t block = algebra.atoms()[a];
    if (auto j = first_leak_column(t.matrix(), block)) {
      return {false, VolterraWitness{algebra.atom(a), Vector::unit(n, *j), Vector(n)}};
    }
  }
  return {};
}

Equivalences volterra_equivalences(const PositiveOperator& t, const BooleanSubalgebra& algebra) {
  require_dim(t.dim(), algebra.dim(), "volterra_equivalences");
  const std::size_t n = t.dim();
  const Matrix& m = t.matrix();
  Equivalences out{true, true, true, true};
  for (const auto& pi : algebra.elements()) {
    const OrderProjection pis = complement(pi);
    for (std::size_t j = 0; j < n && out.definitional; ++j) {
      if (pi.contains(j)) continue;
      if (!pi.apply(m.apply(Vector::unit(n, j))).is_zero()) out.definitional = false;
    }
    const Matrix pt = pi.left(m);
    if (!(pt == pi.right(pt))) out.left_absorbs = false;
    const Matrix tps = pis.right(m);
    if (!(tps == pis.left(tps))) out.right_complement = false;
    if (!pis.left(pi.right(m)).is_zero()) out.band_invariant = false;
  }
  return out;
}

VolterraVerdict is_regular_volterra(const PositiveOperator& t, const ForwardFiltration& xi) {
  require_dim(t.dim(), xi.dim(), "is_regular_volterra");
  const std::size_t n = t.dim();
  for (const auto& level : xi.prefix()) {
    if (auto j = first_leak_column(t.matrix(), level.mask())) {
      return {false, VolterraWitness{level, Vector::unit(n, *j), Vector(n)}};
    }
  }
  return {};
}

PositiveOperator make_derived_operator(DerivedKind kind, const OrderProjection& pi, const PositiveOperator& t) {
  require_dim(t.dim(), pi.dim(), "make_derived_operator");
  const std::size_t n = t.dim();
  const Matrix& m = t.matrix();
  const Matrix p = pi.matrix();
  const Matrix pt = pi.left(m);
  Matrix out;
  switch (kind) {
    case DerivedKind::pi_t:
      out = pt;
      break;
    case DerivedKind::affine:
      out = p + m - pt;
      break;
    case DerivedKind::reflect:
      if (!(Matrix::identity(n) - m).is_nonnegative()) {
        throw PreconditionError("reflect requires T <= I");
      }
      out = p - pt + complement(pi).left(m);
      break;
    case DerivedKind::residual:
      if (!(pt == p)) throw PreconditionError("residual requires pi T = pi");
      out = Matrix::identity(n) + p - m;
      if (!out.is_nonnegative()) throw PreconditionError("residual I + pi - T is not positive");
      break;
  }
  if (!out.is_nonnegative()) throw InternalError("derived operator has a negative entry");
  return PositiveOperator(std::move(out));
}

bool commutes_with(const OrderProjection& pi, const Matrix& s) {
  require_dim(s.rows(), pi.dim(), "commutes_with");
  return pi.left(s) == pi.right(s);
}

BandPattern volterra_band_pattern(const BooleanSubalgebra& algebra) {
  const std::size_t n = algebra.dim();
  std::vector<bool> mask(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) mask[i * n + j] = algebra.atom_of(i) == algebra.atom_of(j);
  }
  return {n, std::move(mask)};
}

bool band_contains(const BandPattern& pattern, const Matrix& a) {
  require_dim(a.rows(), pattern.dim(), "band_contains");
  require_dim(a.cols(), pattern.dim(), "band_contains");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!is_zero(a(i, j)) && !pattern.allows(i, j)) return false;
    }
  }
  return true;
}

OperatorNorm operator_norm(const PositiveOperator& t, NormTag tag) {
  if (tag.p == NormKind::two) throw Unsupported("operator norm for p = 2 is not computed");
  const Matrix& m = t.matrix();
  Scalar best = 0;
  const bool rows = tag.p == NormKind::inf;
  for (std::size_t a = 0; a < t.dim(); ++a) {
    Scalar sum = 0;
    for (std::size_t b = 0; b < t.dim(); ++b) sum += rows ? m(a, b) : m(b, a);
    best = std::max(best, sum);
  }
  return {best, best};
}

PropertyCheck check_meet_condition_prop(const PositiveOperator& t, const BooleanSubalgebra& algebra,
                                        const OrderProjection& pi, const OrderProjection& rho, const Vector& x,
                                        const Vector& y, const Vector& z, const Scalar& s, unsigned k) {
  const std::size_t n = t.dim();
  require_dim(algebra.dim(), n, "check_meet_condition_prop");
  require_dim(x.dim(), n, "check_meet_condition_prop");
  require_same_dim(x, y);
  require_same_dim(y, z);
  if (k == 0) throw PreconditionError("k must be positive");
  if (s < 0 || s > 1) throw PreconditionError("t must lie in [0,1]");
  if (!is_b_volterra(t, algebra)) throw PreconditionError("T is not Volterra for the algebra");
  if (!algebra.contains(pi) || !algebra.contains(rho)) throw PreconditionError("pi and rho must belong to the algebra");
  if (!x.is_nonnegative() || !leq(x, y) || !leq(y, z)) throw PreconditionError("need 0 <= x <= y <= z");
  if (!(inf(pi.apply(x), rho.apply(y)) == inf(pi.apply(y), rho.apply(z)))) {
    throw PreconditionError("hypothesis pi x ^ rho y = pi y ^ rho z fails");
  }
  const OrderProjection pr = meet(pi, rho);
  const Matrix tk = t.matrix().pow(k);
  const Vector mixed = s * pi.apply(x) + (Scalar(1) - s) * x;
  const Vector lhs = pr.apply(tk.apply(mixed));
  const Vector rhs = pr.apply(tk.apply(y));
  PropertyCheck out;
  out.holds = lhs == rhs;
  if (!out.holds) {
    std::ostringstream os;
    os << "lhs " << lhs << " rhs " << rhs << " mixed " << mixed << " k " << k;
    out.detail = os.str();
  }
  return out;
}

DisjointnessCheck check_disjointness_prop(const PositiveOperator& t, std::span<const Vector> generators,
                                          const OrderProjection& sigma, const OrderProjection& rho, const Vector& x,
                                          const Vector& w) {
  if (generators.size() < 3) throw PreconditionError("need at least the generators x1, x2, x3");
  const std::size_t n = t.dim();
  for (const auto& g : generators) require_dim(g.dim(), n, "check_disjointness_prop");
  require_dim(x.dim(), n, "check_disjointness_prop");
  require_dim(w.dim(), n, "check_disjointness_prop");
  const Vector& x1 = generators[0];
  const Vector& x2 = generators[1];
  const Vector& x3 = generators[2];
  if (!x3.is_nonnegative() || !leq(x3, x2) || !leq(x2, x1)) throw PreconditionError("need 0 <= x3 <= x2 <= x1");

  std::vector<OrderProjection> supports;
  for (const auto& g : generators) supports.push_back(support_projection(g));
  BooleanSubalgebra algebra = generated_subalgebra(n, supports);
  if (!algebra.contains(sigma) || !algebra.contains(rho)) {
    throw PreconditionError("sigma and rho must belong to the generated algebra");
  }
  if (!is_b_volterra(t, algebra)) throw PreconditionError("T is not Volterra for the generated algebra");
  const OrderProjection p1 = supports[0];
  const OrderProjection p2 = supports[1];
  const OrderProjection p3 = supports[2];
  const std::vector<OrderProjection> triple{p1, sigma, rho};
  if (!is_antichain(triple)) throw PreconditionError("{pi_x1, sigma, rho} is not an antichain");
  if (!(complement(p1).apply(w) == w)) throw PreconditionError("w must lie in the band of pi_x1*");

  const Vector sx = sigma.apply(x);
  const Vector tsx = t.apply(sx);
  Vector u = p1.apply(tsx) - p2.apply(tsx);
  const Vector arg = complement(rho).apply(sx) + w;
  const Vector targ = t.apply(arg);
  Vector v = p2.apply(targ) - p3.apply(targ);
  const bool holds = disjoint(u, v);
  return {holds, std::move(u), std::move(v), std::move(algebra)};
}

Restriction restrict_operator(const PositiveOperator& t, const ForwardFiltration& xi, std::size_t k) {
  require_dim(t.dim(), xi.dim(), "restrict_operator");
  if (!is_regular_volterra(t, xi)) throw PreconditionError("T is not regular Volterra for the filtration");
  const OrderProjection band = xi.level(k);
  if (band.is_zero()) throw PreconditionError("restriction to the zero band");
  if (band.is_one()) {
    std::vector<std::size_t> all(t.dim());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return {t, xi, std::move(all)};
  }
  std::vector<std::size_t> coords;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    if (band.contains(i)) coords.push_back(i);
  }
  const std::size_t m = coords.size();
  auto renumber = [&](std::uint64_t mask) {
    std::uint64_t out = 0;
    for (std::size_t a = 0; a < m; ++a) {
      if ((mask >> coords[a]) & 1u) out |= std::uint64_t{1} << a;
    }
    return out;
  };
  Matrix c(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) c(a, b) = t(coords[a], coords[b]);
  }
  std::vector<std::uint64_t> atoms;
  for (std::uint64_t atom : xi.algebra().atoms()) {
    if (atom & band.mask()) atoms.push_back(renumber(atom));
  }
  std::vector<OrderProjection> prefix;
  const std::size_t depth = std::min(k, xi.length());
  for (std::size_t i = 1; i <= depth; ++i) prefix.emplace_back(m, renumber(xi.level(i).mask()));
  Restriction out{PositiveOperator(std::move(c)), ForwardFiltration(BooleanSubalgebra(m, std::move(atoms)), std::move(prefix)),
                  std::move(coords)};
  if (!is_regular_volterra(out.op, out.filtration)) throw InternalError("restriction is not regular Volterra");
  return out;
}

std::size_t system_index(const Scalar& t) {
  if (t <= 0 || t >= 1) throw PreconditionError("system index needs 0 < t < 1");
  const Scalar q = (Scalar(1) - t) / t;
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  if (!f.fits_ulong_p()) throw Unsupported("system index too large");
  return f.get_ui();
}

bool system_relation(const ForwardFiltration& xi, const Scalar& t, const Vector& x, const Vector& y) {
  require_same_dim(x, y);
  require_dim(x.dim(), xi.dim(), "system_relation");
  if (t < 0 || t > 1) throw PreconditionError("t must lie in [0,1]");
  if (t == 0) return true;
  if (t == 1) return x == y;
  const Vector d = x - y;
  return xi.level(system_index(t)).apply(d) == d;
}

ChainSubspace::ChainSubspace(ForwardFiltration xi, std::vector<std::size_t> chain)
    : xi_(std::move(xi)), chain_(std::move(chain)) {
  if (chain_.empty()) throw PreconditionError("a chain needs at least one index");
  if (!std::is_sorted(chain_.begin(), chain_.end())) throw PreconditionError("chain indices must be nondecreasing");
}

void ChainSubspace::require_arity(std::span<const Vector> tuple) const {
  if (tuple.size() != chain_.size()) throw DimensionMismatch("tuple length differs from the chain length");
  for (const auto& v : tuple) require_dim(v.dim(), xi_.dim(), "chain subspace");
}

bool ChainSubspace::member(std::span<const Vector> tuple) const {
  require_arity(tuple);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const OrderProjection p = xi_.level(chain_[i]);
    const Vector pi = p.apply(tuple[i]);
    for (std::size_t j = i + 1; j < tuple.size(); ++j) {
      if (!(p.apply(tuple[j]) == pi)) return false;
    }
  }
  return true;
}

bool ChainSubspace::member_literal(std::span<const Vector> tuple) const {
  require_arity(tuple);
  const Vector first = xi_.level(chain_[0]).apply(tuple[0]);
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    if (!(xi_.level(chain_[i]).apply(tuple[i]) == first)) return false;
  }
  return true;
}

std::vector<Vector> ChainSubspace::apply(const PositiveOperator& t, std::span<const Vector> tuple) const {
  if (!is_regular_volterra(t, xi_)) throw PreconditionError("T is not regular Volterra for the filtration");
  if (!member(tuple)) throw PreconditionError("tuple is not in the chain subspace");
  std::vector<Vector> out;
  for (const auto& v : tuple) out.push_back(t.apply(v));
  if (!member(out)) throw InternalError("chain subspace not closed under T");
  return out;
}

std::vector<Vector> ChainSubspace::project(std::span<const Vector> tuple) const {
  if (chain_.size() < 2) throw PreconditionError("projection needs a chain of length at least 2");
  require_arity(tuple);
  return {tuple.begin(), tuple.end() - 1};
}

ChainSubspace ChainSubspace::shortened() const {
  if (chain_.size() < 2) throw PreconditionError("cannot shorten a chain of length 1");
  return {xi_, std::vector<std::size_t>(chain_.begin(), chain_.end() - 1)};
}

Vector tf_prime(const PositiveOperator& t, std::span<const ChainElement> family) {
  Vector out(t.dim());
  for (const auto& e : family) {
    out += e.space.apply(t, e.tuple).front();
  }
  return out;
}

bool is_conditional_expectation(const PositiveOperator& t) {
  const Matrix& m = t.matrix();
  if (!(m * m == m)) return false;
  const Vector image = m.apply(Vector::constant(t.dim(), Scalar(1)));
  return std::all_of(image.entries().begin(), image.entries().end(), [](const Scalar& v) { return sgn(v) > 0; });
}

ForwardFiltration ce_filtration(const PositiveOperator& t, std::span<const Vector> range_chain) {
  std::vector<OrderProjection> prefix;
  for (std::size_t i = 0; i < range_chain.size(); ++i) {
    const Vector& v = range_chain[i];
    require_dim(v.dim(), t.dim(), "ce_filtration");
    if (!(t.apply(v) == v)) throw PreconditionError("chain vector " + std::to_string(i + 1) + " is not in the range of T");
    prefix.push_back(support_projection(v));
    if (i > 0 && !leq(prefix[i - 1], prefix[i])) throw PreconditionError("chain supports must be nondecreasing");
  }
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const OrderProjection& p = prefix[i];
    const OrderProjection ps = complement(p);
    if (!p.left(ps.right(t.matrix())).is_zero() || !ps.left(p.right(t.matrix())).is_zero()) {
      throw PreconditionError("band of chain level " + std::to_string(i + 1) + " is not T-invariant");
    }
  }
  ForwardFiltration xi(generated_subalgebra(t.dim(), prefix), prefix);
  if (!is_regular_volterra(t, xi)) throw InternalError("conditional expectation is not regular Volterra");
  return xi;
}

}  // namespace bvolterra

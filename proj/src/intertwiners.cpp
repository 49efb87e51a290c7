#include "bvolterra/intertwiners.hpp"

#include <algorithm>

#include "bvolterra/errors.hpp"

namespace bvolterra {

IntertwinerCert in_LT(const MartingaleMap& s, const PositiveOperator& t) {
  const auto lift1 = lift_T_hat(t, s.source());
  const auto lift2 = lift_T_hat(t, s.target());
  IntertwinerCert cert;
  const auto basis = martingale_basis(s.source());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    Martingale left = Martingale::zero(s.target());
    Martingale right = Martingale::zero(s.target());
    try {
      left = s(lift1.apply(basis[b]));
      right = lift2.apply(s(basis[b]));
    } catch (const PreconditionError& e) {
      throw PreconditionError("map is not martingale-to-martingale on basis element " + std::to_string(b) + ": " +
                              e.what());
    }
    Martingale defect = left - right;
    if (!defect.is_zero()) {
      cert.holds = false;
      cert.residual.emplace_back(b, std::move(defect));
    }
  }
  return cert;
}

Intertwiner certify(MartingaleMap map, const PositiveOperator& t) {
  IntertwinerCert cert = in_LT(map, t);
  return {std::move(map), t, std::move(cert)};
}

AntichainProduct antichain_conditions(std::span<const PositiveOperator> stages, const PositiveOperator& t,
                                      const ForwardFiltration& xi1, const ForwardFiltration& xi2) {
  if (stages.empty()) throw PreconditionError("need at least one stage operator");
  if (!(xi1.algebra() == xi2.algebra())) throw PreconditionError("filtrations use different algebras");
  const std::vector<ForwardFiltration> pair{xi1, xi2};
  if (auto a = is_antichain_of_filtrations(pair); !a) {
    throw PreconditionError("filtrations are not an antichain at level " + std::to_string(a.level));
  }
  if (!is_b_volterra(t, xi1.algebra())) throw PreconditionError("T is not Volterra for the algebra");
  for (const auto& s : stages) {
    if (s.dim() != t.dim()) throw DimensionMismatch("stage operator of other dimension");
  }
  const Matrix& m = t.matrix();
  const std::size_t depth = std::max({xi1.length(), xi2.length(), stages.size(), std::size_t{1}});
  AntichainProduct out{true, true, std::nullopt, false};
  std::vector<Matrix> product;
  for (std::size_t k = 1; k <= depth; ++k) {
    const Matrix& s = stages[std::min(k, stages.size()) - 1].matrix();
    const OrderProjection a = xi1.level(k);
    const OrderProjection b = xi2.level(k);
    const Matrix ts = m * s;
    if (!(s * m == b.left(ts) + s * complement(a).left(m))) out.cond_i = false;
    if (!(ts == complement(b).left(ts) + s * a.left(m))) out.cond_ii = false;
    product.push_back(s);
  }
  if (!out.cond_i || !out.cond_ii) return out;
  CoordwiseOperator op(xi1, xi2, std::move(product));
  out.mapping_ok = op.maps_into_target();
  if (!out.mapping_ok) return out;
  Intertwiner cert = certify(op.as_map(), t);
  if (!cert.cert) throw InternalError("antichain product is not an intertwiner");
  out.product = std::move(cert);
  return out;
}

Intertwiner compose_intertwiners(const Intertwiner& s2, const Intertwiner& s1) {
  if (!s1.cert || !s2.cert) throw PreconditionError("composition needs certified intertwiners");
  if (!(s1.t == s2.t)) throw PreconditionError("intertwiners for different operators");
  return certify(compose(s2.map, s1.map), s1.t);
}

Intertwiner hat_L(const Intertwiner& s) {
  if (!s.cert) throw PreconditionError("hat_L needs a certified intertwiner");
  const ForwardFiltration xi1 = s.map.source();
  const ForwardFiltration source = shift_L(xi1);
  const ForwardFiltration target = shift_L(s.map.target());
  const MartingaleMap inner = s.map;
  MartingaleMap lifted(source, target, [xi1, inner](const Martingale& z) {
    std::vector<Vector> prefix;
    for (std::size_t n = 1; n <= xi1.length(); ++n) {
      prefix.push_back(n == 1 ? xi1.level(1).apply(z.value(1)) : z.value(n - 1));
    }
    return shift_s(inner(Martingale(xi1, std::move(prefix))));
  });
  Intertwiner out = certify(std::move(lifted), s.t);
  if (!hat_L_relation(s, out)) throw InternalError("L-hat(S) o s differs from s o S");
  return out;
}

bool hat_L_relation(const Intertwiner& s, const Intertwiner& lifted) {
  for (const auto& b : martingale_basis(s.map.source())) {
    if (!(lifted.map(shift_s(b)) == shift_s(s.map(b)))) return false;
  }
  return true;
}

}  // namespace bvolterra

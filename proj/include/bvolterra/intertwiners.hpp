#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bvolterra/martingale.hpp"

namespace bvolterra {

struct IntertwinerCert {
  bool holds = true;
  /// (basis index, S T-hat b - T-hat S b) for every nonzero defect.
  std::vector<std::pair<std::size_t, Martingale>> residual;
  explicit operator bool() const { return holds; }
};

/// S o T-hat(xi1) = T-hat(xi2) o S on the basis of M(xi1).
IntertwinerCert in_LT(const MartingaleMap& s, const PositiveOperator& t);

struct Intertwiner {
  MartingaleMap map;
  PositiveOperator t;
  IntertwinerCert cert;
};

Intertwiner certify(MartingaleMap map, const PositiveOperator& t);

struct AntichainProduct {
  bool cond_i = false;
  bool cond_ii = false;
  /// Set when both conditions hold and the product maps M(xi1) into M(xi2).
  std::optional<Intertwiner> product;
  bool mapping_ok = false;
};

/// Per stage k: S_k T = xi2_k T S_k + S_k xi1_k* T and
/// T S_k = xi2_k* T S_k + S_k xi1_k T, the last S_k repeating.
AntichainProduct antichain_conditions(std::span<const PositiveOperator> stages, const PositiveOperator& t,
                                      const ForwardFiltration& xi1, const ForwardFiltration& xi2);

/// s2 o s1 with a recomputed certificate. Inputs must be certified.
Intertwiner compose_intertwiners(const Intertwiner& s2, const Intertwiner& s1);

/// z -> drop the head of S(xi1_1 z_1, z_1, z_2, ...).
Intertwiner hat_L(const Intertwiner& s);

/// L-hat(S) o s = s o S on the basis of M(xi1).
bool hat_L_relation(const Intertwiner& s, const Intertwiner& lifted);

}  // namespace bvolterra

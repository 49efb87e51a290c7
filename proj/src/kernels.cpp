#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "bvolterra/errors.hpp"
#include "bvolterra/kernels.hpp"
#include "bvolterra/martingale.hpp"

namespace bvolterra {

int parallel_threads() { return omp_get_max_threads(); }

namespace {

constexpr std::uint64_t kMaxCandidates = std::uint64_t{1} << 26;

struct GridProblem {
  std::size_t dim = 0;
  std::size_t length = 0;
  std::vector<Scalar> values;
  std::vector<double> doubles;
  std::optional<std::size_t> zero_digit;
  /// allowed[(n * dim + i) * g + d]: grid value d dominates |x_n[i]|.
  std::vector<char> allowed;
  std::vector<std::uint64_t> level_masks;
  NormKind p = NormKind::inf;
};

struct Best {
  bool found = false;
  Scalar exact;
  double approx = 0;
  std::size_t admissible = 0;
};

void evaluate(const GridProblem& g, std::uint64_t index, std::vector<std::size_t>& digits, Best& best) {
  const std::size_t base = g.values.size();
  const std::size_t cells = g.dim * g.length;
  for (std::size_t c = 0; c < cells; ++c) {
    digits[c] = static_cast<std::size_t>(index % base);
    index /= base;
  }
  for (std::size_t c = 0; c < cells; ++c) {
    if (!g.allowed[c * base + digits[c]]) return;
  }
  for (std::size_t n = 0; n < g.length; ++n) {
    const std::uint64_t level = g.level_masks[n];
    for (std::size_t i = 0; i < g.dim; ++i) {
      const std::size_t d = digits[n * g.dim + i];
      if (!((level >> i) & 1u)) {
        if (d != g.zero_digit) return;
        continue;
      }
      for (std::size_t m = n + 1; m < g.length; ++m) {
        if (digits[m * g.dim + i] != d) return;
      }
    }
  }
  ++best.admissible;
  if (g.p == NormKind::two) {
    double sup = 0;
    for (std::size_t n = 0; n < g.length; ++n) {
      double s = 0;
      for (std::size_t i = 0; i < g.dim; ++i) s += g.doubles[digits[n * g.dim + i]] * g.doubles[digits[n * g.dim + i]];
      sup = std::max(sup, std::sqrt(s));
    }
    if (!best.found || sup < best.approx) best.approx = sup;
  } else {
    Scalar sup = 0;
    for (std::size_t n = 0; n < g.length; ++n) {
      Scalar s = 0;
      for (std::size_t i = 0; i < g.dim; ++i) {
        const Scalar& v = g.values[digits[n * g.dim + i]];
        if (g.p == NormKind::one) {
          s += v;
        } else if (v > s) {
          s = v;
        }
      }
      if (s > sup) sup = s;
    }
    if (!best.found || sup < best.exact) best.exact = sup;
  }
  best.found = true;
}

void merge(Best& into, const Best& from, NormKind p) {
  into.admissible += from.admissible;
  if (!from.found) return;
  if (!into.found) {
    const std::size_t keep = into.admissible;
    into = from;
    into.admissible = keep;
    return;
  }
  if (p == NormKind::two) {
    into.approx = std::min(into.approx, from.approx);
  } else if (from.exact < into.exact) {
    into.exact = from.exact;
  }
}

}  // namespace

BruteForceNorm regular_norm_bruteforce(const Martingale& x, NormTag tag, std::span<const Scalar> grid, Execution exec) {
  GridProblem g;
  g.dim = x.dim();
  g.length = x.length();
  g.p = tag.p;
  if (g.length == 0) {
    BruteForceNorm out;
    out.candidates = out.admissible = 1;
    out.value = tag.p == NormKind::two ? NormValue(0.0) : NormValue(Scalar(0));
    return out;
  }
  g.values.assign(grid.begin(), grid.end());
  std::sort(g.values.begin(), g.values.end());
  g.values.erase(std::unique(g.values.begin(), g.values.end()), g.values.end());
  if (g.values.empty()) throw PreconditionError("empty grid");
  if (sgn(g.values.front()) < 0) throw PreconditionError("grid values must be nonnegative");
  if (is_zero(g.values.front())) g.zero_digit = 0;
  for (const auto& v : g.values) g.doubles.push_back(v.get_d());

  const std::size_t base = g.values.size();
  const std::size_t cells = g.dim * g.length;
  std::uint64_t total = 1;
  for (std::size_t c = 0; c < cells; ++c) {
    if (total > kMaxCandidates / base) throw Unsupported("brute-force grid too large");
    total *= base;
  }
  g.allowed.resize(cells * base);
  for (std::size_t n = 0; n < g.length; ++n) {
    g.level_masks.push_back(x.filtration().level(n + 1).mask());
    for (std::size_t i = 0; i < g.dim; ++i) {
      const Scalar need = ::abs(x.prefix()[n][i]);
      for (std::size_t d = 0; d < base; ++d) g.allowed[(n * g.dim + i) * base + d] = g.values[d] >= need;
    }
  }

  Best best;
  if (exec == Execution::serial) {
    std::vector<std::size_t> digits(cells);
    for (std::uint64_t index = 0; index < total; ++index) evaluate(g, index, digits, best);
  } else {
#pragma omp parallel
    {
      Best local;
      std::vector<std::size_t> digits(cells);
#pragma omp for schedule(static)
      for (std::int64_t index = 0; index < static_cast<std::int64_t>(total); ++index) {
        evaluate(g, static_cast<std::uint64_t>(index), digits, local);
      }
#pragma omp critical
      merge(best, local, g.p);
    }
  }

  BruteForceNorm out;
  out.candidates = total;
  out.admissible = best.admissible;
  if (best.found) out.value = tag.p == NormKind::two ? NormValue(best.approx) : NormValue(best.exact);
  return out;
}

namespace {

struct SquareTask {
  std::size_t stage;
  SquareKind kind;
  std::size_t basis;
};

struct StageData {
  ForwardFiltration here;
  ForwardFiltration next;
  CoordwiseOperator lift_here;
  CoordwiseOperator lift_next;
  std::vector<Martingale> basis;
};

bool run_task(const PositiveOperator& t, const StageData& d, const SquareTask& task) try {
  switch (task.kind) {
    case SquareKind::shift_ladder: {
      const Martingale& b = d.basis[task.basis];
      return shift_s(d.lift_here.apply(b)) == d.lift_next.apply(shift_s(b));
    }
    case SquareKind::iota_square: {
      const Vector e = Vector::unit(t.dim(), task.basis);
      return iota(d.here, t.apply(e)) == d.lift_here.apply(iota(d.here, e));
    }
    case SquareKind::shift_triangle: {
      const Vector e = Vector::unit(t.dim(), task.basis);
      return shift_s(iota(d.here, e)) == iota(d.next, e);
    }
  }
  return false;
} catch (const Error&) {
  return false;
}

}  // namespace

SquareVerdict check_square(const PositiveOperator& t, const ForwardFiltration& xi, std::size_t depth, Execution exec) {
  if (t.dim() != xi.dim()) throw DimensionMismatch("check_square: dimensions differ");
  if (!is_regular_volterra(t, xi)) throw PreconditionError("T is not regular Volterra for the filtration");
  std::vector<StageData> stages;
  std::vector<SquareTask> tasks;
  for (std::size_t j = 0; j < depth; ++j) {
    ForwardFiltration here = shift_L(xi, j);
    ForwardFiltration next = shift_L(xi, j + 1);
    auto lh = lift_T_hat(t, here);
    auto ln = lift_T_hat(t, next);
    auto basis = martingale_basis(here);
    for (std::size_t b = 0; b < basis.size(); ++b) tasks.push_back({j, SquareKind::shift_ladder, b});
    for (std::size_t i = 0; i < t.dim(); ++i) tasks.push_back({j, SquareKind::iota_square, i});
    for (std::size_t i = 0; i < t.dim(); ++i) tasks.push_back({j, SquareKind::shift_triangle, i});
    stages.push_back({std::move(here), std::move(next), std::move(lh), std::move(ln), std::move(basis)});
  }
  std::vector<char> ok(tasks.size(), 0);
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < tasks.size(); ++i) ok[i] = run_task(t, stages[tasks[i].stage], tasks[i]);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(tasks.size()); ++i) {
      ok[i] = run_task(t, stages[tasks[i].stage], tasks[i]);
    }
  }
  SquareVerdict out;
  out.checked = tasks.size();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!ok[i]) {
      out.holds = false;
      out.witness = SquareWitness{tasks[i].stage, tasks[i].kind, tasks[i].basis};
      break;
    }
  }
  return out;
}

}  // namespace bvolterra

// Serial reference vs OpenMP path for the two data-parallel kernels.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "bvolterra/kernels.hpp"
#include "bvolterra/martingale.hpp"

using namespace bvolterra;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %9.4fs  parallel %9.4fs  speedup %5.2fx\n", name, serial, parallel, serial / parallel);
}

ForwardFiltration staircase(std::size_t n, std::size_t k) {
  std::vector<OrderProjection> prefix;
  for (std::size_t i = 1; i <= k; ++i) prefix.emplace_back(n, OrderProjection::full_mask(std::min(i, n)));
  return {BooleanSubalgebra::discrete(n), prefix};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel benchmark"};
  int reps = 3;
  std::size_t grid_size = 4;
  std::size_t depth = 24;
  app.add_option("--reps", reps, "repetitions, best time reported")->check(CLI::PositiveNumber);
  app.add_option("--grid", grid_size, "grid points for the brute-force norm")->check(CLI::Range(2, 6));
  app.add_option("--depth", depth, "square depth")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::printf("threads: %d\n", parallel_threads());

  const auto xi = staircase(3, 3);
  const Martingale x(xi, {Vector{1, 0, 0}, Vector{1, -2, 0}, Vector{1, -2, 1}});
  std::vector<Scalar> grid;
  for (std::size_t g = 0; g < grid_size; ++g) grid.emplace_back(static_cast<long>(g));
  BruteForceNorm a, b;
  const double ns = best_of(reps, [&] { a = regular_norm_bruteforce(x, kNormInf, grid, Execution::serial); });
  const double np = best_of(reps, [&] { b = regular_norm_bruteforce(x, kNormInf, grid, Execution::parallel); });
  if (a.value != b.value || a.admissible != b.admissible) {
    std::fprintf(stderr, "brute-force norm: serial and parallel disagree\n");
    return 1;
  }
  std::printf("brute-force norm: %zu candidates, %zu admissible\n", a.candidates, a.admissible);
  report("regular_norm_bruteforce", ns, np);

  const std::size_t n = 8;
  const auto chain = staircase(n, 6);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = Scalar(static_cast<long>(i + j + 1)) / static_cast<long>(n);
  const PositiveOperator t(m);
  SquareVerdict sa, sb;
  const double ss = best_of(reps, [&] { sa = check_square(t, chain, depth, Execution::serial); });
  const double sp = best_of(reps, [&] { sb = check_square(t, chain, depth, Execution::parallel); });
  if (sa.holds != sb.holds || sa.checked != sb.checked) {
    std::fprintf(stderr, "check_square: serial and parallel disagree\n");
    return 1;
  }
  std::printf("check_square: %zu squares, holds=%d\n", sa.checked, sa.holds ? 1 : 0);
  report("check_square", ss, sp);
  return 0;
}

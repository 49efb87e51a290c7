#include "bvolterra/random.hpp"

namespace bvolterra {

PositiveOperator random_operator(const BooleanSubalgebra& algebra, Rng& rng, unsigned leak_percent) {
  const std::size_t n = algebra.dim();
  std::uniform_int_distribution<unsigned> percent(0, 99);
  std::uniform_int_distribution<int> half_steps(1, 4);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const unsigned threshold = algebra.atom_of(i) == algebra.atom_of(j) ? 50 : leak_percent;
      if (percent(rng) < threshold) m(i, j) = Scalar(half_steps(rng)) / 2;
    }
  }
  return PositiveOperator(std::move(m));
}

}  // namespace bvolterra

#pragma once

#include <cstdint>
#include <random>

#include "bvolterra/projection.hpp"
#include "bvolterra/volterra.hpp"

namespace bvolterra {

using Rng = std::mt19937_64;

/// Entries in {0, 1/2, 1, 3/2, 2}: within an atom each entry is nonzero with
/// probability 1/2, across atoms with probability `leak_percent` / 100.
PositiveOperator random_operator(const BooleanSubalgebra& algebra, Rng& rng, unsigned leak_percent);

}  // namespace bvolterra

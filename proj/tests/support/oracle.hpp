#pragma once

// Reference implementations on raw GMP containers.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Vec = std::vector<Q>;
using Mat = std::vector<Vec>;

Vec mul(const Mat& a, const Vec& x);
Mat mul(const Mat& a, const Mat& b);
Vec mask(const Vec& x, std::uint64_t coords);
Vec sub(const Vec& a, const Vec& b);
bool zero(const Vec& x);

/// Every union of the given blocks.
std::vector<std::uint64_t> members(const std::vector<std::uint64_t>& atoms);

/// pi x = pi y => pi T x = pi T y over every member pi, tested on the pairs
/// (e_j, 0) for j outside pi and on `extra` random pairs per member.
bool b_volterra(const Mat& t, const std::vector<std::uint64_t>& atoms, std::mt19937_64& rng, int extra = 3);

/// Same implication along the levels of a chain.
bool regular_volterra(const Mat& t, const std::vector<std::uint64_t>& levels, std::mt19937_64& rng, int extra = 3);

/// xi_n x_m = x_n, m >= n.
bool martingale_law(const std::vector<std::uint64_t>& levels, const std::vector<Vec>& prefix);

/// Infimum of sup_n ||y_n|| (p = 1 when `one`, else inf) over positive
/// martingales y with values in `grid` and y_n >= |x_n|, by recursion over
/// the stages from the last one down.
std::optional<Q> regular_norm_search(const std::vector<std::uint64_t>& levels, const std::vector<Vec>& x,
                                     const std::vector<Q>& grid, bool one);

}  // namespace oracle

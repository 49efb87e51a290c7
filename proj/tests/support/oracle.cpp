#include "oracle.hpp"

#include <algorithm>
#include <functional>

namespace oracle {

Vec mul(const Mat& a, const Vec& x) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
  }
  return out;
}

Mat mul(const Mat& a, const Mat& b) {
  Mat out(a.size(), Vec(b.empty() ? 0 : b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < out[i].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

Vec mask(const Vec& x, std::uint64_t coords) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    if ((coords >> i) & 1u) out[i] = x[i];
  return out;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

bool zero(const Vec& x) {
  return std::all_of(x.begin(), x.end(), [](const Q& v) { return v == 0; });
}

std::vector<std::uint64_t> members(const std::vector<std::uint64_t>& atoms) {
  std::vector<std::uint64_t> out{0};
  for (std::uint64_t a : atoms) {
    const std::size_t size = out.size();
    for (std::size_t i = 0; i < size; ++i) out.push_back(out[i] | a);
  }
  return out;
}

namespace {

bool implication_holds(const Mat& t, std::uint64_t pi, std::mt19937_64& rng, int extra) {
  const std::size_t n = t.size();
  std::uniform_int_distribution<int> entry(-3, 3);
  std::vector<std::pair<Vec, Vec>> pairs;
  for (std::size_t j = 0; j < n; ++j) {
    if ((pi >> j) & 1u) continue;
    Vec e(n);
    e[j] = 1;
    pairs.emplace_back(e, Vec(n));
  }
  for (int r = 0; r < extra; ++r) {
    Vec x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = entry(rng);
      y[i] = ((pi >> i) & 1u) ? x[i] : Q(entry(rng));
    }
    pairs.emplace_back(x, y);
  }
  for (const auto& [x, y] : pairs) {
    if (mask(x, pi) != mask(y, pi)) continue;
    if (mask(mul(t, x), pi) != mask(mul(t, y), pi)) return false;
  }
  return true;
}

}  // namespace

bool b_volterra(const Mat& t, const std::vector<std::uint64_t>& atoms, std::mt19937_64& rng, int extra) {
  for (std::uint64_t pi : members(atoms))
    if (!implication_holds(t, pi, rng, extra)) return false;
  return true;
}

bool regular_volterra(const Mat& t, const std::vector<std::uint64_t>& levels, std::mt19937_64& rng, int extra) {
  for (std::uint64_t pi : levels)
    if (!implication_holds(t, pi, rng, extra)) return false;
  return true;
}

bool martingale_law(const std::vector<std::uint64_t>& levels, const std::vector<Vec>& prefix) {
  if (levels.size() != prefix.size()) return false;
  for (std::size_t n = 0; n < prefix.size(); ++n)
    for (std::size_t m = n; m < prefix.size(); ++m)
      if (mask(prefix[m], levels[n]) != prefix[n]) return false;
  return true;
}

std::optional<Q> regular_norm_search(const std::vector<std::uint64_t>& levels, const std::vector<Vec>& x,
                                     const std::vector<Q>& grid, bool one) {
  const std::size_t k = x.size();
  if (k == 0) return Q(0);
  const std::size_t n = x[0].size();
  std::optional<Q> best;
  std::vector<Vec> y(k, Vec(n));
  auto norm = [&](const Vec& v) {
    Q s = 0;
    for (const Q& e : v) s = one ? s + e : std::max(s, e);
    return s;
  };
  std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t stage, std::size_t i) {
    if (i == n) {
      if (stage == 0) {
        if (!martingale_law(levels, y)) return;
        Q sup = 0;
        for (const auto& v : y) sup = std::max(sup, norm(v));
        if (!best || sup < *best) best = sup;
        return;
      }
      fill(stage - 1, 0);
      return;
    }
    for (const Q& g : grid) {
      if (g < abs(x[stage][i])) continue;
      y[stage][i] = g;
      fill(stage, i + 1);
    }
  };
  fill(k - 1, 0);
  return best;
}

}  // namespace oracle

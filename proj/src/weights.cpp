#include <cdl/falsify.hpp>

#include <algorithm>
#include <cmath>

namespace cdl {

namespace {

// #{k >= 1 : 2^-k > r} for 0 < r; exact in binary.
std::size_t levels_above(double r) {
  int e = 0;
  std::frexp(r, &e);  // r = m 2^e, m in [0.5, 1)
  return e < 0 ? static_cast<std::size_t>(-e) : 0;
}

}  // namespace

WeightsResult construct_diverging_weights(std::span<const double> alphas, double tail_beyond) {
  WeightsResult res;
  const std::size_t n = alphas.size();
  if (n == 0) return res;
  for (double a : alphas)
    if (!std::isfinite(a) || a < 0.0) res.inconclusive = true;
  if (!std::isfinite(tail_beyond) || tail_beyond < 0.0) res.inconclusive = true;
  if (res.inconclusive) return res;

  // tails[m] = R_m = sum_{j > m} alpha_j (1-based), m = 0..n
  std::vector<double> tails(n + 1);
  tails[n] = tail_beyond;
  for (std::size_t m = n; m-- > 0;) tails[m] = tails[m + 1] + alphas[m];

  res.weights.resize(n);
  std::size_t prev = 0;
  for (std::size_t m = 1; m <= n; ++m) {
    const double r = tails[m - 1];
    const std::size_t b = r > 0.0 ? std::max<std::size_t>(1, levels_above(r)) : prev + 1;
    res.weights[m - 1] = static_cast<double>(b);
    prev = b;
  }

  // n_k for k = 1 .. final weight: first index m >= 1 with R_m < 2^-k
  const auto top = static_cast<std::size_t>(res.weights.back());
  std::size_t m = 1;
  for (std::size_t k = 1; k <= top; ++k) {
    const double level = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(k, 1100)));
    while (m <= n && !(tails[m] < level)) ++m;
    if (m > n) break;
    res.thresholds.push_back(m);
  }

  double partial = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    res.alpha_sum += alphas[j];
    partial += alphas[j] * res.weights[j];
    res.max_partial = std::max(res.max_partial, partial);
  }
  res.alpha_sum += tail_beyond;
  res.weighted_sum = partial;
  res.bound = res.alpha_sum + 2.0;
  res.nondecreasing = std::is_sorted(res.weights.begin(), res.weights.end());
  res.bounded = res.max_partial <= res.bound;

  // A summable sequence loses mass from one dyadic block to the next.
  if (n >= 8) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t j = n / 4; j < n / 2; ++j) s1 += alphas[j];
    for (std::size_t j = n / 2; j < n; ++j) s2 += alphas[j];
    if (s2 > 0.0 && s2 >= 0.9 * s1) res.inconclusive = true;
  }
  return res;
}

}  // namespace cdl

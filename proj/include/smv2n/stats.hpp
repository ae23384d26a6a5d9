#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace smv2n::stats {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double mean(std::span<const double> xs) {
  if (xs.empty()) return kNaN;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1).
inline double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return kNaN;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Linear-interpolation quantile over an ascending-sorted sample.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return kNaN;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  return quantile_sorted(xs, q);
}

/// P(X >= k) for X ~ Binomial(n, 1/2).
inline double binomial_half_upper_tail(int n, int k) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  double p = 0.0;
  for (int i = k; i <= n; ++i) {
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) - n * std::log(2.0));
  }
  return std::min(1.0, p);
}

struct SignTest {
  int n_greater = 0;  // pairs with after > before
  int n_less = 0;
  int n_ties = 0;
  double p_greater = 1.0;  // one-sided p-value for "after tends to exceed before"
  double p_less = 1.0;
};

/// Paired one-sided sign test; ties are dropped.
inline SignTest sign_test(std::span<const double> before, std::span<const double> after) {
  SignTest t;
  const std::size_t n = std::min(before.size(), after.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (after[i] > before[i]) ++t.n_greater;
    else if (after[i] < before[i]) ++t.n_less;
    else ++t.n_ties;
  }
  const int m = t.n_greater + t.n_less;
  t.p_greater = binomial_half_upper_tail(m, t.n_greater);
  t.p_less = binomial_half_upper_tail(m, t.n_less);
  return t;
}

}  // namespace smv2n::stats

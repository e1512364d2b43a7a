#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace qmint {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

// |observed - expected| <= sigmas * sqrt(p(1-p)/n) for a binomial rate.
inline bool within_sigma_binomial(double observed_rate, double expected_rate, std::size_t trials,
                                  double sigmas = 5.0) {
  const double se = std::sqrt(expected_rate * (1.0 - expected_rate) / static_cast<double>(trials));
  return std::abs(observed_rate - expected_rate) <= sigmas * se + 1e-15;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr r;
  r.n = xs.size();
  if (xs.empty()) return r;
  double sum = 0.0;
  for (double x : xs) sum += x;
  r.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  const double var = xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
  r.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
  return r;
}

// Pearson chi-square statistic against uniform expected counts.
inline double chi_square_uniform(const std::vector<std::size_t>& counts, std::size_t total) {
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// Upper critical value of chi-square with k dof at z normal-equivalent sigmas
// (Wilson-Hilferty cube approximation).
inline double chi_square_critical(std::size_t dof, double z) {
  const double k = static_cast<double>(dof);
  const double a = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * a * a * a;
}

// Standard error of the difference of two binomial rate estimates.
inline double rate_diff_stderr(double p1, std::size_t n1, double p2, std::size_t n2) {
  return std::sqrt(p1 * (1.0 - p1) / static_cast<double>(n1) + p2 * (1.0 - p2) / static_cast<double>(n2));
}

// P(Binomial(n, p) >= k), exact by summation in log space for stability.
inline double binomial_tail_geq(std::size_t n, double p, std::size_t k) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  // Start at the term for k and recur upward.
  double log_term = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                    std::lgamma(static_cast<double>(n - k) + 1.0) + static_cast<double>(k) * std::log(p) +
                    static_cast<double>(n - k) * std::log1p(-p);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (std::size_t i = k; i <= n; ++i) {
    sum += term;
    if (i == n) break;
    term *= (static_cast<double>(n - i) / static_cast<double>(i + 1)) * (p / (1.0 - p));
    if (term < 1e-300 && sum > 0.0) break;
  }
  return sum > 1.0 ? 1.0 : sum;
}

}  // namespace qmint

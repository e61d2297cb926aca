#ifndef ITEMDEV_DESCRIPTIVE_HPP
#define ITEMDEV_DESCRIPTIVE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>

#include "itemdev/sample.hpp"

namespace itemdev {

// Moments use plain expectations: var_pop and the standardized moments divide
// by n, var_sample divides by n - 1. For n == 1 the sample variance is
// reported as 0.
struct DescriptiveSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double var_pop = 0.0;
  double var_sample = 0.0;
  double sd_sample = 0.0;
  std::optional<double> skewness;  // absent for n < 3 or zero spread
  std::optional<double> kurtosis;  // absent for n < 4 or zero spread
  std::optional<double> excess_kurtosis;
  double min = 0.0;
  double max = 0.0;
  double range = 0.0;
};

namespace detail {

inline double mean_of(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Sum of (x - center)^k.
inline double central_power_sum(std::span<const double> xs, double center, int k) {
  double sum = 0.0;
  for (double x : xs) sum += std::pow(x - center, k);
  return sum;
}

inline double sample_sd_of(std::span<const double> xs, double mean) {
  if (xs.size() < 2) return 0.0;
  return std::sqrt(central_power_sum(xs, mean, 2) / static_cast<double>(xs.size() - 1));
}

}  // namespace detail

inline DescriptiveSummary summarize(std::span<const double> scores) {
  if (scores.empty()) throw DataError("empty sample");
  DescriptiveSummary s;
  s.n = scores.size();
  const double n = static_cast<double>(s.n);
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  s.min = *lo;
  s.max = *hi;
  s.range = s.max - s.min;
  // Identical scores: keep the mean exact so no rounding residue fakes spread.
  if (s.range == 0.0) {
    s.mean = s.min;
    return s;
  }
  s.mean = detail::mean_of(scores);
  const double ss = detail::central_power_sum(scores, s.mean, 2);
  s.var_pop = ss / n;
  s.var_sample = s.n > 1 ? ss / (n - 1.0) : 0.0;
  s.sd_sample = std::sqrt(s.var_sample);

  if (s.var_pop > 0.0) {
    const double sd_pop = std::sqrt(s.var_pop);
    if (s.n >= 3) s.skewness = detail::central_power_sum(scores, s.mean, 3) / n / std::pow(sd_pop, 3);
    if (s.n >= 4) {
      s.kurtosis = detail::central_power_sum(scores, s.mean, 4) / n / (s.var_pop * s.var_pop);
      s.excess_kurtosis = *s.kurtosis - 3.0;
    }
  }
  return s;
}

inline DescriptiveSummary summarize(const ItemSample& sample) { return summarize(sample.scores()); }

/// k-th standardized moment (1/n) sum(((x - mean) / sd_pop)^k).
inline double standardized_moment(std::span<const double> scores, int k) {
  if (k < 1) throw std::invalid_argument("moment order must be positive");
  if (scores.size() < 2) throw DataError("standardized moment needs at least 2 observations");
  const double n = static_cast<double>(scores.size());
  const double mean = detail::mean_of(scores);
  const double var_pop = detail::central_power_sum(scores, mean, 2) / n;
  if (!(var_pop > 0.0)) throw DataError("degenerate: zero variance");
  return detail::central_power_sum(scores, mean, k) / n / std::pow(var_pop, k / 2.0);
}

inline double standardized_moment(const ItemSample& sample, int k) { return standardized_moment(sample.scores(), k); }

}  // namespace itemdev

#endif  // ITEMDEV_DESCRIPTIVE_HPP

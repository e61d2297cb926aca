// Fixture items shared by the unit and acceptance suites.
#ifndef ITEMDEV_TESTS_TEST_ITEMS_HPP
#define ITEMDEV_TESTS_TEST_ITEMS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "itemdev/sample.hpp"

namespace testing_items {

/// n responses on [1, 5] with mean exactly `mean` and sample sd exactly `sd`
/// (up to rounding): an evenly spaced grid, standardized and rescaled.
inline std::vector<double> engineered_scores(std::size_t n = 30, double mean = 4.2, double sd = 0.4) {
  std::vector<double> u(n);
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m += (u[i] = static_cast<double>(i));
  m /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : u) ss += (v - m) * (v - m);
  const double s = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = mean + sd * (u[i] - m) / s;
  return xs;
}

inline itemdev::ItemSample engineered_item(std::size_t n = 30) {
  return itemdev::ItemSample("engineered", engineered_scores(n), itemdev::ScaleSpec(1.0, 5.0));
}

/// Standard normal draws on a wide scale.
inline itemdev::ItemSample normal_item(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<double> xs(n);
  for (double& x : xs) {
    do x = z(rng);
    while (std::fabs(x) > 10.0);
  }
  return itemdev::ItemSample("normal", std::move(xs), itemdev::ScaleSpec(-10.0, 10.0));
}

}  // namespace testing_items

#endif  // ITEMDEV_TESTS_TEST_ITEMS_HPP

// Test-only reference computations, kept independent of the library's
// numerical paths.
#ifndef ITEMDEV_TESTS_ORACLES_HPP
#define ITEMDEV_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

/// Adaptive Simpson quadrature of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 60);
}

/// Random item responses on [lo, hi], continuous or on an integer grid.
inline std::vector<double> random_scores(std::mt19937_64& rng, double lo, double hi, std::size_t n, bool integer) {
  std::vector<double> xs(n);
  if (integer) {
    std::uniform_int_distribution<int> pick(static_cast<int>(lo), static_cast<int>(hi));
    for (double& x : xs) x = pick(rng);
  } else {
    std::uniform_real_distribution<double> pick(lo, hi);
    for (double& x : xs) x = pick(rng);
  }
  return xs;
}

}  // namespace oracle

#endif  // ITEMDEV_TESTS_ORACLES_HPP

#ifndef ITEMDEV_DIAGNOSTICS_HPP
#define ITEMDEV_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "itemdev/descriptive.hpp"
#include "itemdev/distributions.hpp"
#include "itemdev/index.hpp"
#include "itemdev/parallel.hpp"
#include "itemdev/random.hpp"
#include "itemdev/sample.hpp"
#include "itemdev/special.hpp"

// Resampling and simulation checks on the index: the bootstrap sampling
// distribution, residual QQ data, and Monte Carlo runs for bias and for the
// t-to-normal convergence.
namespace itemdev {

struct BootstrapReport {
  std::string item_id;
  std::size_t n = 0;
  std::size_t n_boot = 0;
  std::uint64_t seed = 0;
  std::vector<double> replicates;  // finite replicates, in replicate order
  double ci_low = 0.0;
  double ci_high = 0.0;
  double ci_level = 0.0;
  double alpha = 0.0;
  double critical_value = 0.0;  // t critical, two tails, df = n - 1
  double acceptance_low = 0.0;
  double acceptance_high = 0.0;
  std::size_t n_outside = 0;
  std::size_t divergent_count = 0;
  double replicate_mean = 0.0;
  double replicate_sd = 0.0;

  friend bool operator==(const BootstrapReport&, const BootstrapReport&) = default;
};

struct QQPoint {
  double theoretical_quantile = 0.0;
  double sample_quantile = 0.0;
};

enum class ResidualSource { CenteredResiduals };

struct QQData {
  std::vector<QQPoint> points;
  ResidualSource residual_source = ResidualSource::CenteredResiduals;
};

struct SimulationSummary {
  std::string scenario;
  std::size_t n = 0;
  std::size_t reps = 0;
  double true_delta = 0.0;
  double mean_d_hat = 0.0;
  double mean_d_g = 0.0;
  double empirical_var_d_hat = 0.0;
  double bias_d_hat = 0.0;
  double bias_d_g = 0.0;
  std::uint64_t seed = 0;
};

struct SlutskyRow {
  std::size_t n = 0;
  std::size_t reps = 0;
  double threshold = 0.0;
  double tail_probability = 0.0;  // simulated P(|T| > threshold)
  double t_tail_probability = 0.0;  // exact value from the t distribution, df = n - 1
};

namespace detail {

// Index of raw values against `target`, or nothing when all values coincide.
inline std::optional<double> raw_index(std::span<const double> xs, double target) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (*lo == *hi) return std::nullopt;
  const double mean = mean_of(xs);
  return (mean - target) / sample_sd_of(xs, mean);
}

// Linear interpolation between order statistics of sorted data.
inline double sorted_quantile(std::span<const double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// The double h nearest critical / root_n with h * root_n == critical, when
// one exists within a couple of ulps.
inline double exact_quotient(double critical, double root_n) {
  double best = critical / root_n;
  double best_err = std::fabs(best * root_n - critical);
  double lo = best;
  double hi = best;
  for (int step = 0; step < 8 && best_err > 0.0; ++step) {
    lo = std::nextafter(lo, -INFINITY);
    hi = std::nextafter(hi, INFINITY);
    for (double c : {lo, hi}) {
      const double err = std::fabs(c * root_n - critical);
      if (err < best_err) {
        best = c;
        best_err = err;
      }
    }
  }
  return best;
}

}  // namespace detail

/// Acceptance region of the index: +/- t_critical(alpha, n - 1) / sqrt(n).
inline double acceptance_half_width(double alpha, std::size_t n) {
  if (n < 2) throw std::invalid_argument("acceptance region needs n >= 2");
  const double crit = t_critical(alpha, static_cast<int>(n - 1), Tails::Two);
  return detail::exact_quotient(crit, std::sqrt(static_cast<double>(n)));
}

/// Percentile bootstrap of the index. Replicate r resamples with its own
/// substream (seed, r), so the report is identical for any thread count.
inline BootstrapReport bootstrap_index(const ItemSample& sample, std::size_t n_boot, double ci_level, double alpha,
                                       std::uint64_t seed, unsigned threads = 1,
                                       std::optional<double> target = std::nullopt) {
  const std::size_t n = sample.size();
  if (n < 2) throw DataError("need at least 2 observations");
  if (n_boot < 1) throw std::invalid_argument("n_boot must be at least 1");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw std::invalid_argument("ci level must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (summarize(sample).sd_sample == 0.0) throw DataError("bootstrap undefined for degenerate item");

  const double goal = target.value_or(sample.scale().midpoint());
  const auto scores = sample.scores();
  std::vector<std::optional<double>> slots(n_boot);
  parallel_for(n_boot, threads, [&](std::size_t r) {
    Substream rng(seed, r);
    std::vector<double> resample(n);
    for (double& x : resample) x = scores[rng.below(n)];
    slots[r] = detail::raw_index(resample, goal);
  });

  BootstrapReport rep;
  rep.item_id = sample.id();
  rep.n = n;
  rep.n_boot = n_boot;
  rep.seed = seed;
  rep.ci_level = ci_level;
  rep.alpha = alpha;
  rep.critical_value = t_critical(alpha, static_cast<int>(n - 1), Tails::Two);
  rep.acceptance_high = acceptance_half_width(alpha, n);
  rep.acceptance_low = -rep.acceptance_high;
  rep.replicates.reserve(n_boot);
  for (const auto& d : slots) {
    if (!d) {
      ++rep.divergent_count;
      continue;
    }
    rep.replicates.push_back(*d);
    if (*d > rep.acceptance_high || *d < rep.acceptance_low) ++rep.n_outside;
  }
  if (rep.replicates.empty()) throw DataError("every bootstrap resample was degenerate");

  std::vector<double> sorted = rep.replicates;
  std::sort(sorted.begin(), sorted.end());
  rep.ci_low = detail::sorted_quantile(sorted, (1.0 - ci_level) / 2.0);
  rep.ci_high = detail::sorted_quantile(sorted, (1.0 + ci_level) / 2.0);
  rep.replicate_mean = detail::mean_of(rep.replicates);
  rep.replicate_sd = detail::sample_sd_of(rep.replicates, rep.replicate_mean);
  return rep;
}

/// Standardized centered residuals against normal quantiles at the
/// plotting positions (i - 0.5) / n.
inline QQData qq_data(const ItemSample& sample) {
  const std::size_t n = sample.size();
  if (n < 3) throw DataError("QQ data needs at least 3 observations");
  const DescriptiveSummary s = summarize(sample);
  if (s.sd_sample == 0.0) throw DataError("degenerate: zero variance");

  std::vector<double> residuals;
  residuals.reserve(n);
  for (double x : sample.scores()) residuals.push_back((x - s.mean) / s.sd_sample);
  std::sort(residuals.begin(), residuals.end());

  QQData qq;
  qq.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    qq.points.push_back({special::normal_quantile(p), residuals[i]});
  }
  return qq;
}

/// Least-squares slope of sample quantiles on theoretical quantiles.
inline double qq_slope(const QQData& qq) {
  const std::size_t n = qq.points.size();
  if (n < 2) throw std::invalid_argument("QQ slope needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (const auto& p : qq.points) {
    mx += p.theoretical_quantile;
    my += p.sample_quantile;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : qq.points) {
    sxy += (p.theoretical_quantile - mx) * (p.sample_quantile - my);
    sxx += (p.theoretical_quantile - mx) * (p.theoretical_quantile - mx);
  }
  return sxy / sxx;
}

/// Empirical bias of the index and its corrected form for normal responses
/// N(true_mu, sigma), measured against true_delta = (true_mu - M) / sigma.
inline SimulationSummary simulate_bias(std::size_t n, double true_mu, double sigma, const ScaleSpec& scale,
                                       std::size_t reps, std::uint64_t seed, unsigned threads = 1) {
  if (n < 4) throw std::invalid_argument("bias simulation needs n >= 4");
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  if (!(sigma > 0.0) || !std::isfinite(true_mu)) throw std::invalid_argument("need finite mu and sigma > 0");

  const double midpoint = scale.midpoint();
  std::vector<double> d_hat(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    Substream rng(seed, r);
    std::vector<double> xs(n);
    for (double& x : xs) x = rng.normal(true_mu, sigma);
    d_hat[r] = detail::raw_index(xs, midpoint).value_or(0.0);
  });

  SimulationSummary out;
  out.scenario = "bias";
  out.n = n;
  out.reps = reps;
  out.seed = seed;
  out.true_delta = (true_mu - midpoint) / sigma;
  out.mean_d_hat = detail::mean_of(d_hat);
  out.mean_d_g = out.mean_d_hat * hedges_correction(n);
  out.empirical_var_d_hat =
      reps > 1 ? detail::central_power_sum(d_hat, out.mean_d_hat, 2) / static_cast<double>(reps - 1) : 0.0;
  out.bias_d_hat = out.mean_d_hat - out.true_delta;
  out.bias_d_g = out.mean_d_g - out.true_delta;
  return out;
}

/// Simulated P(|T| > threshold) for one-sample t statistics under the null,
/// one row per sample size. Tends to the normal tail as n grows.
inline std::vector<SlutskyRow> simulate_slutsky(std::span<const std::size_t> n_values, std::size_t reps,
                                                std::uint64_t seed, unsigned threads = 1,
                                                double threshold = 1.96) {
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");
  std::vector<SlutskyRow> rows;
  rows.reserve(n_values.size());
  for (std::size_t n : n_values) {
    if (n < 4) throw std::invalid_argument("Slutsky simulation needs every n >= 4");
    std::vector<unsigned char> beyond(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
      Substream rng(seed, (static_cast<std::uint64_t>(n) << 32) | r);
      std::vector<double> xs(n);
      for (double& x : xs) x = rng.normal();
      const double mean = detail::mean_of(xs);
      const double t = mean / (detail::sample_sd_of(xs, mean) / std::sqrt(static_cast<double>(n)));
      beyond[r] = std::fabs(t) > threshold;
    });
    std::size_t count = 0;
    for (unsigned char b : beyond) count += b;
    rows.push_back({n, reps, threshold, static_cast<double>(count) / static_cast<double>(reps),
                    2.0 * t_cdf(-threshold, static_cast<int>(n - 1))});
  }
  return rows;
}

}  // namespace itemdev

#endif  // ITEMDEV_DIAGNOSTICS_HPP

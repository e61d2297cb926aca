#ifndef ITEMDEV_INDEX_HPP
#define ITEMDEV_INDEX_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "itemdev/descriptive.hpp"
#include "itemdev/sample.hpp"

// The standardized item deviation index: how far an item's mean sits from
// the scale midpoint, in units of the item's sample standard deviation.
// It equals a one-sample t statistic divided by sqrt(n).
namespace itemdev {

enum class Classification { Centered, PositiveDeviation, NegativeDeviation, PositiveDivergent, NegativeDivergent };

constexpr std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Centered: return "Centered";
    case Classification::PositiveDeviation: return "PositiveDeviation";
    case Classification::NegativeDeviation: return "NegativeDeviation";
    case Classification::PositiveDivergent: return "PositiveDivergent";
    case Classification::NegativeDivergent: return "NegativeDivergent";
  }
  return "Unknown";
}

constexpr bool is_divergent(Classification c) {
  return c == Classification::PositiveDivergent || c == Classification::NegativeDivergent;
}

/// Where the item sits relative to what the bounded scale permits.
struct BoundContext {
  double sd_max = 0.0;           // (B - b) / 2
  double numerator_min = 0.0;    // b - target
  double numerator_max = 0.0;    // B - target
  double at_max_sd_index = 0.0;  // 2 x_norm - 1, the index if sd were maximal
  double x_norm = 0.0;           // (mean - b) / (B - b)
};

struct IndexResult {
  std::string item_id;
  std::size_t n = 0;
  double target = 0.0;
  // +inf / -inf for divergent items, 0 for a constant item on the target.
  double d_hat = 0.0;
  // Absent for divergent items.
  std::optional<double> d_g;
  double correction_J = 0.0;
  std::optional<double> theoretical_var;  // needs n > 3
  Classification classification = Classification::Centered;
  double numerator = 0.0;  // mean - target, scale units
  double sd = 0.0;         // sample sd (divisor n - 1), scale units
  BoundContext bounds;
};

/// Hedges small-sample factor J evaluated at df = n - 1: 1 - 3 / (4n - 5).
inline double hedges_correction(std::size_t n) {
  if (n < 2) throw std::invalid_argument("Hedges correction needs n >= 2");
  return 1.0 - 3.0 / (4.0 * static_cast<double>(n) - 5.0);
}

inline double corrected_index(double d_hat, std::size_t n) {
  if (!std::isfinite(d_hat)) throw DataError("correction undefined for divergent index");
  return d_hat * hedges_correction(n);
}

struct TheoreticalMoments {
  double mean = 0.0;
  std::optional<double> variance;
};

// Moments of d_hat under a null of no deviation with normal responses.
// d_hat = t / sqrt(n) and Var(t) = nu / (nu - 2), so the variance only
// exists for n > 3.
inline TheoreticalMoments theoretical_moments(std::size_t n) {
  if (n < 2) throw std::invalid_argument("theoretical moments need n >= 2");
  TheoreticalMoments m;
  if (n > 3) {
    const double nn = static_cast<double>(n);
    m.variance = (nn - 1.0) / (nn * (nn - 3.0));
  }
  return m;
}

/// Largest population sd any variable on the scale can have.
inline double popoviciu_sd_bound(const ScaleSpec& scale) { return scale.width() / 2.0; }

/// Limit of the index as sd reaches its bound: 2 x_norm - 1, always in [-1, 1].
inline double max_sd_limit_index(double mean, const ScaleSpec& scale) {
  if (!(mean >= scale.min() && mean <= scale.max()))
    throw std::invalid_argument("mean lies outside the scale");
  return 2.0 * (mean - scale.min()) / scale.width() - 1.0;
}

enum class LogBase { Natural, Base2 };

/// Differential entropy of a normal with this sd: log(sqrt(2 pi e) sd).
inline double entropy_proxy(double sd, LogBase base = LogBase::Natural) {
  if (!(sd > 0.0) || !std::isfinite(sd)) throw DataError("entropy undefined for zero variance");
  const double nats = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e) + std::log(sd);
  return base == LogBase::Natural ? nats : nats / std::numbers::ln2;
}

/// The index from summary statistics. `target` defaults to the scale
/// midpoint; sd == 0 yields a divergent (or centered) classification.
inline IndexResult compute_index(std::string item_id, std::size_t n, double mean, double sd, const ScaleSpec& scale,
                                 std::optional<double> target = std::nullopt) {
  if (n < 2) throw DataError("need at least 2 observations");
  if (!std::isfinite(mean) || !std::isfinite(sd) || sd < 0.0)
    throw std::invalid_argument("mean and sd must be finite with sd >= 0");
  if (!scale.contains(mean)) throw DataError("mean lies outside the scale");

  IndexResult r;
  r.item_id = std::move(item_id);
  r.n = n;
  r.target = target.value_or(scale.midpoint());
  r.numerator = mean - r.target;
  r.sd = sd;
  r.correction_J = hedges_correction(n);
  r.theoretical_var = theoretical_moments(n).variance;

  r.bounds.sd_max = popoviciu_sd_bound(scale);
  r.bounds.numerator_min = scale.min() - r.target;
  r.bounds.numerator_max = scale.max() - r.target;
  r.bounds.x_norm = (mean - scale.min()) / scale.width();
  r.bounds.at_max_sd_index = max_sd_limit_index(mean, scale);

  if (sd > 0.0) {
    r.d_hat = r.numerator / sd;
    r.d_g = r.d_hat * r.correction_J;
    if (r.numerator > 0.0)
      r.classification = Classification::PositiveDeviation;
    else if (r.numerator < 0.0)
      r.classification = Classification::NegativeDeviation;
    else
      r.classification = Classification::Centered;
    return r;
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  if (r.numerator > 0.0) {
    r.d_hat = inf;
    r.classification = Classification::PositiveDivergent;
  } else if (r.numerator < 0.0) {
    r.d_hat = -inf;
    r.classification = Classification::NegativeDivergent;
  } else {
    r.d_hat = 0.0;
    r.d_g = 0.0;
    r.classification = Classification::Centered;
  }
  return r;
}

inline IndexResult compute_index(const ItemSample& sample, std::optional<double> target = std::nullopt) {
  if (sample.size() < 2) throw DataError("need at least 2 observations");
  const DescriptiveSummary s = summarize(sample);
  return compute_index(sample.id(), s.n, s.mean, s.sd_sample, sample.scale(), target);
}

}  // namespace itemdev

#endif  // ITEMDEV_INDEX_HPP

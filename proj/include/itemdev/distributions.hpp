#ifndef ITEMDEV_DISTRIBUTIONS_HPP
#define ITEMDEV_DISTRIBUTIONS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

#include "itemdev/special.hpp"

namespace itemdev {

enum class Tails { One, Two };
enum class Decision { RejectH0, FailToRejectH0 };
enum class Approach { NeymanPearson, Fisher };

constexpr std::string_view to_string(Decision d) {
  return d == Decision::RejectH0 ? "RejectH0" : "FailToRejectH0";
}
constexpr std::string_view to_string(Approach a) {
  return a == Approach::NeymanPearson ? "NeymanPearson" : "Fisher";
}

struct TestOutcome {
  double statistic = 0.0;
  int df = 0;
  double alpha = 0.0;
  Tails tails = Tails::Two;
  double critical_value = 0.0;
  double p_value = 1.0;
  Decision decision = Decision::FailToRejectH0;
  Approach approach = Approach::NeymanPearson;
};

namespace detail {

inline void require_df(int df) {
  if (df < 1) throw std::invalid_argument("degrees of freedom must be at least 1");
}

inline void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

}  // namespace detail

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

/// Central Student t density with df degrees of freedom.
inline double t_pdf(double t, int df) {
  detail::require_df(df);
  const double nu = df;
  const double log_norm = special::log_gamma((nu + 1.0) / 2.0) - special::log_gamma(nu / 2.0) -
                          0.5 * std::log(nu * std::numbers::pi);
  return std::exp(log_norm - (nu + 1.0) / 2.0 * std::log1p(t * t / nu));
}

/// P(T <= t), through I_{df/(df+t^2)}(df/2, 1/2).
inline double t_cdf(double t, int df) {
  detail::require_df(df);
  if (std::isnan(t)) throw std::invalid_argument("t_cdf argument is NaN");
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double nu = df;
  const double t2 = t * t;
  const double tail = 0.5 * special::regularized_beta(nu / 2.0, 0.5, nu / (nu + t2), t2 / (nu + t2));
  return t > 0.0 ? 1.0 - tail : tail;
}

/// Critical value q with P(|T| > q) = alpha (two tails) or P(T > q) = alpha
/// (one tail), found by bisection on the upper tail probability.
inline double t_critical(double alpha, int df, Tails tails) {
  detail::require_alpha(alpha);
  detail::require_df(df);
  const double upper = tails == Tails::Two ? alpha / 2.0 : alpha;
  if (upper == 0.5) return 0.0;
  // Upper tail above 0.5 means a negative quantile; solve the mirror image.
  const double target = upper < 0.5 ? upper : 1.0 - upper;
  auto tail_prob = [df](double t) { return t_cdf(-t, df); };
  double lo = 0.0;
  double hi = 1.0;
  while (tail_prob(hi) > target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 300 && hi - lo > 1e-13 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (tail_prob(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  const double q = 0.5 * (lo + hi);
  return upper < 0.5 ? q : -q;
}

/// (mean - mu) / (sigma / sqrt(n)).
inline double z_statistic(double mean, double mu, double sigma, std::size_t n) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  return (mean - mu) / (sigma / std::sqrt(static_cast<double>(n)));
}

/// One-sample t statistic (mean - mu) / (s / sqrt(n)).
inline double t_statistic(double mean, double mu, double s, std::size_t n) {
  if (!(s > 0.0)) throw std::invalid_argument("sample standard deviation must be positive");
  if (n < 2) throw std::invalid_argument("t statistic needs n >= 2");
  return (mean - mu) / (s / std::sqrt(static_cast<double>(n)));
}

/// Two routes to the same test. Ties at the critical value fail to reject.
inline TestOutcome nhst_decide(double statistic, int df, double alpha, Approach approach,
                               Tails tails = Tails::Two) {
  if (!std::isfinite(statistic)) throw std::invalid_argument("test statistic must be finite");
  TestOutcome out;
  out.statistic = statistic;
  out.df = df;
  out.alpha = alpha;
  out.tails = tails;
  out.approach = approach;
  out.critical_value = t_critical(alpha, df, tails);
  if (tails == Tails::Two) {
    out.p_value = std::min(1.0, 2.0 * t_cdf(-std::fabs(statistic), df));
  } else {
    out.p_value = t_cdf(-statistic, df);
  }
  const double extremity = tails == Tails::Two ? std::fabs(statistic) : statistic;
  const bool reject = approach == Approach::NeymanPearson ? extremity > out.critical_value : out.p_value < alpha;
  out.decision = reject ? Decision::RejectH0 : Decision::FailToRejectH0;
  return out;
}

}  // namespace itemdev

#endif  // ITEMDEV_DISTRIBUTIONS_HPP

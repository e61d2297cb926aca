#ifndef ITEMDEV_SAMPLE_HPP
#define ITEMDEV_SAMPLE_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace itemdev {

// Malformed or out-of-contract input data. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system failures. The CLI maps it to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bounded response scale [min, max]. The midpoint is always derived.
class ScaleSpec {
 public:
  ScaleSpec(double min, double max) : min_(min), max_(max) {
    if (!std::isfinite(min) || !std::isfinite(max))
      throw std::invalid_argument("scale bounds must be finite");
    if (!(max > min))
      throw std::invalid_argument("scale maximum must exceed scale minimum");
  }

  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }
  double midpoint() const noexcept { return (max_ + min_) / 2.0; }
  double width() const noexcept { return max_ - min_; }
  bool contains(double x) const noexcept { return x >= min_ && x <= max_; }

  friend bool operator==(const ScaleSpec&, const ScaleSpec&) = default;

 private:
  double min_;
  double max_;
};

/// One item's responses. Every score is finite and lies on the scale.
class ItemSample {
 public:
  ItemSample(std::string item_id, std::vector<double> scores, ScaleSpec scale)
      : id_(std::move(item_id)), scores_(std::move(scores)), scale_(scale) {
    if (scores_.empty()) throw DataError("empty sample");
    for (std::size_t i = 0; i < scores_.size(); ++i) {
      const double s = scores_[i];
      if (!std::isfinite(s))
        throw DataError("non-finite score at position " + std::to_string(i) + " of item '" + id_ + "'");
      if (!scale_.contains(s))
        throw DataError("score " + std::to_string(s) + " at position " + std::to_string(i) + " of item '" +
                        id_ + "' lies outside the scale");
    }
  }

  const std::string& id() const noexcept { return id_; }
  std::span<const double> scores() const noexcept { return scores_; }
  const ScaleSpec& scale() const noexcept { return scale_; }
  std::size_t size() const noexcept { return scores_.size(); }

 private:
  std::string id_;
  std::vector<double> scores_;
  ScaleSpec scale_;
};

}  // namespace itemdev

#endif  // ITEMDEV_SAMPLE_HPP

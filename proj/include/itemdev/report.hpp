#ifndef ITEMDEV_REPORT_HPP
#define ITEMDEV_REPORT_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "itemdev/dataset.hpp"
#include "itemdev/descriptive.hpp"
#include "itemdev/diagnostics.hpp"
#include "itemdev/distributions.hpp"
#include "itemdev/index.hpp"
#include "itemdev/parallel.hpp"
#include "itemdev/random.hpp"

namespace itemdev {

inline constexpr int kReportSchemaVersion = 1;

inline constexpr const char* kWarnDegenerate = "degenerate: zero variance";
inline constexpr const char* kWarnAboveBound = "sample sd exceeds Popoviciu bound (n−1 convention)";
inline constexpr const char* kWarnNoTheoreticalVar = "n ≤ 3: theoretical variance undefined";
inline constexpr const char* kWarnCorrectedInference = "insufficient sample for corrected inference";

struct AnalyzeOptions {
  std::size_t n_boot = 0;  // 0 disables the bootstrap
  double ci_level = 0.95;
  double alpha = 0.05;
  std::uint64_t seed = kDefaultSeed;
  bool qq = false;
  unsigned threads = 1;
  std::optional<double> target;
};

struct ItemReport {
  DescriptiveSummary summary;
  IndexResult index;
  std::optional<double> entropy;  // nats
  std::optional<BootstrapReport> bootstrap;
  std::optional<QQData> qq;
  std::vector<std::string> warnings;
};

inline ItemReport analyze_item(const ItemSample& item, const AnalyzeOptions& opt) {
  ItemReport rep;
  rep.summary = summarize(item);
  rep.index = compute_index(item, opt.target);
  const bool degenerate = rep.summary.sd_sample == 0.0;
  if (degenerate) rep.warnings.emplace_back(kWarnDegenerate);
  if (rep.summary.sd_sample > popoviciu_sd_bound(item.scale())) rep.warnings.emplace_back(kWarnAboveBound);
  if (item.size() <= 3) rep.warnings.emplace_back(kWarnNoTheoreticalVar);
  if (item.size() == 2) rep.warnings.emplace_back(kWarnCorrectedInference);
  if (!degenerate) rep.entropy = entropy_proxy(rep.summary.sd_sample);

  if (opt.n_boot > 0) {
    if (degenerate)
      rep.warnings.emplace_back("bootstrap skipped: degenerate item");
    else
      rep.bootstrap = bootstrap_index(item, opt.n_boot, opt.ci_level, opt.alpha, opt.seed, 1, opt.target);
  }
  if (opt.qq) {
    if (degenerate || item.size() < 3)
      rep.warnings.emplace_back("qq skipped: needs n >= 3 and nonzero variance");
    else
      rep.qq = qq_data(item);
  }
  return rep;
}

/// One report per item, in input column order. Items run concurrently when
/// opt.threads > 1; the result does not depend on it.
inline std::vector<ItemReport> analyze(const Dataset& dataset, const AnalyzeOptions& opt) {
  std::vector<ItemReport> reports(dataset.items.size());
  parallel_for(dataset.items.size(), opt.threads,
               [&](std::size_t i) { reports[i] = analyze_item(dataset.items[i], opt); });
  return reports;
}

// ---------------------------------------------------------------------------
// Rendering. Every number goes out with 6 significant digits.

namespace detail {

inline std::string fmt6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// The double the 6-digit rendering denotes.
inline double round6(double v) { return std::strtod(fmt6(v).c_str(), nullptr); }

inline nlohmann::ordered_json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return round6(v);
}

inline nlohmann::ordered_json json_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return json_number(*v);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(const std::optional<double>& v) { return v ? fmt6(*v) : std::string(); }

}  // namespace detail

inline nlohmann::ordered_json to_json(const BootstrapReport& b) {
  nlohmann::ordered_json j;
  j["n_boot"] = b.n_boot;
  j["seed"] = b.seed;
  j["ci_level"] = detail::json_number(b.ci_level);
  j["ci_low"] = detail::json_number(b.ci_low);
  j["ci_high"] = detail::json_number(b.ci_high);
  j["alpha"] = detail::json_number(b.alpha);
  j["critical_value"] = detail::json_number(b.critical_value);
  j["acceptance_low"] = detail::json_number(b.acceptance_low);
  j["acceptance_high"] = detail::json_number(b.acceptance_high);
  j["n_finite"] = b.replicates.size();
  j["n_outside"] = b.n_outside;
  j["proportion_outside"] =
      detail::json_number(static_cast<double>(b.n_outside) / static_cast<double>(b.replicates.size()));
  j["divergent_count"] = b.divergent_count;
  j["replicate_mean"] = detail::json_number(b.replicate_mean);
  j["replicate_sd"] = detail::json_number(b.replicate_sd);
  return j;
}

inline nlohmann::ordered_json to_json(const ItemReport& r) {
  using detail::json_number;
  nlohmann::ordered_json j;
  j["item_id"] = r.index.item_id;
  j["n"] = r.summary.n;

  auto& s = j["summary"];
  s["mean"] = json_number(r.summary.mean);
  s["var_pop"] = json_number(r.summary.var_pop);
  s["var_sample"] = json_number(r.summary.var_sample);
  s["sd_sample"] = json_number(r.summary.sd_sample);
  s["skewness"] = json_number(r.summary.skewness);
  s["kurtosis"] = json_number(r.summary.kurtosis);
  s["excess_kurtosis"] = json_number(r.summary.excess_kurtosis);
  s["min"] = json_number(r.summary.min);
  s["max"] = json_number(r.summary.max);
  s["range"] = json_number(r.summary.range);

  auto& x = j["index"];
  x["target"] = json_number(r.index.target);
  x["numerator"] = json_number(r.index.numerator);
  x["sd"] = json_number(r.index.sd);
  x["d_hat"] = json_number(r.index.d_hat);
  x["d_g"] = json_number(r.index.d_g);
  x["correction_J"] = json_number(r.index.correction_J);
  x["theoretical_var"] = json_number(r.index.theoretical_var);
  x["classification"] = std::string(to_string(r.index.classification));
  auto& b = x["bounds"];
  b["sd_max"] = json_number(r.index.bounds.sd_max);
  b["numerator_min"] = json_number(r.index.bounds.numerator_min);
  b["numerator_max"] = json_number(r.index.bounds.numerator_max);
  b["x_norm"] = json_number(r.index.bounds.x_norm);
  b["at_max_sd_index"] = json_number(r.index.bounds.at_max_sd_index);

  j["entropy"] = json_number(r.entropy);
  j["bootstrap"] = r.bootstrap ? to_json(*r.bootstrap) : nlohmann::ordered_json(nullptr);
  if (r.qq) {
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : r.qq->points)
      pts.push_back({json_number(p.theoretical_quantile), json_number(p.sample_quantile)});
    j["qq"] = std::move(pts);
  } else {
    j["qq"] = nullptr;
  }
  j["warnings"] = r.warnings;
  return j;
}

enum class ReportFormat { JsonDoc, CsvTable };

inline void emit_report(const Dataset& dataset, std::span<const ItemReport> reports, const AnalyzeOptions& opt,
                        ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::CsvTable) {
    out << "item_id,n,mean,sd,d_hat,d_g,theoretical_var,classification,entropy,warning_count\n";
    for (const auto& r : reports) {
      out << detail::csv_field(r.index.item_id) << ',' << r.summary.n << ',' << detail::fmt6(r.summary.mean) << ','
          << detail::fmt6(r.summary.sd_sample) << ',' << detail::fmt6(r.index.d_hat) << ','
          << detail::csv_number(r.index.d_g) << ',' << detail::csv_number(r.index.theoretical_var) << ','
          << to_string(r.index.classification) << ',' << detail::csv_number(r.entropy) << ','
          << r.warnings.size() << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["scale"] = {{"min", detail::json_number(dataset.scale.min())},
                  {"max", detail::json_number(dataset.scale.max())},
                  {"midpoint", detail::json_number(dataset.scale.midpoint())}};
  doc["respondent_count"] = dataset.respondent_count;
  doc["dropped_cells"] = dataset.dropped_cells;
  doc["options"] = {{"seed", opt.seed},
                    {"boot", opt.n_boot},
                    {"ci", detail::json_number(opt.ci_level)},
                    {"alpha", detail::json_number(opt.alpha)},
                    {"qq", opt.qq},
                    {"target", detail::json_number(opt.target)}};
  auto items = nlohmann::ordered_json::array();
  for (const auto& r : reports) items.push_back(to_json(r));
  doc["items"] = std::move(items);
  out << doc.dump(2) << '\n';
}

/// Writes to `path`, or to stdout when path is empty or "-".
template <typename Writer>
void write_output(const std::string& path, Writer&& writer, std::ostream& stdout_stream) {
  if (path.empty() || path == "-") {
    writer(stdout_stream);
    stdout_stream.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  writer(file);
  file.flush();
  if (!file) throw IoError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Plot data: whitespace-free CSV with a one-line header.

enum class PlotKind { NormalPdf, TPdf, QQ, BootstrapHist };

struct PlotParams {
  std::vector<int> dfs{1, 9, 29, 49};
  const ItemSample* item = nullptr;  // QQ and BootstrapHist
  std::size_t n_boot = 2000;
  std::uint64_t seed = kDefaultSeed;
  double alpha = 0.05;
  double ci_level = 0.95;
  std::size_t bins = 40;
  unsigned threads = 1;
};

namespace detail {

// Curves are drawn on [-4, 4] in steps of 0.01.
inline constexpr int kGridHalfSteps = 400;
inline double grid_x(int i) { return static_cast<double>(i - kGridHalfSteps) / 100.0; }

}  // namespace detail

inline void emit_plotdata(PlotKind kind, const PlotParams& params, std::ostream& out) {
  using detail::fmt6;
  switch (kind) {
    case PlotKind::NormalPdf:
      out << "x,normal_pdf\n";
      for (int i = 0; i <= 2 * detail::kGridHalfSteps; ++i)
        out << fmt6(detail::grid_x(i)) << ',' << fmt6(normal_pdf(detail::grid_x(i))) << '\n';
      return;
    case PlotKind::TPdf:
      if (params.dfs.empty()) throw std::invalid_argument("t pdf plot needs at least one df");
      out << 'x';
      for (int df : params.dfs) {
        if (df < 1) throw std::invalid_argument("degrees of freedom must be at least 1");
        out << ",t_df" << df;
      }
      out << '\n';
      for (int i = 0; i <= 2 * detail::kGridHalfSteps; ++i) {
        const double x = detail::grid_x(i);
        out << fmt6(x);
        for (int df : params.dfs) out << ',' << fmt6(t_pdf(x, df));
        out << '\n';
      }
      return;
    case PlotKind::QQ: {
      if (!params.item) throw DataError("unknown item id");
      const QQData qq = qq_data(*params.item);
      out << "theoretical_quantile,sample_quantile\n";
      for (const auto& p : qq.points) out << fmt6(p.theoretical_quantile) << ',' << fmt6(p.sample_quantile) << '\n';
      return;
    }
    case PlotKind::BootstrapHist: {
      if (!params.item) throw DataError("unknown item id");
      if (params.bins < 1) throw std::invalid_argument("bins must be at least 1");
      const BootstrapReport b =
          bootstrap_index(*params.item, params.n_boot, params.ci_level, params.alpha, params.seed, params.threads);
      const auto [lo_it, hi_it] = std::minmax_element(b.replicates.begin(), b.replicates.end());
      const double lo = *lo_it;
      const double width = (*hi_it - lo) / static_cast<double>(params.bins);
      std::vector<std::size_t> counts(params.bins, 0);
      for (double d : b.replicates) {
        const auto k = width > 0.0 ? static_cast<std::size_t>((d - lo) / width) : 0;
        ++counts[std::min(k, params.bins - 1)];
      }
      out << "bin_center,count\n";
      for (std::size_t k = 0; k < params.bins; ++k)
        out << fmt6(lo + (static_cast<double>(k) + 0.5) * width) << ',' << counts[k] << '\n';
      return;
    }
  }
}

}  // namespace itemdev

#endif  // ITEMDEV_REPORT_HPP

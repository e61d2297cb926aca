// itemdev: batch command-line front end for the item deviation toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 I/O error.

#include <cstdint>
#include <cmath>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "itemdev/itemdev.hpp"

namespace {

using itemdev::detail::fmt6;
using itemdev::detail::json_number;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kIo = 3 };

struct InputFlags {
  std::string path;
  double scale_min = 0.0;
  double scale_max = 0.0;
  std::string missing = "drop";
};

struct OutputFlags {
  std::string format = "json";
  std::string out = "-";
};

void add_input_flags(CLI::App* cmd, InputFlags& in, bool required) {
  auto* path = cmd->add_option("input", in.path, "CSV file: header of item ids, one respondent per row");
  auto* lo = cmd->add_option("--scale-min", in.scale_min, "Smallest response the scale allows");
  auto* hi = cmd->add_option("--scale-max", in.scale_max, "Largest response the scale allows");
  if (required) {
    path->required()->check(CLI::ExistingFile);
    lo->required();
    hi->required();
  } else {
    lo->needs(path);
    hi->needs(path);
    path->needs(lo)->needs(hi);
  }
  cmd->add_option("--missing", in.missing, "Missing-cell policy")->check(CLI::IsMember({"drop", "fail"}));
}

void add_output_flags(CLI::App* cmd, OutputFlags& out) {
  cmd->add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", out.out, "Output path ('-' for stdout)");
}

itemdev::Dataset load(const InputFlags& in) {
  return itemdev::ingest_csv(in.path, in.scale_min, in.scale_max,
                             in.missing == "fail" ? itemdev::MissingPolicy::FailOnMissing
                                                  : itemdev::MissingPolicy::DropCell);
}

std::vector<std::size_t> parse_size_list(const std::vector<std::string>& raw) {
  std::vector<std::size_t> out;
  for (const auto& s : raw) out.push_back(std::stoul(s));
  return out;
}

nlohmann::ordered_json bootstrap_json(const itemdev::BootstrapReport& b, bool with_replicates) {
  nlohmann::ordered_json j;
  j["item_id"] = b.item_id;
  j["n"] = b.n;
  const auto body = itemdev::to_json(b);
  for (const auto& [k, v] : body.items()) j[k] = v;
  if (with_replicates) {
    auto reps = nlohmann::ordered_json::array();
    for (double d : b.replicates) reps.push_back(json_number(d));
    j["replicates"] = std::move(reps);
  }
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Standardized item deviation index for pilot-test survey items"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "itemdev 1.0.0");

  // analyze -----------------------------------------------------------------
  InputFlags an_in;
  OutputFlags an_out;
  itemdev::AnalyzeOptions an_opt;
  std::optional<double> an_target;
  auto* analyze = app.add_subcommand("analyze", "Per-item descriptive and index report");
  add_input_flags(analyze, an_in, true);
  add_output_flags(analyze, an_out);
  analyze->add_option("--seed", an_opt.seed, "Seed for the bootstrap");
  analyze->add_option("--boot", an_opt.n_boot, "Bootstrap resamples per item (0 disables)");
  analyze->add_option("--ci", an_opt.ci_level, "Bootstrap percentile interval level")->check(CLI::Range(0.0, 1.0));
  analyze->add_option("--alpha", an_opt.alpha, "Significance level for the acceptance region")
      ->check(CLI::Range(0.0, 1.0));
  analyze->add_flag("--qq", an_opt.qq, "Include residual QQ points");
  analyze->add_option("--target", an_target, "Target value replacing the scale midpoint");
  analyze->add_option("--threads", an_opt.threads, "Worker threads")->check(CLI::PositiveNumber);

  // bootstrap ---------------------------------------------------------------
  InputFlags bs_in;
  OutputFlags bs_out;
  std::size_t bs_n = 2000;
  double bs_ci = 0.95;
  double bs_alpha = 0.05;
  std::uint64_t bs_seed = itemdev::kDefaultSeed;
  unsigned bs_threads = 1;
  std::string bs_item;
  bool bs_replicates = false;
  auto* bootstrap = app.add_subcommand("bootstrap", "Bootstrap sampling distribution of the index per item");
  add_input_flags(bootstrap, bs_in, true);
  add_output_flags(bootstrap, bs_out);
  bootstrap->add_option("--boot", bs_n, "Number of resamples")->check(CLI::PositiveNumber);
  bootstrap->add_option("--ci", bs_ci, "Percentile interval level")->check(CLI::Range(0.0, 1.0));
  bootstrap->add_option("--alpha", bs_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  bootstrap->add_option("--seed", bs_seed, "Random seed");
  bootstrap->add_option("--threads", bs_threads, "Worker threads")->check(CLI::PositiveNumber);
  bootstrap->add_option("--item", bs_item, "Restrict to one item id");
  bootstrap->add_flag("--replicates", bs_replicates, "Include every replicate (JSON only)");

  // simulate ----------------------------------------------------------------
  OutputFlags sim_out;
  std::string sim_scenario = "bias";
  std::size_t sim_n = 30;
  std::optional<double> sim_mu;
  std::optional<double> sim_delta;
  double sim_sigma = 0.5;
  double sim_min = 1.0;
  double sim_max = 5.0;
  std::size_t sim_reps = 20000;
  std::uint64_t sim_seed = itemdev::kDefaultSeed;
  unsigned sim_threads = 1;
  std::vector<std::string> sim_ns{"5", "10", "30", "100", "1000"};
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo bias and t-to-normal convergence scenarios");
  add_output_flags(simulate, sim_out);
  simulate->add_option("--scenario", sim_scenario, "bias or slutsky")->check(CLI::IsMember({"bias", "slutsky"}));
  simulate->add_option("--n", sim_n, "Sample size (bias)");
  auto* mu_opt = simulate->add_option("--mu", sim_mu, "True mean (bias; default: scale midpoint)");
  simulate->add_option("--delta", sim_delta, "True standardized deviation (bias)")->excludes(mu_opt);
  simulate->add_option("--sigma", sim_sigma, "True sd (bias)");
  simulate->add_option("--scale-min", sim_min, "Scale minimum (bias)");
  simulate->add_option("--scale-max", sim_max, "Scale maximum (bias)");
  simulate->add_option("--reps", sim_reps, "Replications")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "Random seed");
  simulate->add_option("--threads", sim_threads, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--n-values", sim_ns, "Sample sizes (slutsky)")->delimiter(',');

  // dist --------------------------------------------------------------------
  int dist_df = 29;
  double dist_alpha = 0.05;
  std::string dist_tails = "two";
  std::optional<double> dist_stat;
  bool dist_table = false;
  double dist_step = 0.5;
  std::string dist_out = "-";
  auto* dist = app.add_subcommand("dist", "Tabulate normal/t densities, critical values and test decisions");
  dist->add_option("--df", dist_df, "Degrees of freedom")->check(CLI::PositiveNumber);
  dist->add_option("--alpha", dist_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  dist->add_option("--tails", dist_tails, "one or two")->check(CLI::IsMember({"one", "two"}));
  dist->add_option("--statistic", dist_stat, "Test statistic to decide on");
  dist->add_flag("--table", dist_table, "Tabulate pdf and cdf on [-4, 4]");
  dist->add_option("--step", dist_step, "Grid step for --table")->check(CLI::PositiveNumber);
  dist->add_option("--out", dist_out, "Output path ('-' for stdout)");

  // plotdata ----------------------------------------------------------------
  InputFlags pl_in;
  std::string pl_kind;
  std::string pl_out = "-";
  std::string pl_item;
  itemdev::PlotParams pl;
  auto* plot = app.add_subcommand("plotdata", "Two-column CSV for density, QQ and bootstrap plots");
  add_input_flags(plot, pl_in, false);
  plot->add_option("--kind", pl_kind, "normal, t, qq or bootstrap")
      ->required()
      ->check(CLI::IsMember({"normal", "t", "qq", "bootstrap"}));
  plot->add_option("--df", pl.dfs, "Degrees of freedom for --kind t")->delimiter(',');
  plot->add_option("--item", pl_item, "Item id for qq/bootstrap");
  plot->add_option("--boot", pl.n_boot, "Resamples for --kind bootstrap")->check(CLI::PositiveNumber);
  plot->add_option("--bins", pl.bins, "Histogram bins")->check(CLI::PositiveNumber);
  plot->add_option("--seed", pl.seed, "Random seed");
  plot->add_option("--threads", pl.threads, "Worker threads")->check(CLI::PositiveNumber);
  plot->add_option("--out", pl_out, "Output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  if (analyze->parsed()) {
    an_opt.target = an_target;
    const auto dataset = load(an_in);
    const auto reports = itemdev::analyze(dataset, an_opt);
    const auto format = an_out.format == "csv" ? itemdev::ReportFormat::CsvTable : itemdev::ReportFormat::JsonDoc;
    itemdev::write_output(
        an_out.out, [&](std::ostream& os) { itemdev::emit_report(dataset, reports, an_opt, format, os); }, std::cout);
    return kOk;
  }

  if (bootstrap->parsed()) {
    const auto dataset = load(bs_in);
    std::vector<const itemdev::ItemSample*> items;
    if (!bs_item.empty()) {
      const auto* item = dataset.find(bs_item);
      if (!item) throw itemdev::DataError("unknown item id '" + bs_item + "'");
      items.push_back(item);
    } else {
      for (const auto& item : dataset.items) items.push_back(&item);
    }
    std::vector<std::optional<itemdev::BootstrapReport>> results;
    for (const auto* item : items) {
      if (itemdev::summarize(*item).sd_sample == 0.0) {
        if (!bs_item.empty()) throw itemdev::DataError("bootstrap undefined for degenerate item");
        results.emplace_back();
        continue;
      }
      results.push_back(itemdev::bootstrap_index(*item, bs_n, bs_ci, bs_alpha, bs_seed, bs_threads));
    }
    itemdev::write_output(
        bs_out.out,
        [&](std::ostream& os) {
          if (bs_out.format == "csv") {
            os << "item_id,n,n_boot,ci_low,ci_high,acceptance_low,acceptance_high,n_outside,proportion_outside,"
                  "divergent_count\n";
            for (std::size_t i = 0; i < items.size(); ++i) {
              os << itemdev::detail::csv_field(items[i]->id()) << ',' << items[i]->size() << ',';
              const auto& b = results[i];
              if (!b) {
                os << bs_n << ",,,,,,,\n";
                continue;
              }
              os << b->n_boot << ',' << fmt6(b->ci_low) << ',' << fmt6(b->ci_high) << ','
                 << fmt6(b->acceptance_low) << ',' << fmt6(b->acceptance_high) << ',' << b->n_outside << ','
                 << fmt6(static_cast<double>(b->n_outside) / static_cast<double>(b->replicates.size())) << ','
                 << b->divergent_count << '\n';
            }
            return;
          }
          nlohmann::ordered_json doc;
          doc["schema_version"] = itemdev::kReportSchemaVersion;
          auto arr = nlohmann::ordered_json::array();
          for (std::size_t i = 0; i < items.size(); ++i) {
            if (results[i]) {
              arr.push_back(bootstrap_json(*results[i], bs_replicates));
            } else {
              arr.push_back({{"item_id", items[i]->id()},
                             {"n", items[i]->size()},
                             {"warning", "bootstrap undefined for degenerate item"}});
            }
          }
          doc["items"] = std::move(arr);
          os << doc.dump(2) << '\n';
        },
        std::cout);
    return kOk;
  }

  if (simulate->parsed()) {
    if (sim_scenario == "bias") {
      const itemdev::ScaleSpec scale(sim_min, sim_max);
      const double mu = sim_mu ? *sim_mu : scale.midpoint() + sim_delta.value_or(0.0) * sim_sigma;
      const auto s = itemdev::simulate_bias(sim_n, mu, sim_sigma, scale, sim_reps, sim_seed, sim_threads);
      const auto theory = itemdev::theoretical_moments(sim_n);
      itemdev::write_output(
          sim_out.out,
          [&](std::ostream& os) {
            if (sim_out.format == "csv") {
              os << "scenario,n,reps,seed,true_delta,mean_d_hat,mean_d_g,empirical_var_d_hat,bias_d_hat,bias_d_g\n"
                 << s.scenario << ',' << s.n << ',' << s.reps << ',' << s.seed << ',' << fmt6(s.true_delta) << ','
                 << fmt6(s.mean_d_hat) << ',' << fmt6(s.mean_d_g) << ',' << fmt6(s.empirical_var_d_hat) << ','
                 << fmt6(s.bias_d_hat) << ',' << fmt6(s.bias_d_g) << '\n';
              return;
            }
            nlohmann::ordered_json j;
            j["schema_version"] = itemdev::kReportSchemaVersion;
            j["scenario"] = s.scenario;
            j["n"] = s.n;
            j["reps"] = s.reps;
            j["seed"] = s.seed;
            j["true_delta"] = json_number(s.true_delta);
            j["mean_d_hat"] = json_number(s.mean_d_hat);
            j["mean_d_g"] = json_number(s.mean_d_g);
            j["empirical_var_d_hat"] = json_number(s.empirical_var_d_hat);
            j["theoretical_var_d_hat_null"] = json_number(theory.variance);
            j["bias_d_hat"] = json_number(s.bias_d_hat);
            j["bias_d_g"] = json_number(s.bias_d_g);
            os << j.dump(2) << '\n';
          },
          std::cout);
    } else {
      const auto ns = parse_size_list(sim_ns);
      const auto rows = itemdev::simulate_slutsky(ns, sim_reps, sim_seed, sim_threads);
      itemdev::write_output(
          sim_out.out,
          [&](std::ostream& os) {
            if (sim_out.format == "csv") {
              os << "n,reps,threshold,tail_probability,t_tail_probability\n";
              for (const auto& r : rows)
                os << r.n << ',' << r.reps << ',' << fmt6(r.threshold) << ',' << fmt6(r.tail_probability) << ','
                   << fmt6(r.t_tail_probability) << '\n';
              return;
            }
            nlohmann::ordered_json j;
            j["schema_version"] = itemdev::kReportSchemaVersion;
            j["scenario"] = "slutsky";
            j["seed"] = sim_seed;
            auto arr = nlohmann::ordered_json::array();
            for (const auto& r : rows)
              arr.push_back({{"n", r.n},
                             {"reps", r.reps},
                             {"threshold", json_number(r.threshold)},
                             {"tail_probability", json_number(r.tail_probability)},
                             {"t_tail_probability", json_number(r.t_tail_probability)}});
            j["rows"] = std::move(arr);
            os << j.dump(2) << '\n';
          },
          std::cout);
    }
    return kOk;
  }

  if (dist->parsed()) {
    const auto tails = dist_tails == "one" ? itemdev::Tails::One : itemdev::Tails::Two;
    itemdev::write_output(
        dist_out,
        [&](std::ostream& os) {
          if (dist_table) {
            os << "x,normal_pdf,t_pdf,t_cdf\n";
            const auto steps = static_cast<long>(std::floor(8.0 / dist_step + 1e-9));
            for (long i = 0; i <= steps; ++i) {
              const double x = -4.0 + static_cast<double>(i) * dist_step;
              os << fmt6(x) << ',' << fmt6(itemdev::normal_pdf(x)) << ',' << fmt6(itemdev::t_pdf(x, dist_df)) << ','
                 << fmt6(itemdev::t_cdf(x, dist_df)) << '\n';
            }
            return;
          }
          const double crit = itemdev::t_critical(dist_alpha, dist_df, tails);
          const double normal_crit =
              itemdev::special::normal_quantile(1.0 - (tails == itemdev::Tails::Two ? dist_alpha / 2 : dist_alpha));
          os << "df,alpha,tails,critical_value,normal_critical_value";
          if (dist_stat) os << ",statistic,p_value,decision";
          os << '\n' << dist_df << ',' << fmt6(dist_alpha) << ',' << dist_tails << ',' << fmt6(crit) << ','
             << fmt6(normal_crit);
          if (dist_stat) {
            const auto outcome =
                itemdev::nhst_decide(*dist_stat, dist_df, dist_alpha, itemdev::Approach::NeymanPearson, tails);
            os << ',' << fmt6(*dist_stat) << ',' << fmt6(outcome.p_value) << ',' << to_string(outcome.decision);
          }
          os << '\n';
        },
        std::cout);
    return kOk;
  }

  if (plot->parsed()) {
    static const std::map<std::string, itemdev::PlotKind> kinds = {{"normal", itemdev::PlotKind::NormalPdf},
                                                                   {"t", itemdev::PlotKind::TPdf},
                                                                   {"qq", itemdev::PlotKind::QQ},
                                                                   {"bootstrap", itemdev::PlotKind::BootstrapHist}};
    const auto kind = kinds.at(pl_kind);
    std::optional<itemdev::Dataset> dataset;
    if (kind == itemdev::PlotKind::QQ || kind == itemdev::PlotKind::BootstrapHist) {
      if (pl_in.path.empty() || pl_item.empty()) {
        std::cerr << "plotdata --kind " << pl_kind << " needs an input file, scale flags and --item\n";
        return kUsage;
      }
      dataset = load(pl_in);
      pl.item = dataset->find(pl_item);
      if (!pl.item) throw itemdev::DataError("unknown item id '" + pl_item + "'");
    }
    itemdev::write_output(pl_out, [&](std::ostream& os) { itemdev::emit_plotdata(kind, pl, os); }, std::cout);
    return kOk;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const itemdev::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const itemdev::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
}

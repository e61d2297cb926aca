#include "itemdev/report.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gtest/gtest.h"
#include "itemdev/dataset.hpp"
#include "test_items.hpp"

namespace itemdev {
namespace {

const ScaleSpec kFive{1.0, 5.0};

std::string grid_csv(std::size_t rows, std::size_t cols) {
  std::ostringstream os;
  for (std::size_t c = 0; c < cols; ++c) os << (c ? "," : "") << "item" << c + 1;
  os << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) os << (c ? "," : "") << 1 + (r * (c + 1) + c) % 5;
    os << '\n';
  }
  return os.str();
}

Dataset parse(const std::string& text, MissingPolicy policy = MissingPolicy::DropCell) {
  std::istringstream in(text);
  return parse_csv(in, kFive, policy);
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(IngestTest, WellFormedGrid) {
  const auto ds = parse(grid_csv(30, 4));
  ASSERT_EQ(ds.items.size(), 4u);
  EXPECT_EQ(ds.respondent_count, 30u);
  EXPECT_EQ(ds.dropped_cells, 0u);
  for (const auto& item : ds.items) EXPECT_EQ(item.size(), 30u);
  EXPECT_EQ(ds.items[2].id(), "item3");
  EXPECT_NE(ds.find("item4"), nullptr);
  EXPECT_EQ(ds.find("nope"), nullptr);
}

TEST(IngestTest, OutOfScaleNamesRowAndColumn) {
  try {
    parse("a,b\n1,2\n3,6\n");
    FAIL() << "expected a data error";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'b'"), std::string::npos) << msg;
  }
}

TEST(IngestTest, DropCellIsPerItem) {
  std::string text = grid_csv(30, 4);
  // Blank out item2 in the first data row.
  const auto first_row = text.find('\n') + 1;
  const auto comma1 = text.find(',', first_row);
  const auto comma2 = text.find(',', comma1 + 1);
  text.erase(comma1 + 1, comma2 - comma1 - 1);
  const auto ds = parse(text);
  EXPECT_EQ(ds.dropped_cells, 1u);
  EXPECT_EQ(ds.items[0].size(), 30u);
  EXPECT_EQ(ds.items[1].size(), 29u);
  EXPECT_EQ(ds.items[2].size(), 30u);
  EXPECT_THROW(parse(text, MissingPolicy::FailOnMissing), DataError);
}

TEST(IngestTest, NaAndWhitespaceAndCrlf) {
  const auto ds = parse("\xEF\xBB\xBF\"x\", y \r\n 1 ,NA\r\n2,3\r\n\r\n");
  ASSERT_EQ(ds.items.size(), 2u);
  EXPECT_EQ(ds.items[0].id(), "x");
  EXPECT_EQ(ds.items[1].id(), "y");
  EXPECT_EQ(ds.items[0].size(), 2u);
  EXPECT_EQ(ds.items[1].size(), 1u);
  EXPECT_EQ(ds.dropped_cells, 1u);
}

TEST(IngestTest, Errors) {
  EXPECT_THROW(parse("a,a\n1,2\n"), DataError);
  EXPECT_THROW(parse("a,b\n1,abc\n"), DataError);
  EXPECT_THROW(parse("a,b\n1,3x\n"), DataError);
  EXPECT_THROW(parse("a,b\n1,inf\n"), DataError);
  EXPECT_THROW(parse("a,b\n1,2,3\n"), DataError);
  EXPECT_THROW(parse("a,b\n1,\n"), DataError);  // b ends up empty
  EXPECT_THROW(parse(""), DataError);
  EXPECT_THROW(ingest_csv("/nonexistent/file.csv", 1, 5, MissingPolicy::DropCell), IoError);
}

Dataset engineered_dataset() {
  Dataset ds;
  ds.scale = kFive;
  ds.respondent_count = 30;
  ds.items.push_back(testing_items::engineered_item());
  ds.items.emplace_back("flat", std::vector<double>(30, 5.0), kFive);
  ds.items.emplace_back("copy", testing_items::engineered_scores(), kFive);
  return ds;
}

TEST(AnalyzeTest, WorkedScenarioAndDegenerateItem) {
  AnalyzeOptions opt;
  opt.n_boot = 200;
  opt.qq = true;
  const auto ds = engineered_dataset();
  const auto reports = analyze(ds, opt);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_NEAR(reports[0].index.d_hat, 3.0, 5e-3);
  EXPECT_TRUE(reports[0].bootstrap.has_value());
  EXPECT_TRUE(reports[0].qq.has_value());
  EXPECT_TRUE(reports[0].warnings.empty());

  const auto& flat = reports[1];
  EXPECT_EQ(flat.index.classification, Classification::PositiveDivergent);
  EXPECT_NE(std::find(flat.warnings.begin(), flat.warnings.end(), kWarnDegenerate), flat.warnings.end());
  EXPECT_FALSE(flat.entropy.has_value());
  EXPECT_FALSE(flat.bootstrap.has_value());

  auto a = to_json(reports[0]);
  auto c = to_json(reports[2]);
  a.erase("item_id");
  c.erase("item_id");
  EXPECT_EQ(a.dump(), c.dump());
}

TEST(AnalyzeTest, SmallSampleWarnings) {
  Dataset ds;
  ds.scale = kFive;
  ds.items.emplace_back("pair", std::vector<double>{1.0, 5.0}, kFive);
  const auto r = analyze(ds, {}).front();
  const auto has = [&](const char* w) { return std::find(r.warnings.begin(), r.warnings.end(), w) != r.warnings.end(); };
  EXPECT_TRUE(has(kWarnAboveBound));
  EXPECT_TRUE(has(kWarnNoTheoreticalVar));
  EXPECT_TRUE(has(kWarnCorrectedInference));
  EXPECT_EQ(*r.index.d_g, 0.0);
}

TEST(EmitReportTest, CsvTableShape) {
  const auto ds = parse(grid_csv(30, 4));
  AnalyzeOptions opt;
  const auto reports = analyze(ds, opt);
  std::ostringstream os;
  emit_report(ds, reports, opt, ReportFormat::CsvTable, os);
  const std::string out = os.str();
  EXPECT_EQ(count_lines(out), 5u);
  EXPECT_EQ(out.substr(0, out.find('\n')),
            "item_id,n,mean,sd,d_hat,d_g,theoretical_var,classification,entropy,warning_count");
}

TEST(EmitReportTest, DeterministicAcrossRunsAndThreads) {
  const auto ds = parse(grid_csv(30, 6));
  AnalyzeOptions opt;
  opt.n_boot = 500;
  opt.qq = true;
  std::string outputs[3];
  for (int i = 0; i < 3; ++i) {
    opt.threads = 1 + 2 * i;
    std::ostringstream os;
    emit_report(ds, analyze(ds, opt), opt, ReportFormat::JsonDoc, os);
    outputs[i] = os.str();
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_EQ(outputs[0], outputs[2]);
}

TEST(EmitReportTest, JsonRoundTripsRenderedNumbers) {
  const auto ds = engineered_dataset();
  AnalyzeOptions opt;
  opt.n_boot = 300;
  const auto reports = analyze(ds, opt);
  std::ostringstream os;
  emit_report(ds, reports, opt, ReportFormat::JsonDoc, os);
  const auto doc = nlohmann::json::parse(os.str());
  EXPECT_EQ(doc["schema_version"], kReportSchemaVersion);
  ASSERT_EQ(doc["items"].size(), 3u);
  const auto& first = doc["items"][0];
  EXPECT_EQ(first["summary"]["mean"].get<double>(), detail::round6(reports[0].summary.mean));
  EXPECT_EQ(first["index"]["d_hat"].get<double>(), detail::round6(reports[0].index.d_hat));
  EXPECT_EQ(first["index"]["d_g"].get<double>(), detail::round6(*reports[0].index.d_g));
  EXPECT_EQ(first["index"]["theoretical_var"].get<double>(), detail::round6(*reports[0].index.theoretical_var));
  EXPECT_EQ(first["bootstrap"]["ci_low"].get<double>(), detail::round6(reports[0].bootstrap->ci_low));
  EXPECT_EQ(first["entropy"].get<double>(), detail::round6(*reports[0].entropy));
  EXPECT_EQ(doc["items"][1]["index"]["d_hat"], "+inf");
  EXPECT_TRUE(doc["items"][1]["index"]["d_g"].is_null());
  EXPECT_TRUE(doc["items"][1]["summary"]["skewness"].is_null());
  // Field order is stable in the rendered text.
  EXPECT_LT(os.str().find("\"item_id\""), os.str().find("\"summary\""));
}

TEST(Fmt6Test, SixSignificantDigits) {
  EXPECT_EQ(detail::fmt6(3.0), "3");
  EXPECT_EQ(detail::fmt6(0.0358024691358), "0.0358025");
  EXPECT_EQ(detail::fmt6(-0.0), "0");
  EXPECT_EQ(detail::fmt6(-INFINITY), "-inf");
  EXPECT_EQ(detail::fmt6(123456789.0), "1.23457e+08");
}

TEST(PlotDataTest, NormalPdfGrid) {
  std::ostringstream os;
  emit_plotdata(PlotKind::NormalPdf, {}, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,normal_pdf");
  std::size_t rows = 0;
  bool saw_peak = false;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.find(' '), std::string::npos);
    if (line.starts_with("0,")) {
      saw_peak = true;
      EXPECT_EQ(line, "0,0.398942");
    }
  }
  EXPECT_EQ(rows, 801u);
  EXPECT_TRUE(saw_peak);
}

TEST(PlotDataTest, TPdfSeries) {
  std::ostringstream os;
  emit_plotdata(PlotKind::TPdf, {}, os);
  const std::string out = os.str();
  EXPECT_EQ(out.substr(0, out.find('\n')), "x,t_df1,t_df9,t_df29,t_df49");
  EXPECT_EQ(count_lines(out), 802u);
}

TEST(PlotDataTest, QQAndBootstrapNeedUsableItem) {
  PlotParams p;
  std::ostringstream os;
  EXPECT_THROW(emit_plotdata(PlotKind::QQ, p, os), DataError);
  const ItemSample flat("flat", {3, 3, 3, 3}, kFive);
  p.item = &flat;
  EXPECT_THROW(emit_plotdata(PlotKind::QQ, p, os), DataError);
  EXPECT_THROW(emit_plotdata(PlotKind::BootstrapHist, p, os), DataError);

  const ItemSample item = testing_items::engineered_item();
  p.item = &item;
  p.bins = 10;
  p.n_boot = 400;
  std::ostringstream hist;
  emit_plotdata(PlotKind::BootstrapHist, p, hist);
  EXPECT_EQ(count_lines(hist.str()), 11u);
  std::ostringstream qq;
  emit_plotdata(PlotKind::QQ, p, qq);
  EXPECT_EQ(count_lines(qq.str()), 31u);
}

}  // namespace
}  // namespace itemdev

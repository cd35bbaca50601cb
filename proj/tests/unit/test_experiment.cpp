#include <gtest/gtest.h>

#include <sstream>

#include "hho/experiment.hpp"

using namespace hho;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::vector<double> column(const std::string& csv, const std::string& name) {
  const auto ls = lines(csv);
  const auto head = fields(ls.at(1));
  const auto idx = std::find(head.begin(), head.end(), name) - head.begin();
  std::vector<double> out;
  for (std::size_t i = 2; i < ls.size(); ++i) out.push_back(std::stod(fields(ls[i]).at(idx)));
  return out;
}

std::string analyze(const std::string& cfg) {
  std::ostringstream os;
  cmd_analyze(parse_config(cfg), os);
  return os.str();
}

std::string simulate(const std::string& cfg) {
  std::ostringstream os;
  cmd_simulate(parse_config(cfg), os);
  return os.str();
}

const std::string kSmallSim =
    "[network]\nregion_width_m = 2000\nregion_height_m = 2000\nguard_m = 500\nmean_offspring = 1\n"
    "[simulation]\nusers = 5\nmoves = 10\ntrials = 3\nseed = 9\n";

}  // namespace

TEST(Analyze, SigmaSweepIncreasesHandoverRate) {
  const auto out = analyze("[sweep]\naxis = sigma\nvalues = 50, 100, 150, 200\n");
  const auto h = column(out, "H");
  ASSERT_EQ(h.size(), 4u);
  for (std::size_t i = 1; i < h.size(); ++i) EXPECT_GT(h[i], h[i - 1]);
  EXPECT_EQ(column(out, "sigma"), (std::vector<double>{50, 100, 150, 200}));
}

TEST(Analyze, ThresholdSweepIncreasesFailureRate) {
  const auto hf = column(analyze("[handover]\nt_pingpong_s = 8\n[sweep]\naxis = T\nvalues = 0.5, 1, 2, 4\n"), "H_f");
  ASSERT_EQ(hf.size(), 4u);
  for (std::size_t i = 1; i < hf.size(); ++i) EXPECT_GT(hf[i], hf[i - 1]);
}

TEST(Analyze, LayoutAndValues) {
  const auto out = analyze("");
  const auto ls = lines(out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "# schema_version=1");
  EXPECT_EQ(ls[1], "pair,lambda_s,sigma,V_mps,T_s,Tp_s,tx_power_sp_dbm,mean_distance_m,H_t,H,H_f,H_p,pingpong_clamped");
  EXPECT_EQ(out.back(), '\n');
  const auto m = evaluate_metrics(ExperimentSpec{}.analytic_inputs(), MeanDistanceMode::UpperBound);
  EXPECT_DOUBLE_EQ(column(out, "H")[0], m.handover_rate);
  EXPECT_DOUBLE_EQ(column(out, "H_f")[0], m.failure_rate);
}

TEST(Analyze, InvalidSpecThrowsBeforeWriting) {
  ExperimentSpec s;
  s.sigma_m = -1;
  std::ostringstream os;
  EXPECT_THROW(cmd_analyze(s, os), ConfigError);
  EXPECT_TRUE(os.str().empty());
}

TEST(Simulate, RowsPerTrialAndByteIdentical) {
  const auto a = simulate(kSmallSim);
  const auto b = simulate(kSmallSim);
  EXPECT_EQ(a, b);
  const auto ls = lines(a);
  EXPECT_EQ(ls.size(), 2u + 3u);
  EXPECT_EQ(ls[0], "# schema_version=1");
  EXPECT_EQ(fields(ls[1]).size(), fields(ls[2]).size());
  EXPECT_EQ(column(a, "trial"), (std::vector<double>{0, 1, 2}));
}

TEST(Simulate, WorkerCountDoesNotChangeOutput) {
  EXPECT_EQ(simulate(kSmallSim), simulate(kSmallSim + "workers = 3\n"));
}

TEST(Simulate, SweepMultipliesRows) {
  const auto out = simulate(kSmallSim + "[sweep]\naxis = velocity\nvalues = 30, 90\n");
  EXPECT_EQ(lines(out).size(), 2u + 6u);
  EXPECT_EQ(column(out, "point"), (std::vector<double>{0, 0, 0, 1, 1, 1}));
}

TEST(Validate, TwelveRowsPerPointAndSummary) {
  std::ostringstream os, summary;
  cmd_validate(parse_config(kSmallSim), os, summary);
  const auto ls = lines(os.str());
  EXPECT_EQ(ls.size(), 2u + 12u);
  EXPECT_NE(summary.str().find("H_t"), std::string::npos);
  EXPECT_NE(summary.str().find("S'S"), std::string::npos);
}

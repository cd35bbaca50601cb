// hho_cli: closed-form analysis, Monte Carlo campaigns and their comparison.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hho/hho.hpp"
#include "oracles.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = "-";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> workers;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "experiment file (defaults when omitted)");
  cmd->add_option("--out", o.out, "output path, '-' for stdout");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--trials", o.trials, "trials per sweep point")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
}

hho::ExperimentSpec load(const Options& o) {
  hho::ExperimentSpec s = o.config.empty() ? hho::ExperimentSpec{} : hho::load_config(o.config);
  if (o.seed) s.seed = *o.seed;
  if (o.trials) s.trials = *o.trials;
  if (o.workers) s.workers = *o.workers;
  s.validate();
  return s;
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

// Regression constants recomputed with the reference routines.
nlohmann::json fixtures() {
  using nlohmann::json;
  json j;
  j["schema_version"] = 1;

  json mq = json::array();
  for (double a : {0.0, 0.5, 1.0, 2.0, 3.3, 5.0, 8.0})
    for (double b : {0.0, 0.25, 1.0, 2.0, 4.5, 7.0, 10.0})
      mq.push_back({{"a", a}, {"b", b}, {"value", oracle::marcum_q1_ncx2(a, b)}});
  j["marcum_q1"] = mq;

  json i0 = json::array();
  for (double z : {0.0, 0.1, 1.0, 5.0, 11.5, 20.0, 29.9, 30.1, 37.25, 50.0, 100.0, 300.0})
    i0.push_back({{"z", z}, {"value", oracle::i0(z)}});
  j["i0"] = i0;

  json er = json::array();
  for (double x : {-3.0, -0.7, 0.0, 0.3, 1.0, 2.2, 4.0})
    er.push_back({{"x", x}, {"value", oracle::erf_series(x)}});
  j["erf"] = er;

  json rm = json::array();
  for (double w : {0.0, 10.0, 100.0, 400.0})
    for (double s : {50.0, 150.0})
      rm.push_back({{"w", w}, {"sigma", s}, {"value", oracle::rician_mean(w, s)}});
  j["rician_mean"] = rm;

  json mcd = json::array();
  for (double l : {1e-6, 2e-6, 1e-5, 2e-5, 1e-4})
    for (double s : {50.0, 150.0, 300.0})
      mcd.push_back({{"lambda", l}, {"sigma", s}, {"value", oracle::mean_cluster_distance(l, s)}});
  j["mean_cluster_distance"] = mcd;

  json lm = json::array();
  for (double a : {0.98, 1.0, 1.02})
    for (double q : {100.0, 500.0, 1000.0}) {
      const double ls = std::pow(q, 2.0 * (a - 1.0));
      const auto g = oracle::slope_fit_grid_search(a, q, 0.5 * ls, 1.5 * ls);
      lm.push_back({{"alpha", a},
                    {"q", q},
                    {"grid_lambda", g.lambda},
                    {"step", g.step},
                    {"l1_minimizer", oracle::slope_fit_l1_minimizer(a, q)}});
    }
  j["slope_fit"] = lm;

  const oracle::LinkBudgetDb macro{46.0, 14.0, 0.0, 128.1, 37.6};
  const oracle::LinkBudgetDb small{30.0, 5.0, 4.0, 140.7, 36.7};
  const oracle::LinkBudgetDb hot{30.0, 5.0, 0.0, 140.7, 36.7};
  struct PairDef {
    const char* name;
    int id;
    oracle::LinkBudgetDb serving, target;
  };
  const PairDef pairs[] = {{"SM", 0, macro, small}, {"S'S", 1, small, hot}, {"S'M", 2, macro, hot}};

  json ax = json::array();
  for (double d : {120.0, 350.0}) {
    const auto [near, far] = oracle::erb_axis_crossings(small, hot, d);
    ax.push_back({{"pair", "S'S"}, {"d", d}, {"near", near}, {"far", far}});
  }
  j["erb_axis"] = ax;

  // Closed-form rates at the default operating point.
  const double lambda_m = 2e-6, lambda_s = 2e-5, sigma = 150.0, v = 60.0 / 3.6;
  const double e_len = std::sqrt(std::numbers::pi / 2.0) * (200.0 + 0.3 * 200.0);
  json rt = json::array();
  for (const auto& p : pairs) {
    const double md = p.id == 0 ? 0.5 / std::sqrt(lambda_m)
                                : oracle::mean_cluster_distance(p.id == 1 ? lambda_s : lambda_m, sigma);
    const auto [k, k_f] = oracle::pair_k(p.serving, p.target, md, -3.0);
    const oracle::RateInputs in{p.id, k, k_f, md, lambda_m, lambda_s, sigma, v, 2.0, e_len, 1.0, 1.5, 25e6, 10.0};
    const auto r = oracle::rates(in);
    rt.push_back({{"pair", p.name},
                  {"mean_distance", md},
                  {"k", k},
                  {"k_f", k_f},
                  {"H_t", r.h_t},
                  {"H", r.h},
                  {"H_f", r.h_f},
                  {"H_p", r.h_p}});
  }
  j["rates_quadrature"] = rt;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Handover analysis for clustered HetNets"};
  app.require_subcommand(1);
  Options o;
  auto* analyze = app.add_subcommand("analyze", "closed-form metrics per sweep point");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo campaign, one row per trial");
  auto* validate = app.add_subcommand("validate", "closed forms against simulation");
  auto* fixt = app.add_subcommand("fixtures", "recompute regression constants");
  for (auto* c : {analyze, simulate, validate}) add_common(c, o);
  std::string fixture_out = "tests/fixtures/regression_v1.json";
  fixt->add_option("--out", fixture_out, "fixture file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    std::ostringstream os;
    if (*analyze) {
      hho::cmd_analyze(load(o), os);
    } else if (*simulate) {
      hho::cmd_simulate(load(o), os);
    } else if (*validate) {
      std::ostringstream summary;
      hho::cmd_validate(load(o), os, summary);
      (o.out == "-" ? std::cerr : std::cout) << summary.str();
    } else if (*fixt) {
      emit(fixture_out, fixtures().dump(2) + "\n");
      return 0;
    }
    emit(o.out, os.str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

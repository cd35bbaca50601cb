#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hho/analytics.hpp"
#include "hho/radio.hpp"
#include "hho/simengine.hpp"

namespace hho {

// Experiment files are plain text:
//
//   # comment
//   [mobility]
//   velocity_kmh = 60
//
// Units live in the key names. Absent keys keep their defaults; unknown
// sections and keys are errors.

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration:";
    for (const auto& p : v) s += "\n  " + p;
    return s;
  }
  std::vector<std::string> problems_;
};

struct TierRadioDb {
  double tx_power_dbm;
  double antenna_gain_dbi;
  double bias_db;
  double pathloss_at_1km_db;
  double pathloss_slope_db;

  TierRadioParams to_linear() const {
    return TierRadioParams::from_db(tx_power_dbm, antenna_gain_dbi, bias_db, pathloss_at_1km_db, pathloss_slope_db);
  }
  friend bool operator==(const TierRadioDb&, const TierRadioDb&) = default;
};

enum class SweepAxis { None, LambdaS, Sigma, Velocity, TxPowerSp, T, Tp };

constexpr std::string_view axis_name(SweepAxis a) noexcept {
  switch (a) {
    case SweepAxis::None: return "none";
    case SweepAxis::LambdaS: return "lambda_s";
    case SweepAxis::Sigma: return "sigma";
    case SweepAxis::Velocity: return "velocity";
    case SweepAxis::TxPowerSp: return "tx_power_sp";
    case SweepAxis::T: return "T";
    case SweepAxis::Tp: return "T_p";
  }
  return "?";
}

inline std::optional<SweepAxis> parse_axis(std::string_view s) {
  for (auto a : {SweepAxis::None, SweepAxis::LambdaS, SweepAxis::Sigma, SweepAxis::Velocity, SweepAxis::TxPowerSp,
                 SweepAxis::T, SweepAxis::Tp})
    if (axis_name(a) == s) return a;
  return std::nullopt;
}

/// Everything an experiment file can say, in the units the file uses.
struct ExperimentSpec {
  // [network]
  double lambda_s_per_m2 = 2e-5;
  std::optional<double> lambda_m_per_m2;  // defaults to lambda_s / 10
  std::optional<double> lambda_p_per_m2;  // defaults to lambda_s / 10
  double sigma_m = 150.0;
  double mean_offspring = 5.0;
  double region_width_m = 5000.0;
  double region_height_m = 5000.0;
  double guard_m = 1000.0;
  // [radio.macro], [radio.small], [radio.hotspot]
  std::array<TierRadioDb, 3> radio = {
      TierRadioDb{46.0, 14.0, 0.0, kMacroPathlossAt1km, kMacroPathlossSlope},
      TierRadioDb{30.0, 5.0, 4.0, kSmallPathlossAt1km, kSmallPathlossSlope},
      TierRadioDb{30.0, 5.0, 0.0, kSmallPathlossAt1km, kSmallPathlossSlope}};
  // [mobility]
  double velocity_kmh = 60.0;
  double pause_s = 2.0;
  double sigma_rwp_m = 200.0;
  double p_z = 0.3;
  double sigma_z_m = 200.0;
  // [handover]
  double t_threshold_s = 1.0;
  double t_pingpong_s = 1.5;
  double q_out_db = -3.0;
  // [analysis]
  PairKind pair = PairKind::SpS;
  MeanDistanceMode mean_distance = MeanDistanceMode::UpperBound;
  double n_bs_mean = 10.0;
  // [simulation]
  std::uint64_t users = 50;
  std::uint64_t moves = 50;
  std::uint64_t trials = 200;
  std::uint64_t seed = 1;
  std::uint64_t workers = 1;
  // [sweep]
  SweepAxis axis = SweepAxis::None;
  std::vector<double> values;

  double lambda_m() const { return lambda_m_per_m2.value_or(lambda_s_per_m2 / 10.0); }
  double lambda_p() const { return lambda_p_per_m2.value_or(lambda_s_per_m2 / 10.0); }

  /// Number of sweep points (1 when no sweep is configured).
  std::size_t points() const noexcept { return axis == SweepAxis::None ? 1 : values.size(); }

  /// Copy with the sweep axis set to `value`.
  ExperimentSpec at(double value) const {
    ExperimentSpec s = *this;
    switch (axis) {
      case SweepAxis::None: break;
      case SweepAxis::LambdaS: s.lambda_s_per_m2 = value; break;
      case SweepAxis::Sigma: s.sigma_m = value; break;
      case SweepAxis::Velocity: s.velocity_kmh = value; break;
      case SweepAxis::TxPowerSp: s.radio[tier_index(Tier::Hotspot)].tx_power_dbm = value; break;
      case SweepAxis::T: s.t_threshold_s = value; break;
      case SweepAxis::Tp: s.t_pingpong_s = value; break;
    }
    s.axis = SweepAxis::None;
    s.values.clear();
    return s;
  }

  ExperimentSpec point(std::size_t i) const { return axis == SweepAxis::None ? *this : at(values.at(i)); }

  // Unit conversions happen here and nowhere else.
  MobilityConfig mobility() const { return {sigma_rwp_m, p_z, sigma_z_m, velocity_kmh / 3.6, pause_s}; }
  HandoverThresholds thresholds() const { return {t_threshold_s, t_pingpong_s, db_to_linear(q_out_db)}; }
  std::array<TierRadioParams, 3> tiers() const {
    return {radio[0].to_linear(), radio[1].to_linear(), radio[2].to_linear()};
  }

  SimConfig sim_config() const {
    SimConfig c;
    c.region = Region(0.0, region_width_m, 0.0, region_height_m);
    c.guard = guard_m;
    c.tiers = tiers();
    c.lambda_m = lambda_m();
    c.lambda_s = lambda_s_per_m2;
    c.cluster = ClusterConfig{lambda_p(), sigma_m, mean_offspring};
    c.mobility = mobility();
    c.thresholds = thresholds();
    c.n_users = users;
    c.n_moves = moves;
    c.n_trials = trials;
    c.master_seed = seed;
    c.workers = workers;
    return c;
  }

  AnalyticInputs analytic_inputs() const {
    AnalyticInputs in;
    in.pair = pair;
    in.tiers = tiers();
    in.lambda_m = lambda_m();
    in.lambda_s = lambda_s_per_m2;
    in.sigma = sigma_m;
    in.mobility = mobility();
    in.thresholds = thresholds();
    in.region_area = region_width_m * region_height_m;
    in.n_bs_mean = n_bs_mean;
    return in;
  }

  /// All constraint violations, empty when the spec is usable.
  std::vector<std::string> violations() const {
    std::vector<std::string> v;
    auto need = [&](bool ok, const char* what) {
      if (!ok) v.emplace_back(what);
    };
    auto finite = [](double x) { return std::isfinite(x); };
    need(lambda_s_per_m2 > 0.0 && finite(lambda_s_per_m2), "network.lambda_s_per_m2 must be > 0");
    need(lambda_m() > 0.0 && finite(lambda_m()), "network.lambda_m_per_m2 must be > 0");
    need(lambda_p() > 0.0 && finite(lambda_p()), "network.lambda_p_per_m2 must be > 0");
    need(sigma_m > 0.0 && finite(sigma_m), "network.sigma_m must be > 0");
    need(mean_offspring > 0.0 && finite(mean_offspring), "network.mean_offspring must be > 0");
    need(region_width_m > 0.0 && finite(region_width_m), "network.region_width_m must be > 0");
    need(region_height_m > 0.0 && finite(region_height_m), "network.region_height_m must be > 0");
    need(guard_m >= 0.0 && finite(guard_m), "network.guard_m must be >= 0");
    static constexpr const char* kSection[] = {"radio.macro", "radio.small", "radio.hotspot"};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& r = radio[i];
      if (!finite(r.tx_power_dbm) || !finite(r.antenna_gain_dbi) || !finite(r.bias_db) ||
          !finite(r.pathloss_at_1km_db))
        v.push_back(std::string(kSection[i]) + ": values must be finite");
      if (!(r.pathloss_slope_db > 20.0) || !finite(r.pathloss_slope_db))
        v.push_back(std::string(kSection[i]) + ".pathloss_slope_db must be > 20 (exponent > 2)");
    }
    need(velocity_kmh > 0.0 && finite(velocity_kmh), "mobility.velocity_kmh must be > 0");
    need(pause_s >= 0.0 && finite(pause_s), "mobility.pause_s must be >= 0");
    need(sigma_rwp_m > 0.0 && finite(sigma_rwp_m), "mobility.sigma_rwp_m must be > 0");
    need(p_z >= 0.0 && p_z <= 1.0, "mobility.p_z must lie in [0, 1]");
    need(sigma_z_m > 0.0 && finite(sigma_z_m), "mobility.sigma_z_m must be > 0");
    need(t_threshold_s >= 0.0 && finite(t_threshold_s), "handover.t_threshold_s must be >= 0");
    need(t_pingpong_s > 0.0 && finite(t_pingpong_s), "handover.t_pingpong_s must be > 0");
    need(q_out_db <= 0.0 && finite(q_out_db), "handover.q_out_db must be <= 0");
    need(n_bs_mean > 0.0 && finite(n_bs_mean), "analysis.n_bs_mean must be > 0");
    need(users >= 1, "simulation.users must be >= 1");
    need(moves >= 1, "simulation.moves must be >= 1");
    need(trials >= 1, "simulation.trials must be >= 1");
    need(workers >= 1, "simulation.workers must be >= 1");
    if (axis == SweepAxis::None) {
      need(values.empty(), "sweep.values given without sweep.axis");
    } else {
      need(!values.empty(), "sweep.values must not be empty");
      for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1])) {
          v.emplace_back("sweep.values must be strictly increasing");
          break;
        }
      for (double x : values)
        if (!finite(x)) {
          v.emplace_back("sweep.values must be finite");
          break;
        }
      // Every sweep point must itself be valid.
      if (v.empty())
        for (double x : values)
          for (auto& msg : at(x).violations()) v.push_back("sweep point " + format_double(x) + ": " + msg);
    }
    return v;
  }

  void validate() const {
    auto v = violations();
    if (!v.empty()) throw ConfigError(std::move(v));
  }

  static std::string format_double(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
  }

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  double x = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

inline std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t x = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return x;
}

}  // namespace detail

/// Parses experiment text. `origin` names the source in diagnostics.
inline ExperimentSpec parse_config(std::string_view text, const std::string& origin = "<config>") {
  ExperimentSpec s;
  std::vector<std::string> errors;
  std::string section;
  std::size_t line_no = 0;
  std::vector<std::string> seen;

  auto diag = [&](const std::string& msg) { errors.push_back(origin + ":" + std::to_string(line_no) + ": " + msg); };

  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        diag("malformed section header");
        continue;
      }
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      static constexpr std::string_view kSections[] = {"network",       "radio.macro", "radio.small",
                                                       "radio.hotspot", "mobility",    "handover",
                                                       "analysis",      "simulation",  "sweep"};
      bool known = false;
      for (auto k : kSections) known = known || k == section;
      if (!known) diag("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      diag("expected key = value");
      continue;
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view val = detail::trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    if (key.empty()) {
      diag("empty key");
      continue;
    }
    for (const auto& k : seen)
      if (k == full) diag("duplicate key " + full);
    seen.push_back(full);

    auto num = [&](double& dst) {
      if (auto x = detail::parse_double(val)) dst = *x;
      else diag("expected a number for " + full + ", got '" + std::string(val) + "'");
    };
    auto opt_num = [&](std::optional<double>& dst) {
      double x = 0.0;
      const auto before = errors.size();
      num(x);
      if (errors.size() == before) dst = x;
    };
    auto count = [&](std::uint64_t& dst) {
      if (auto x = detail::parse_u64(val)) dst = *x;
      else diag("expected a non-negative integer for " + full + ", got '" + std::string(val) + "'");
    };

    if (section == "network") {
      if (key == "lambda_s_per_m2") num(s.lambda_s_per_m2);
      else if (key == "lambda_m_per_m2") opt_num(s.lambda_m_per_m2);
      else if (key == "lambda_p_per_m2") opt_num(s.lambda_p_per_m2);
      else if (key == "sigma_m") num(s.sigma_m);
      else if (key == "mean_offspring") num(s.mean_offspring);
      else if (key == "region_width_m") num(s.region_width_m);
      else if (key == "region_height_m") num(s.region_height_m);
      else if (key == "guard_m") num(s.guard_m);
      else diag("unknown key " + full);
    } else if (section.rfind("radio.", 0) == 0) {
      const std::size_t t = section == "radio.macro" ? 0 : section == "radio.small" ? 1 : 2;
      auto& r = s.radio[t];
      if (key == "tx_power_dbm") num(r.tx_power_dbm);
      else if (key == "antenna_gain_dbi") num(r.antenna_gain_dbi);
      else if (key == "bias_db") num(r.bias_db);
      else if (key == "pathloss_at_1km_db") num(r.pathloss_at_1km_db);
      else if (key == "pathloss_slope_db") num(r.pathloss_slope_db);
      else diag("unknown key " + full);
    } else if (section == "mobility") {
      if (key == "velocity_kmh") num(s.velocity_kmh);
      else if (key == "pause_s") num(s.pause_s);
      else if (key == "sigma_rwp_m") num(s.sigma_rwp_m);
      else if (key == "p_z") num(s.p_z);
      else if (key == "sigma_z_m") num(s.sigma_z_m);
      else diag("unknown key " + full);
    } else if (section == "handover") {
      if (key == "t_threshold_s") num(s.t_threshold_s);
      else if (key == "t_pingpong_s") num(s.t_pingpong_s);
      else if (key == "q_out_db") num(s.q_out_db);
      else diag("unknown key " + full);
    } else if (section == "analysis") {
      if (key == "pair") {
        try {
          s.pair = parse_pair(val);
        } catch (const std::invalid_argument& e) {
          diag(e.what());
        }
      } else if (key == "mean_distance") {
        if (val == "upper_bound") s.mean_distance = MeanDistanceMode::UpperBound;
        else if (val == "quadrature") s.mean_distance = MeanDistanceMode::Quadrature;
        else diag("analysis.mean_distance must be upper_bound or quadrature");
      } else if (key == "n_bs_mean") {
        num(s.n_bs_mean);
      } else {
        diag("unknown key " + full);
      }
    } else if (section == "simulation") {
      if (key == "users") count(s.users);
      else if (key == "moves") count(s.moves);
      else if (key == "trials") count(s.trials);
      else if (key == "seed") count(s.seed);
      else if (key == "workers") count(s.workers);
      else diag("unknown key " + full);
    } else if (section == "sweep") {
      if (key == "axis") {
        if (auto a = parse_axis(val)) s.axis = *a;
        else diag("unknown sweep axis '" + std::string(val) + "'");
      } else if (key == "values") {
        s.values.clear();
        std::string_view rest = val;
        while (!rest.empty()) {
          const auto comma = rest.find(',');
          const auto item = detail::trim(rest.substr(0, comma));
          rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
          if (auto x = detail::parse_double(item)) s.values.push_back(*x);
          else diag("expected a number in sweep.values, got '" + std::string(item) + "'");
        }
      } else {
        diag("unknown key " + full);
      }
    } else if (section.empty()) {
      diag("key " + key + " outside any section");
    }
    // Keys inside an unknown section were already reported with the section.
  }
  if (errors.empty())
    for (auto& v : s.violations()) errors.push_back(origin + ": " + v);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return s;
}

inline ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path + ": cannot open file"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

/// Text form accepted by parse_config; parse_config(emit_config(s)) == s.
inline std::string emit_config(const ExperimentSpec& s) {
  std::string out;
  auto kv = [&](const char* key, double v) { out += std::string(key) + " = " + ExperimentSpec::format_double(v) + "\n"; };
  auto ku = [&](const char* key, std::uint64_t v) { out += std::string(key) + " = " + std::to_string(v) + "\n"; };
  out += "[network]\n";
  kv("lambda_s_per_m2", s.lambda_s_per_m2);
  if (s.lambda_m_per_m2) kv("lambda_m_per_m2", *s.lambda_m_per_m2);
  if (s.lambda_p_per_m2) kv("lambda_p_per_m2", *s.lambda_p_per_m2);
  kv("sigma_m", s.sigma_m);
  kv("mean_offspring", s.mean_offspring);
  kv("region_width_m", s.region_width_m);
  kv("region_height_m", s.region_height_m);
  kv("guard_m", s.guard_m);
  static constexpr const char* kSection[] = {"radio.macro", "radio.small", "radio.hotspot"};
  for (std::size_t i = 0; i < 3; ++i) {
    out += "\n[" + std::string(kSection[i]) + "]\n";
    kv("tx_power_dbm", s.radio[i].tx_power_dbm);
    kv("antenna_gain_dbi", s.radio[i].antenna_gain_dbi);
    kv("bias_db", s.radio[i].bias_db);
    kv("pathloss_at_1km_db", s.radio[i].pathloss_at_1km_db);
    kv("pathloss_slope_db", s.radio[i].pathloss_slope_db);
  }
  out += "\n[mobility]\n";
  kv("velocity_kmh", s.velocity_kmh);
  kv("pause_s", s.pause_s);
  kv("sigma_rwp_m", s.sigma_rwp_m);
  kv("p_z", s.p_z);
  kv("sigma_z_m", s.sigma_z_m);
  out += "\n[handover]\n";
  kv("t_threshold_s", s.t_threshold_s);
  kv("t_pingpong_s", s.t_pingpong_s);
  kv("q_out_db", s.q_out_db);
  out += "\n[analysis]\n";
  out += "pair = " + std::string(pair_name(s.pair)) + "\n";
  out += std::string("mean_distance = ") +
         (s.mean_distance == MeanDistanceMode::UpperBound ? "upper_bound" : "quadrature") + "\n";
  kv("n_bs_mean", s.n_bs_mean);
  out += "\n[simulation]\n";
  ku("users", s.users);
  ku("moves", s.moves);
  ku("trials", s.trials);
  ku("seed", s.seed);
  ku("workers", s.workers);
  if (s.axis != SweepAxis::None) {
    out += "\n[sweep]\n";
    out += "axis = " + std::string(axis_name(s.axis)) + "\n";
    out += "values = ";
    for (std::size_t i = 0; i < s.values.size(); ++i)
      out += (i ? ", " : "") + ExperimentSpec::format_double(s.values[i]);
    out += "\n";
  }
  return out;
}

}  // namespace hho

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "hho/analytics.hpp"
#include "hho/config.hpp"
#include "hho/simengine.hpp"

namespace hho {

inline constexpr int kSchemaVersion = 1;

namespace detail {

class CsvRow {
 public:
  CsvRow& operator<<(double x) { return add(ExperimentSpec::format_double(x)); }
  CsvRow& operator<<(std::uint64_t x) { return add(std::to_string(x)); }
  CsvRow& operator<<(std::string_view s) { return add(std::string(s)); }
  CsvRow& operator<<(bool b) { return add(b ? "1" : "0"); }
  const std::string& str() const noexcept { return s_; }

 private:
  CsvRow& add(const std::string& field) {
    if (!first_) s_ += ',';
    first_ = false;
    s_ += field;
    return *this;
  }
  std::string s_;
  bool first_ = true;
};

inline void write_preamble(std::ostream& os, std::string_view header) {
  os << "# schema_version=" << kSchemaVersion << '\n' << header << '\n';
}

// Shared leading columns describing one sweep point.
inline constexpr std::string_view kPointColumns = "lambda_s,sigma,V_mps,T_s,Tp_s,tx_power_sp_dbm";

inline void point_columns(CsvRow& row, const ExperimentSpec& p) {
  row << p.lambda_s_per_m2 << p.sigma_m << p.velocity_kmh / 3.6 << p.t_threshold_s << p.t_pingpong_s
      << p.radio[tier_index(Tier::Hotspot)].tx_power_dbm;
}

}  // namespace detail

/// Closed forms only: one row per sweep point.
inline void cmd_analyze(const ExperimentSpec& spec, std::ostream& os) {
  spec.validate();
  detail::write_preamble(os, std::string("pair,") + std::string(detail::kPointColumns) +
                                 ",mean_distance_m,H_t,H,H_f,H_p,pingpong_clamped");
  for (std::size_t i = 0; i < spec.points(); ++i) {
    const auto p = spec.point(i);
    const auto in = p.analytic_inputs();
    const auto m = evaluate_metrics(in, p.mean_distance);
    detail::CsvRow row;
    row << pair_name(p.pair);
    detail::point_columns(row, p);
    row << m.mean_distance << m.triggered_rate << m.handover_rate << m.failure_rate << m.pingpong_rate
        << m.pingpong_clamped;
    os << row.str() << '\n';
  }
}

/// Campaigns only: one row per (sweep point, trial) for the configured pair.
inline void cmd_simulate(const ExperimentSpec& spec, std::ostream& os) {
  spec.validate();
  detail::write_preamble(os, std::string("pair,point,") + std::string(detail::kPointColumns) +
                                 ",trial,triggered,handovers,failures,pingpongs,censored,overlap,n_bs,skipped,"
                                 "exposure_s,H_t,H,H_f,H_p");
  for (std::size_t i = 0; i < spec.points(); ++i) {
    const auto p = spec.point(i);
    const auto est = run_campaign(p.sim_config());
    for (std::size_t t = 0; t < est.trials.size(); ++t) {
      const auto& tr = est.trials[t];
      const auto& c = tr[p.pair];
      const double expo = tr.exposure_time;
      detail::CsvRow row;
      row << pair_name(p.pair) << static_cast<std::uint64_t>(i);
      detail::point_columns(row, p);
      row << static_cast<std::uint64_t>(t) << c.triggered << c.handovers << c.failures << c.pingpongs << c.censored
          << c.overlap << c.n_bs << c.skipped << expo << c.triggered / expo << c.handovers / expo
          << (c.triggered ? static_cast<double>(c.failures) / static_cast<double>(c.triggered) : 0.0)
          << c.pingpongs / expo;
      os << row.str() << '\n';
    }
  }
}

/// Both engines: comparison CSV on `os`, aligned text summary on `summary`.
inline void cmd_validate(const ExperimentSpec& spec, std::ostream& os, std::ostream& summary) {
  spec.validate();
  detail::write_preamble(os, std::string("point,") + std::string(detail::kPointColumns) +
                                 ",pair,metric,analytic,analytic_ub,simulated,half_width,ratio,ub_below_sim,n_bs_mean");
  char line[256];
  for (std::size_t i = 0; i < spec.points(); ++i) {
    const auto p = spec.point(i);
    const auto cfg = p.sim_config();
    const auto cmp = compare_to_analytics(cfg);
    if (spec.axis != SweepAxis::None) {
      std::snprintf(line, sizeof line, "%s = %g\n", std::string(axis_name(spec.axis)).c_str(), spec.values[i]);
      summary << line;
    }
    std::snprintf(line, sizeof line, "%-4s %-4s %13s %13s %13s %11s %7s\n", "pair", "rate", "analytic", "analytic_ub",
                  "simulated", "+/-95%", "ratio");
    summary << line;
    for (const auto& r : cmp.rows) {
      detail::CsvRow row;
      row << static_cast<std::uint64_t>(i);
      detail::point_columns(row, p);
      row << pair_name(r.pair) << metric_name(r.metric) << r.analytic << r.analytic_ub << r.simulated << r.half_width
          << r.ratio << r.ub_below_sim << cmp.simulated[r.pair].mean_n_bs;
      os << row.str() << '\n';
      std::snprintf(line, sizeof line, "%-4s %-4s %13.5g %13.5g %13.5g %11.3g %7.3f%s\n",
                    std::string(pair_name(r.pair)).c_str(), std::string(metric_name(r.metric)).c_str(), r.analytic,
                    r.analytic_ub, r.simulated, r.half_width, r.ratio, r.ub_below_sim ? "  ub<sim" : "");
      summary << line;
    }
    summary << '\n';
  }
}

}  // namespace hho

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>

#include "hho/geometry.hpp"

namespace hho {

inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) noexcept { return 10.0 * std::log10(lin); }

/// Raised when the equal-RSS boundary of a BS pair is a straight line.
class DegenerateBoundary : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Per-tier link budget, all in linear units: RSS(r) = B P G C r^-alpha.
struct TierRadioParams {
  double tx_power_mw = 1.0;
  double antenna_gain = 1.0;
  double bias = 1.0;
  double pathloss_intercept = 1.0;  // power ratio at 1 m
  double pathloss_exponent = 3.0;

  /// From dB quantities and a log-distance path loss `pl_1km + slope log10(r_km)`.
  static TierRadioParams from_db(double tx_power_dbm, double antenna_gain_dbi, double bias_db,
                                 double pathloss_db_at_1km, double pathloss_slope_db) {
    TierRadioParams p;
    p.tx_power_mw = db_to_linear(tx_power_dbm);
    p.antenna_gain = db_to_linear(antenna_gain_dbi);
    p.bias = db_to_linear(bias_db);
    p.pathloss_exponent = pathloss_slope_db / 10.0;
    p.pathloss_intercept = db_to_linear(-(pathloss_db_at_1km - 3.0 * pathloss_slope_db));
    p.validate();
    return p;
  }

  /// B P G C, the RSS at 1 m.
  double reference_rss() const noexcept { return bias * tx_power_mw * antenna_gain * pathloss_intercept; }

  void validate() const {
    if (!(pathloss_exponent > 2.0)) throw std::invalid_argument("TierRadioParams: pathloss_exponent must be > 2");
    if (!(pathloss_intercept > 0.0)) throw std::invalid_argument("TierRadioParams: pathloss_intercept must be > 0");
    if (!(tx_power_mw > 0.0) || !(antenna_gain > 0.0) || !(bias > 0.0))
      throw std::invalid_argument("TierRadioParams: power, gain and bias must be > 0");
  }

  friend bool operator==(const TierRadioParams&, const TierRadioParams&) = default;
};

// 3GPP outdoor path loss: 128.1 + 37.6 log10(r_km) for macro cells and
// 140.7 + 36.7 log10(r_km) for small cells.
inline constexpr double kMacroPathlossAt1km = 128.1;
inline constexpr double kMacroPathlossSlope = 37.6;
inline constexpr double kSmallPathlossAt1km = 140.7;
inline constexpr double kSmallPathlossSlope = 36.7;

/// Default link budget per tier. The hotspot tier carries no range-expansion
/// bias, which keeps the S -> S' boundary from collapsing to a bisector.
inline TierRadioParams default_tier_params(Tier t) {
  switch (t) {
    case Tier::Macro: return TierRadioParams::from_db(46.0, 14.0, 0.0, kMacroPathlossAt1km, kMacroPathlossSlope);
    case Tier::Small: return TierRadioParams::from_db(30.0, 5.0, 4.0, kSmallPathlossAt1km, kSmallPathlossSlope);
    case Tier::Hotspot: return TierRadioParams::from_db(30.0, 5.0, 0.0, kSmallPathlossAt1km, kSmallPathlossSlope);
  }
  throw std::invalid_argument("default_tier_params: unknown tier");
}

inline double dl_rss(const TierRadioParams& tier, double distance_m) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("dl_rss: distance must be > 0");
  return tier.reference_rss() * std::pow(distance_m, -tier.pathloss_exponent);
}

/// xi_ij = (K_j / K_i)^(2 / alpha_j) with K = B P G C.
inline double xi_factor(const TierRadioParams& serving, const TierRadioParams& target) {
  serving.validate();
  target.validate();
  return std::pow(target.reference_rss() / serving.reference_rss(), 2.0 / target.pathloss_exponent);
}

/// xi_f = xi Q_out^(2 / alpha_j).
inline double failure_xi(double xi, double q_out, double target_exponent) {
  return xi * std::pow(q_out, 2.0 / target_exponent);
}

inline double alpha_ratio(const TierRadioParams& serving, const TierRadioParams& target) noexcept {
  return serving.pathloss_exponent / target.pathloss_exponent;
}

/// Slope of the best L1 fit of r^(2a) by lambda r^2 over [0, |target|]:
/// lambda* = |target|^(2 (a - 1)).
inline double lambda_star(Point2 target, double alpha_ij) {
  const double d2 = norm2(target);
  if (!(d2 > 0.0)) throw std::invalid_argument("lambda_star: target at origin");
  return std::pow(d2, alpha_ij - 1.0);
}

struct Circle {
  Point2 center;
  double radius = 0.0;
  // False when the circle encloses the serving BS (lambda* xi > 1); the
  // target-dominated side is then the exterior.
  bool target_inside = true;

  bool contains(Point2 p) const noexcept { return norm2(p - center) < radius * radius; }
};

/// Circular approximation of the equal-RSS boundary, serving BS at the origin.
inline Circle erb_circle(Point2 target, double xi, double lambda_star_value) {
  const double k = lambda_star_value * xi;
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("erb_circle: lambda* xi must be positive");
  const double denom = 1.0 - k;
  if (std::abs(denom) <= 1e-12) throw DegenerateBoundary("erb_circle: lambda* xi = 1, boundary is a line");
  Circle c;
  c.center = (1.0 / denom) * target;
  c.radius = std::sqrt(k * norm2(target)) / std::abs(denom);
  c.target_inside = denom > 0.0;
  return c;
}

inline Circle erb_failure_circle(Point2 target, double xi_f, double lambda_star_value) {
  return erb_circle(target, xi_f, lambda_star_value);
}

/// Handover and handover-failure circles for one (serving, target) BS pair.
struct ErbPair {
  double xi = 0.0;
  double xi_f = 0.0;
  double lambda_star = 0.0;
  double q_out = 1.0;
  Circle handover_circle;
  Circle failure_circle;

  double k() const noexcept { return lambda_star * xi; }
  double k_f() const noexcept { return lambda_star * xi_f; }
};

/// Build both circles in absolute coordinates. Throws DegenerateBoundary if
/// either boundary is a line.
inline ErbPair make_erb_pair(Point2 serving_pos, Point2 target_pos, const TierRadioParams& serving,
                             const TierRadioParams& target, double q_out) {
  if (!(q_out > 0.0)) throw std::invalid_argument("make_erb_pair: q_out must be > 0");
  const Point2 rel = target_pos - serving_pos;
  ErbPair e;
  e.q_out = q_out;
  e.xi = xi_factor(serving, target);
  e.xi_f = failure_xi(e.xi, q_out, target.pathloss_exponent);
  e.lambda_star = lambda_star(rel, alpha_ratio(serving, target));
  e.handover_circle = erb_circle(rel, e.xi, e.lambda_star);
  e.failure_circle = erb_failure_circle(rel, e.xi_f, e.lambda_star);
  e.handover_circle.center = e.handover_circle.center + serving_pos;
  e.failure_circle.center = e.failure_circle.center + serving_pos;
  return e;
}

struct TierDeployment {
  PointSet bss;
  TierRadioParams params;
};

struct ServingBs {
  Tier tier = Tier::Macro;
  std::size_t index = 0;
  double rss = 0.0;
};

/// Strongest-RSS association. Ties go to the lower tier (M, S, S'), then to
/// the lower index. A BS co-located with the user wins outright.
inline ServingBs serving_bs(Point2 location, std::span<const TierDeployment> deployment) {
  std::optional<ServingBs> best;
  auto better = [](const ServingBs& a, const ServingBs& b) {
    if (a.rss != b.rss) return a.rss > b.rss;
    if (a.tier != b.tier) return tier_index(a.tier) < tier_index(b.tier);
    return a.index < b.index;
  };
  for (const auto& tier : deployment) {
    for (std::size_t i = 0; i < tier.bss.points.size(); ++i) {
      const double d = distance(location, tier.bss.points[i]);
      ServingBs cand{tier.bss.tier, i,
                     d > 0.0 ? dl_rss(tier.params, d) : std::numeric_limits<double>::infinity()};
      if (!best || better(cand, *best)) best = cand;
    }
  }
  if (!best) throw std::out_of_range("serving_bs: no BS deployed");
  return *best;
}

}  // namespace hho

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hho/geometry.hpp"
#include "hho/mobility.hpp"
#include "hho/radio.hpp"
#include "hho/specfun.hpp"

namespace hho {

/// Handover tier pairs: SM (M serving, PPP SBS target), S'S (PPP SBS serving,
/// clustered SBS target) and S'M (M serving, clustered SBS target).
enum class PairKind { SM, SpS, SpM };

inline constexpr std::array<PairKind, 3> kAllPairs = {PairKind::SM, PairKind::SpS, PairKind::SpM};

constexpr std::string_view pair_name(PairKind p) noexcept {
  switch (p) {
    case PairKind::SM: return "SM";
    case PairKind::SpS: return "S'S";
    case PairKind::SpM: return "S'M";
  }
  return "?";
}

constexpr std::size_t pair_index(PairKind p) noexcept { return static_cast<std::size_t>(p); }

inline PairKind parse_pair(std::string_view s) {
  for (auto p : kAllPairs)
    if (pair_name(p) == s) return p;
  if (s == "SpS") return PairKind::SpS;
  if (s == "SpM") return PairKind::SpM;
  throw std::invalid_argument("unknown pair '" + std::string(s) + "' (expected SM, S'S or S'M)");
}

constexpr Tier serving_tier(PairKind p) noexcept { return p == PairKind::SpS ? Tier::Small : Tier::Macro; }
constexpr Tier target_tier(PairKind p) noexcept { return p == PairKind::SM ? Tier::Small : Tier::Hotspot; }

struct HandoverThresholds {
  double t_threshold = 1.0;           // T, s
  double t_pingpong = 1.5;            // T_p, s
  double q_out = db_to_linear(-3.0);  // linear

  void validate() const {
    if (!(t_threshold >= 0.0)) throw std::invalid_argument("HandoverThresholds: T must be >= 0");
    if (!(t_pingpong > 0.0)) throw std::invalid_argument("HandoverThresholds: T_p must be > 0");
    if (!(q_out > 0.0 && q_out <= 1.0)) throw std::invalid_argument("HandoverThresholds: q_out must lie in (0, 1]");
  }

  friend bool operator==(const HandoverThresholds&, const HandoverThresholds&) = default;
};

struct HandoverMetrics {
  PairKind pair = PairKind::SpS;
  double triggered_rate = 0.0;          // 1/s
  double handover_rate = 0.0;           // 1/s
  double failure_rate = 0.0;            // failures per trigger
  double pingpong_rate = 0.0;           // 1/s
  double failure_triggered_rate = 0.0;  // 1/s
  double mean_distance = 0.0;           // m, E[R] used
  double k = 0.0;                       // lambda* xi
  double k_f = 0.0;                     // lambda* xi_f
  bool pingpong_clamped = false;        // bracket was negative and set to 0
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Distance distributions

inline double pdf_r_sm(double r, double lambda_m) {
  if (!(r >= 0.0) || !(lambda_m > 0.0)) throw std::invalid_argument("pdf_r_sm: need r >= 0, lambda > 0");
  return 2.0 * std::numbers::pi * lambda_m * r * std::exp(-std::numbers::pi * lambda_m * r * r);
}

inline double cdf_r_sm(double r, double lambda_m) {
  if (!(r >= 0.0) || !(lambda_m > 0.0)) throw std::invalid_argument("cdf_r_sm: need r >= 0, lambda > 0");
  return -std::expm1(-std::numbers::pi * lambda_m * r * r);
}

/// Rician density of the offspring-to-BS distance given the parent-to-BS distance w.
inline double rician_pdf(double r, double w, double sigma) {
  if (!(r >= 0.0) || !(w >= 0.0) || !(sigma > 0.0)) throw std::invalid_argument("rician_pdf: bad arguments");
  const double s2 = sigma * sigma;
  // exp(-(r^2 + w^2)/2s^2) I0(wr/s^2) = exp(-(r - w)^2/2s^2) e^-z I0(z)
  return r / s2 * std::exp(-(r - w) * (r - w) / (2.0 * s2)) * i0_scaled(w * r / s2);
}

/// 1 - Q1(w/sigma, r/sigma).
inline double rician_cdf(double r, double w, double sigma) {
  if (!(r >= 0.0) || !(w >= 0.0) || !(sigma > 0.0)) throw std::invalid_argument("rician_cdf: bad arguments");
  return 1.0 - marcum_q1(w / sigma, r / sigma);
}

/// Mean nearest-BS distance in a PPP of density lambda: 1 / (2 sqrt(lambda)).
inline double mean_r_sm(double lambda_m) {
  if (!(lambda_m > 0.0)) throw std::invalid_argument("mean_r_sm: lambda must be > 0");
  return 0.5 / std::sqrt(lambda_m);
}

namespace detail {

template <class F>
double integrate_checked(F f, double a, double b, double rel_tol, const char* what) {
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &err, &l1);
  if (!std::isfinite(v) || err > 100.0 * rel_tol * std::max(l1, 1e-300))
    throw QuadratureError(std::string(what) + ": quadrature did not converge (value " + std::to_string(v) +
                          ", error estimate " + std::to_string(err) + ", L1 " + std::to_string(l1) + ")");
  return v;
}

}  // namespace detail

/// E[R] for an offspring whose parent sits at PPP-nearest distance W from the
/// reference BS: the double integral over w and r of r f(r | w) f_W(w),
/// evaluated by nested adaptive Gauss-Kronrod quadrature.
inline double mean_cluster_distance_numeric(double lambda, double sigma) {
  if (!(lambda > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("mean_cluster_distance_numeric: lambda and sigma must be > 0");
  constexpr double tol = 1e-9;
  constexpr double span = 12.0;  // standard deviations; tails beyond are < e^-72
  auto conditional_mean = [&](double w) {
    const double lo = std::max(0.0, w - span * sigma);
    const double hi = w + span * sigma;
    return detail::integrate_checked([&](double r) { return r * rician_pdf(r, w, sigma); }, lo, hi, tol,
                                     "mean_cluster_distance_numeric (inner)");
  };
  const double w_scale = 1.0 / std::sqrt(std::numbers::pi * lambda);
  return detail::integrate_checked([&](double w) { return pdf_r_sm(w, lambda) * conditional_mean(w); }, 0.0,
                                   span * w_scale, tol, "mean_cluster_distance_numeric (outer)");
}

/// F_k(w) = int_0^inf r^2 exp(-r^2/2s^2 + b w r/s^2) dr in closed form.
inline double f_k_exact(double w, double sigma, double b) {
  if (!(w >= 0.0) || !(sigma > 0.0)) throw std::invalid_argument("f_k_exact: need w >= 0, sigma > 0");
  const double bw = b * w;
  return sigma * sigma * bw + std::sqrt(std::numbers::pi / 2.0) * (sigma * b * b * w * w + sigma * sigma * sigma) *
                                  std::exp(bw * bw / (2.0 * sigma * sigma)) *
                                  (1.0 + erf(bw / (std::numbers::sqrt2 * sigma)));
}

/// Closed-form bound on the mean offspring distance obtained from the
/// exponential-sum I0 approximation with 1 + erf(.) replaced by 2.
/// `lambda` is the density of the tier the reference BS belongs to.
/// Throws std::domain_error when 2q + 1 - b_k^2 <= 0 for some b_k.
inline double mean_cluster_distance_ub(double lambda, double sigma,
                                       const BesselApproxTable::Interval& coeffs = kBesselApproxTable.intervals[0]) {
  if (!(lambda > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("mean_cluster_distance_ub: lambda and sigma must be > 0");
  const double q = std::numbers::pi * lambda * sigma * sigma;
  double sum = 0.0;
  for (const auto& [a, b] : coeffs.terms) {
    const double d = 2.0 * q + 1.0 - b * b;
    if (!(d > 0.0))
      throw std::domain_error("mean_cluster_distance_ub: 2q + 1 - b^2 <= 0 (b = " + std::to_string(b) +
                              ", q = " + std::to_string(q) + "), outside the formula's validity range");
    sum += a * (2.0 / d + b / std::pow(2.0 * q + 1.0, 1.5) + 4.0 * b * b / (d * d));
  }
  return std::sqrt(2.0 * std::numbers::pi) * q * sigma * sum;
}

// ---------------------------------------------------------------------------
// Handover metrics. `k` is lambda* xi for the pair.

inline void require_k(double k, const char* what) {
  if (!(k > 0.0 && k < 1.0)) throw std::domain_error(std::string(what) + ": lambda* xi must lie in (0, 1)");
}

/// Rate of handover-circle entries summed over n_bs target BSs.
inline double handover_triggered_rate(double mean_distance, double k, double region_area, double n_bs_mean,
                                      const MobilityConfig& mobility) {
  require_k(k, "handover_triggered_rate");
  if (!(mean_distance >= 0.0) || !(region_area > 0.0) || !(n_bs_mean >= 0.0))
    throw std::invalid_argument("handover_triggered_rate: non-positive input");
  const double per_time = 1.0 / mobility.velocity + mobility.pause / expected_transition_length(mobility);
  return 2.0 / region_area * std::sqrt(k) / (1.0 - k) * n_bs_mean * mean_distance / per_time;
}

/// P(S >= T) for the in-circle sojourn S.
inline double prob_sojourn_ge(PairKind pair, double t, double velocity, double k, double lambda_m, double lambda_s,
                              double sigma) {
  require_k(k, "prob_sojourn_ge");
  if (!(t >= 0.0) || !(velocity > 0.0)) throw std::invalid_argument("prob_sojourn_ge: need T >= 0 and V > 0");
  if (!(lambda_m > 0.0) || !(lambda_s > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("prob_sojourn_ge: densities and sigma must be > 0");
  const double one_minus_k = 1.0 - k;
  switch (pair) {
    case PairKind::SM:
      return std::exp(-4.0 * lambda_m * velocity * velocity * t * t * one_minus_k * one_minus_k /
                      (std::numbers::pi * k));
    case PairKind::SpS:
    case PairKind::SpM: {
      const double lambda = pair == PairKind::SpS ? lambda_s : lambda_m;
      const double a = 1.0 / (2.0 * sigma * std::sqrt(lambda));
      const double b = 2.0 * t * velocity * one_minus_k / (std::numbers::pi * sigma * std::sqrt(k));
      return marcum_q1(a, b);
    }
  }
  throw std::invalid_argument("prob_sojourn_ge: unknown pair");
}

/// Everything the closed forms need for one pair.
struct AnalyticInputs {
  PairKind pair = PairKind::SpS;
  std::array<TierRadioParams, 3> tiers = {default_tier_params(Tier::Macro), default_tier_params(Tier::Small),
                                          default_tier_params(Tier::Hotspot)};
  double lambda_m = 2e-6;
  double lambda_s = 2e-5;
  double sigma = 150.0;
  MobilityConfig mobility;
  HandoverThresholds thresholds;
  double region_area = 25e6;
  double n_bs_mean = 10.0;
};

enum class MeanDistanceMode { UpperBound, Quadrature };

/// E[R_l] for the pair: PPP nearest distance for SM, the Thomas-cluster mean
/// (bound or quadrature) for S'S and S'M.
inline double pair_mean_distance(PairKind pair, double lambda_m, double lambda_s, double sigma, MeanDistanceMode mode,
                                 const BesselApproxTable::Interval& coeffs = kBesselApproxTable.intervals[0]) {
  if (pair == PairKind::SM) return mean_r_sm(lambda_m);
  const double lambda = pair == PairKind::SpS ? lambda_s : lambda_m;
  return mode == MeanDistanceMode::UpperBound ? mean_cluster_distance_ub(lambda, sigma, coeffs)
                                              : mean_cluster_distance_numeric(lambda, sigma);
}

/// lambda* xi and lambda* xi_f with lambda* evaluated at the mean distance.
struct PairGeometry {
  double k = 0.0;
  double k_f = 0.0;
};

inline PairGeometry pair_geometry(const AnalyticInputs& in, double mean_distance) {
  const auto& serving = in.tiers[tier_index(serving_tier(in.pair))];
  const auto& target = in.tiers[tier_index(target_tier(in.pair))];
  const double xi = xi_factor(serving, target);
  const double xi_f = failure_xi(xi, in.thresholds.q_out, target.pathloss_exponent);
  const double ls = lambda_star(Point2{mean_distance, 0.0}, alpha_ratio(serving, target));
  return {ls * xi, ls * xi_f};
}

inline double handover_rate(const AnalyticInputs& in, double mean_distance) {
  const auto g = pair_geometry(in, mean_distance);
  const double ht = handover_triggered_rate(mean_distance, g.k, in.region_area, in.n_bs_mean, in.mobility);
  return ht * prob_sojourn_ge(in.pair, in.thresholds.t_threshold, in.mobility.velocity, g.k, in.lambda_m,
                              in.lambda_s, in.sigma);
}

/// Failures per triggered handover: H_f,t P(S_f <= T) / H_t.
inline double handover_failure_rate(const AnalyticInputs& in, double mean_distance) {
  const auto g = pair_geometry(in, mean_distance);
  require_k(g.k_f, "handover_failure_rate");
  const double ht = handover_triggered_rate(mean_distance, g.k, in.region_area, in.n_bs_mean, in.mobility);
  const double hft = handover_triggered_rate(mean_distance, g.k_f, in.region_area, in.n_bs_mean, in.mobility);
  if (ht == 0.0) return 0.0;
  const double p_fail = 1.0 - prob_sojourn_ge(in.pair, in.thresholds.t_threshold, in.mobility.velocity, g.k_f,
                                              in.lambda_m, in.lambda_s, in.sigma);
  return hft * p_fail / ht;
}

struct PingPong {
  double rate = 0.0;
  double raw_bracket = 0.0;
  bool clamped = false;
};

/// H_t [P(S >= T; xi) - P(S >= T_p; xi_f)], clamped at zero.
inline PingPong pingpong_rate(const AnalyticInputs& in, double mean_distance) {
  const auto g = pair_geometry(in, mean_distance);
  require_k(g.k_f, "pingpong_rate");
  const double ht = handover_triggered_rate(mean_distance, g.k, in.region_area, in.n_bs_mean, in.mobility);
  const double v = in.mobility.velocity;
  const double bracket =
      prob_sojourn_ge(in.pair, in.thresholds.t_threshold, v, g.k, in.lambda_m, in.lambda_s, in.sigma) -
      prob_sojourn_ge(in.pair, in.thresholds.t_pingpong, v, g.k_f, in.lambda_m, in.lambda_s, in.sigma);
  PingPong out;
  out.raw_bracket = bracket;
  out.clamped = bracket < 0.0;
  out.rate = ht * std::max(bracket, 0.0);
  return out;
}

inline HandoverMetrics evaluate_metrics(const AnalyticInputs& in, double mean_distance) {
  in.thresholds.validate();
  in.mobility.validate();
  const auto g = pair_geometry(in, mean_distance);
  HandoverMetrics m;
  m.pair = in.pair;
  m.mean_distance = mean_distance;
  m.k = g.k;
  m.k_f = g.k_f;
  m.triggered_rate = handover_triggered_rate(mean_distance, g.k, in.region_area, in.n_bs_mean, in.mobility);
  m.failure_triggered_rate = handover_triggered_rate(mean_distance, g.k_f, in.region_area, in.n_bs_mean, in.mobility);
  m.handover_rate = handover_rate(in, mean_distance);
  m.failure_rate = handover_failure_rate(in, mean_distance);
  const auto pp = pingpong_rate(in, mean_distance);
  m.pingpong_rate = pp.rate;
  m.pingpong_clamped = pp.clamped;
  return m;
}

inline HandoverMetrics evaluate_metrics(const AnalyticInputs& in, MeanDistanceMode mode = MeanDistanceMode::UpperBound) {
  return evaluate_metrics(in, pair_mean_distance(in.pair, in.lambda_m, in.lambda_s, in.sigma, mode));
}

}  // namespace hho

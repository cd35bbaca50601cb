#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hho {

namespace detail {

inline constexpr double kI0SeriesLimit = 30.0;

// sum_k (z^2/4)^k / (k!)^2; all terms positive, so no cancellation.
inline double i0_power_series(double z) noexcept {
  const double q = 0.25 * z * z;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// sqrt(2 pi z) e^-z I0(z) ~ sum_k ((2k-1)!!)^2 / (k! (8z)^k)
inline double i0_asymptotic_scaled(double z) noexcept {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * z);
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace detail

/// Modified Bessel function I0 for z >= 0: power series up to z = 30, the
/// large-argument expansion beyond.
inline double i0_series(double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("i0_series: z must be >= 0");
  if (z <= detail::kI0SeriesLimit) return detail::i0_power_series(z);
  return std::exp(z) * detail::i0_asymptotic_scaled(z);
}

/// e^-z I0(z); finite for every z >= 0.
inline double i0_scaled(double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("i0_scaled: z must be >= 0");
  if (z <= detail::kI0SeriesLimit) return std::exp(-z) * detail::i0_power_series(z);
  return detail::i0_asymptotic_scaled(z);
}

/// Piecewise exponential-sum approximation I0(z) ~ sum_k a_k exp(b_k z).
struct BesselApproxTable {
  struct Term {
    double a;
    double b;
  };
  struct Interval {
    double lower;  // inclusive
    double upper;  // exclusive; +inf for the last one
    std::array<Term, 4> terms;
  };
  std::array<Interval, 4> intervals;

  std::size_t interval_of(double z) const noexcept {
    for (std::size_t i = 0; i + 1 < intervals.size(); ++i)
      if (z < intervals[i].upper) return i;
    return intervals.size() - 1;
  }
};

/// Coefficients as published, including the odd-looking b = -163.4 entry.
inline constexpr BesselApproxTable kBesselApproxTable{{{
    {0.0, 11.5, {{{0.1682, 0.7536}, {0.1472, 0.9736}, {0.4450, -0.715}, {0.2382, 0.2343}}}},
    {11.5, 20.0, {{{0.2667, 0.4710}, {0.4916, -163.4}, {0.1110, 0.9852}, {0.1304, 0.8554}}}},
    {20.0, 37.25, {{{0.1121, 0.9807}, {0.1055, 0.8672}, {-1.8e-4, 1.0795}, {0.0033, 1.0385}}}},
    {37.25, std::numeric_limits<double>::infinity(), {{{2.4e-9, 1.144}, {0.0675, 0.995}, {0.0547, 0.567}, {0.0787, 0.946}}}},
}}};

/// Sum of one interval's four exponentials, evaluated at any z.
inline double exp_sum(const BesselApproxTable::Interval& iv, double z) noexcept {
  double s = 0.0;
  for (const auto& t : iv.terms) s += t.a * std::exp(t.b * z);
  return s;
}

inline double i0_exp_approx(double z, const BesselApproxTable& table = kBesselApproxTable) {
  if (!(z >= 0.0)) throw std::invalid_argument("i0_exp_approx: z must be >= 0");
  return exp_sum(table.intervals[table.interval_of(z)], z);
}

/// Marcum Q-function of order one,
///   Q1(a, b) = int_b^inf x exp(-(x^2 + a^2)/2) I0(a x) dx.
///
/// Evaluated through the Poisson mixture of the noncentral chi-square law:
/// Q1(a, b) = sum_k Pois(k; a^2/2) P[Pois(b^2/2) <= k]. Every term is
/// non-negative, and the weights are formed in log space so that large
/// arguments neither overflow nor underflow prematurely.
inline double marcum_q1(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("marcum_q1: arguments must be >= 0");
  if (b == 0.0) return 1.0;
  const double mu = 0.5 * a * a;
  const double nu = 0.5 * b * b;
  if (mu == 0.0) return std::exp(-nu);

  const double log_mu = std::log(mu);
  const double log_nu = std::log(nu);
  const double spread = std::sqrt(mu);
  const auto k_max = static_cast<long>(mu + 40.0 * spread + 200.0);

  double q = 0.0;
  double weight_sum = 0.0;
  double cdf_nu = 0.0;  // P[Pois(nu) <= k]
  for (long k = 0; k <= k_max; ++k) {
    const double lg = std::lgamma(static_cast<double>(k) + 1.0);
    const double kd = static_cast<double>(k);
    cdf_nu = std::min(1.0, cdf_nu + std::exp(-nu + kd * log_nu - lg));
    const double w = std::exp(-mu + kd * log_mu - lg);
    q += w * cdf_nu;
    weight_sum += w;
    if (kd > mu + 10.0 * spread + 20.0 && w < 1e-20) break;
  }
  // Residual weight beyond the loop multiplies a CDF that is already ~1.
  q += std::max(0.0, 1.0 - weight_sum) * cdf_nu;
  return std::clamp(q, 0.0, 1.0);
}

/// Error function; the standard library's implementation is accurate to a few ulp.
inline double erf(double x) noexcept { return std::erf(x); }

}  // namespace hho

#include <gtest/gtest.h>

#include <cmath>

#include "hho/analytics.hpp"
#include "hho/geometry.hpp"
#include "oracles.hpp"

using namespace hho;

namespace {
using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

AnalyticInputs inputs(PairKind p) {
  AnalyticInputs in;
  in.pair = p;
  return in;
}

double h(const AnalyticInputs& in) { return evaluate_metrics(in).handover_rate; }
double hf(const AnalyticInputs& in) { return evaluate_metrics(in).failure_rate; }
}  // namespace

TEST(PairKind, NamesRoundTrip) {
  for (auto p : kAllPairs) EXPECT_EQ(parse_pair(pair_name(p)), p);
  EXPECT_EQ(parse_pair("SpS"), PairKind::SpS);
  EXPECT_THROW(parse_pair("MM"), std::invalid_argument);
  EXPECT_EQ(kAllPairs.size(), 3u);
}

TEST(DistanceSm, CdfEndsAndMedian) {
  const double lam = 3e-6;
  EXPECT_EQ(cdf_r_sm(0.0, lam), 0.0);
  EXPECT_NEAR(cdf_r_sm(1e5, lam), 1.0, 1e-15);
  EXPECT_NEAR(cdf_r_sm(std::sqrt(std::log(2.0) / (M_PI * lam)), lam), 0.5, 1e-14);
  EXPECT_THROW(pdf_r_sm(-1, lam), std::invalid_argument);
}

TEST(DistanceSm, PdfIntegratesToOne) {
  const double lam = 2e-6;
  const double total = GK::integrate([&](double r) { return pdf_r_sm(r, lam); }, 0.0, 20.0 / std::sqrt(lam), 20, 1e-14);
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(DistanceSm, MeanValues) {
  EXPECT_DOUBLE_EQ(mean_r_sm(1e-6), 500.0);
  EXPECT_DOUBLE_EQ(mean_r_sm(4e-6), 250.0);
  EXPECT_THROW(mean_r_sm(0.0), std::invalid_argument);
}

TEST(DistanceSm, MonteCarloMean) {
  Rng rng(31);
  const double lam = 1e-6;
  const Region r = Region::square(8000);
  double s = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) s += nearest_neighbor_distance(r.center(), sample_ppp(r, lam, rng));
  EXPECT_NEAR(s / n, mean_r_sm(lam), 0.01 * mean_r_sm(lam));
}

TEST(Rician, ZeroOffsetIsRayleigh) {
  for (double r : {1.0, 50.0, 300.0}) EXPECT_NEAR(rician_cdf(r, 0.0, 100.0), 1.0 - std::exp(-r * r / 2e4), 1e-14);
}

TEST(Rician, UnitCase) {
  EXPECT_NEAR(rician_cdf(1.0, 1.0, 1.0), 1.0 - oracle::marcum_q1_quadrature(1.0, 1.0), 1e-8);
  EXPECT_NEAR(rician_cdf(1.0, 1.0, 1.0), 0.26719, 1e-4);
}

TEST(Rician, CdfEqualsIntegratedPdfOnGrid) {
  for (double w : {0.0, 30.0, 120.0, 400.0})
    for (double s : {40.0, 150.0})
      for (double r : {5.0, 60.0, 200.0, 500.0}) {
        const double integral = GK::integrate([&](double x) { return rician_pdf(x, w, s); }, 0.0, r, 20, 1e-13);
        ASSERT_NEAR(rician_cdf(r, w, s), integral, 1e-6) << w << " " << s << " " << r;
      }
}

TEST(Rician, PdfStableForLargeArguments) {
  const double v = rician_pdf(5000.0, 5000.0, 10.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, 1.0 / (10.0 * std::sqrt(2 * M_PI)), 1e-4);
}

TEST(MeanCluster, MatchesLaguerreOracle) {
  for (double l : {1e-6, 2e-5, 1e-4})
    for (double s : {50.0, 150.0, 300.0}) {
      const double want = oracle::mean_cluster_distance(l, s);
      EXPECT_NEAR(mean_cluster_distance_numeric(l, s), want, 1e-6 * want);
    }
}

TEST(MeanCluster, SmallSigmaCollapsesToPpp) {
  EXPECT_NEAR(mean_cluster_distance_numeric(2e-5, 0.5), mean_r_sm(2e-5), 0.002 * mean_r_sm(2e-5));
}

TEST(MeanCluster, MonteCarloWithinTwoPercent) {
  // Parent at the origin, a PPP field of reference BSs, child scattered
  // around the parent; distance from the child to the BS nearest the parent.
  Rng rng(32);
  const double lam = 2e-5, sigma = 150;
  const Region r(-1500, 1500, -1500, 1500);
  double s = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto field = sample_ppp(r, lam, rng);
    const auto nb = nearest_neighbor({0, 0}, field.points);
    const Point2 child = scatter_offspring({0, 0}, sigma, rng);
    s += distance(child, field.points[nb.index]);
  }
  const double want = mean_cluster_distance_numeric(lam, sigma);
  EXPECT_NEAR(s / n, want, 0.02 * want);
}

TEST(MeanCluster, RejectsBadInput) {
  EXPECT_THROW(mean_cluster_distance_numeric(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(mean_cluster_distance_numeric(1e-5, 0.0), std::invalid_argument);
}

TEST(FkExact, ZeroOffset) {
  for (double s : {10.0, 150.0}) EXPECT_NEAR(f_k_exact(0.0, s, 0.7), std::sqrt(M_PI / 2) * s * s * s, 1e-9 * s * s * s);
}

TEST(FkExact, MatchesDefiningIntegral) {
  for (double w : {0.0, 20.0, 100.0})
    for (double s : {50.0, 150.0})
      for (double b : {0.2343, 0.7536, 0.9736, -0.715}) {
        const double integral = GK::integrate(
            [&](double r) { return r * r * std::exp(-r * r / (2 * s * s) + b * w * r / (s * s)); }, 0.0,
            std::max(0.0, b * w) + 40 * s, 20, 1e-14);
        ASSERT_NEAR(f_k_exact(w, s, b) / integral, 1.0, 1e-8) << w << " " << s << " " << b;
      }
}

TEST(FkExact, IncreasingInOffsetForPositiveB) {
  for (double b : {0.2343, 0.9736}) {
    double prev = f_k_exact(0, 100, b);
    for (int i = 1; i < 2000; ++i) {
      const double v = f_k_exact(i * 0.5, 100, b);
      ASSERT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(UpperBound, DefaultPointIsAboveQuadrature) {
  const double ub = mean_cluster_distance_ub(2e-5, 150);
  EXPECT_TRUE(std::isfinite(ub));
  EXPECT_GE(ub, mean_cluster_distance_numeric(2e-5, 150));
}

TEST(UpperBound, IncreasingInSigma) {
  double prev = 0;
  for (double s = 50; s <= 400; s += 10) {
    const double v = mean_cluster_distance_ub(2e-5, s);
    ASSERT_GT(v, prev);
    prev = v;
  }
}

TEST(UpperBound, LargeQFiniteAndEventuallyDecreasingInLambda) {
  // Dense sweep in lambda at fixed sigma: rises first, then falls.
  const double s = 150;
  std::vector<double> v;
  for (int i = 0; i <= 200; ++i) v.push_back(mean_cluster_distance_ub(1e-7 * std::pow(10.0, i * 0.025), s));
  for (double x : v) ASSERT_TRUE(std::isfinite(x));
  const auto peak = std::max_element(v.begin(), v.end()) - v.begin();
  EXPECT_GT(peak, 0);
  for (std::size_t i = peak + 1; i < v.size(); ++i) ASSERT_LT(v[i], v[i - 1]);
}

TEST(UpperBound, ValidityPreconditionSignals) {
  // Interval 2 carries b = 0.9852, so 2q + 1 - b^2 > 0 holds; interval 3
  // carries b = 1.0795 which needs q > 0.0827.
  EXPECT_THROW(mean_cluster_distance_ub(1e-7, 50, kBesselApproxTable.intervals[2]), std::domain_error);
  EXPECT_NO_THROW(mean_cluster_distance_ub(1e-4, 300, kBesselApproxTable.intervals[2]));
}

TEST(TriggeredRate, ZeroDistanceAndVelocityScaling) {
  MobilityConfig m;
  EXPECT_EQ(handover_triggered_rate(0.0, 0.3, 25e6, 10, m), 0.0);
  m.pause = 0;
  const double a = handover_triggered_rate(200, 0.3, 25e6, 10, m);
  m.velocity *= 2;
  EXPECT_NEAR(handover_triggered_rate(200, 0.3, 25e6, 10, m), 2 * a, 1e-15);
  EXPECT_THROW(handover_triggered_rate(200, 1.0, 25e6, 10, m), std::domain_error);
  EXPECT_THROW(handover_triggered_rate(200, 1.5, 25e6, 10, m), std::domain_error);
}

TEST(Sojourn, LimitsInThreshold) {
  for (auto p : kAllPairs) {
    EXPECT_NEAR(prob_sojourn_ge(p, 0.0, 16.67, 0.3, 2e-6, 2e-5, 150), 1.0, 1e-15);
    EXPECT_LT(prob_sojourn_ge(p, 1e5, 16.67, 0.3, 2e-6, 2e-5, 150), 1e-12);
  }
}

TEST(Sojourn, SmBranchDirectAndChordMonteCarlo) {
  const double lam = 1e-6, v = 16.67, t = 1, k = 0.25;
  const double p = prob_sojourn_ge(PairKind::SM, t, v, k, lam, 2e-5, 150);
  EXPECT_NEAR(p, std::exp(-4 * lam * v * v * t * t * 0.75 * 0.75 / (M_PI * k)), 1e-15);
  // MC: target distance d from the PPP nearest law, circle radius
  // sqrt(k) d / (1 - k), uniformly offset straight chords weighted by the
  // crossing probability (proportional to the radius).
  Rng rng(33);
  double hit = 0, wsum = 0;
  for (int i = 0; i < 1000000; ++i) {
    const double d = std::sqrt(-std::log(rng.uniform()) / (M_PI * lam));
    const double rad = std::sqrt(k) * d / (1 - k);
    const double off = rad * rng.uniform();
    const double chord = 2 * std::sqrt(rad * rad - off * off);
    wsum += rad;
    hit += rad * (chord / v >= t);
  }
  EXPECT_NEAR(hit / wsum, p, 0.1 * p);
}

TEST(HandoverRate, ZeroThresholdEqualsTriggered) {
  for (auto p : kAllPairs) {
    auto in = inputs(p);
    in.thresholds.t_threshold = 0;
    const auto m = evaluate_metrics(in);
    EXPECT_EQ(m.handover_rate, m.triggered_rate);
    EXPECT_EQ(m.failure_rate, 0.0);
  }
}

TEST(HandoverRate, NonIncreasingInThreshold) {
  for (auto p : kAllPairs) {
    auto in = inputs(p);
    double prev = INFINITY;
    for (double t = 0; t <= 20; t += 0.25) {
      in.thresholds.t_threshold = t;
      const double v = h(in);
      ASSERT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(HandoverRate, IncreasesWithSigma) {
  auto in = inputs(PairKind::SpS);
  double prev = 0;
  for (double s : {50.0, 100.0, 150.0, 200.0}) {
    in.sigma = s;
    const double v = h(in);
    EXPECT_GT(v, prev) << s;
    prev = v;
  }
}

TEST(FailureRate, IncreasesWithVelocity) {
  auto in = inputs(PairKind::SpS);
  double prev = -1;
  for (double kmh : {10.0, 30.0, 60.0, 90.0, 120.0}) {
    in.mobility.velocity = kmh / 3.6;
    const double v = hf(in);
    EXPECT_GT(v, prev) << kmh;
    prev = v;
  }
}

TEST(FailureRate, DecreasesWithSigma) {
  auto in = inputs(PairKind::SpS);
  double prev = INFINITY;
  for (double s : {100.0, 150.0, 200.0, 250.0, 300.0}) {
    in.sigma = s;
    const double v = hf(in);
    EXPECT_LT(v, prev) << s;
    prev = v;
  }
}

TEST(FailureRate, BoundedAndSaturatingInThreshold) {
  for (auto p : kAllPairs) {
    auto in = inputs(p);
    const auto m0 = evaluate_metrics(in);
    const double cap = m0.failure_triggered_rate / m0.triggered_rate;
    for (double t : {0.5, 1.0, 4.0, 30.0}) {
      in.thresholds.t_threshold = t;
      const double v = hf(in);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, cap * (1 + 1e-12));
    }
    in.thresholds.t_threshold = 1e6;
    EXPECT_NEAR(hf(in), cap, 1e-9 * cap);
  }
}

TEST(PingPong, CancelsWhenThresholdsAndCirclesMatch) {
  for (auto p : kAllPairs) {
    auto in = inputs(p);
    in.thresholds.q_out = 1.0;
    in.thresholds.t_pingpong = in.thresholds.t_threshold;
    const auto pp = pingpong_rate(in, pair_mean_distance(p, in.lambda_m, in.lambda_s, in.sigma, MeanDistanceMode::UpperBound));
    EXPECT_EQ(pp.rate, 0.0);
    EXPECT_FALSE(pp.clamped);
  }
}

TEST(PingPong, RisesThenSaturatesInTp) {
  auto in = inputs(PairKind::SpS);
  std::vector<double> v;
  for (double tp : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
    in.thresholds.t_pingpong = tp;
    v.push_back(evaluate_metrics(in).pingpong_rate);
  }
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_GE(v[i], v[i - 1]);
  EXPECT_LE((v.back() - v[v.size() - 2]) / v.back(), 0.05);
}

TEST(PingPong, BracketSignAcrossSweepGrid) {
  int negative = 0, total = 0;
  for (auto p : kAllPairs)
    for (double s : {50.0, 100.0, 150.0, 200.0, 300.0})
      for (double ls : {5e-6, 1e-5, 2e-5, 5e-5, 1e-4})
        for (double t : {0.5, 1.0, 2.0, 4.0}) {
          auto in = inputs(p);
          in.sigma = s;
          in.lambda_s = ls;
          in.lambda_m = ls / 10;
          in.thresholds.t_threshold = t;
          in.thresholds.t_pingpong = 1.5 * t;
          const auto pp = pingpong_rate(in, pair_mean_distance(p, in.lambda_m, in.lambda_s, s, MeanDistanceMode::Quadrature));
          ++total;
          negative += pp.raw_bracket < 0;
          ASSERT_GE(pp.rate, 0.0);
          ASSERT_EQ(pp.clamped, pp.raw_bracket < 0);
        }
  RecordProperty("negative_brackets", std::to_string(negative) + "/" + std::to_string(total));
}

TEST(Metrics, InvariantsOverGrid) {
  for (auto p : kAllPairs)
    for (auto mode : {MeanDistanceMode::UpperBound, MeanDistanceMode::Quadrature})
      for (double s : {100.0, 200.0})
        for (double kmh : {20.0, 60.0, 120.0}) {
          auto in = inputs(p);
          in.sigma = s;
          in.mobility.velocity = kmh / 3.6;
          const auto m = evaluate_metrics(in, mode);
          ASSERT_GE(m.handover_rate, 0.0);
          ASSERT_LE(m.handover_rate, m.triggered_rate);
          ASSERT_GE(m.failure_rate, 0.0);
          ASSERT_LE(m.failure_rate, 1.0);
          ASSERT_GE(m.pingpong_rate, 0.0);
        }
}

TEST(Metrics, DegeneratePairRejected) {
  auto in = inputs(PairKind::SpS);
  in.tiers[tier_index(Tier::Hotspot)] = in.tiers[tier_index(Tier::Small)];
  EXPECT_THROW(evaluate_metrics(in), std::domain_error);
}

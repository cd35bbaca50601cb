#include <gtest/gtest.h>

#include <cmath>

#include "hho/analytics.hpp"
#include "hho/specfun.hpp"
#include "oracles.hpp"

using namespace hho;

TEST(I0, KnownValues) {
  EXPECT_DOUBLE_EQ(i0_series(0.0), 1.0);
  EXPECT_NEAR(i0_series(1.0), 1.2660658777520082, 1e-15);
  EXPECT_THROW(i0_series(-1.0), std::invalid_argument);
}

TEST(I0, MatchesStdBesselToTwelveDigits) {
  for (int i = 0; i <= 5000; ++i) {
    const double z = i * 0.01;
    ASSERT_NEAR(i0_series(z) / oracle::i0(z), 1.0, 1e-12) << z;
  }
}

TEST(I0, ScaledIsConsistentAndFinite) {
  for (double z : {0.0, 0.5, 10.0, 29.9, 30.1, 200.0}) EXPECT_NEAR(i0_scaled(z) * std::exp(z) / oracle::i0(z), 1.0, 1e-12);
  EXPECT_TRUE(std::isfinite(i0_scaled(1e6)));
  EXPECT_GT(i0_scaled(1e6), 0.0);
}

TEST(I0, MonotoneAboveOne) {
  double prev = 1.0;
  for (int i = 1; i < 2000; ++i) {
    const double v = i0_series(i * 0.025);
    ASSERT_GT(v, prev);
    prev = v;
  }
}

TEST(BesselTable, VerbatimCoefficients) {
  const auto& t = kBesselApproxTable;
  EXPECT_EQ(t.intervals[0].terms[0].a, 0.1682);
  EXPECT_EQ(t.intervals[1].terms[1].b, -163.4);
  EXPECT_EQ(t.intervals[2].terms[2].a, -1.8e-4);
  EXPECT_EQ(t.intervals[3].terms[0].a, 2.4e-9);
  EXPECT_EQ(t.intervals[3].terms[3].b, 0.946);
  EXPECT_EQ(t.interval_of(0.0), 0u);
  EXPECT_EQ(t.interval_of(11.5), 1u);
  EXPECT_EQ(t.interval_of(37.249), 2u);
  EXPECT_EQ(t.interval_of(1e9), 3u);
}

TEST(BesselTable, SumOfFirstIntervalAtZero) { EXPECT_NEAR(i0_exp_approx(0.0), 0.9986, 1e-12); }

TEST(BesselTable, WithinFivePercentOnFiniteIntervals) {
  const double edges[4] = {0.0, 11.5, 20.0, 37.25};
  for (int i = 0; i < 3; ++i) {
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      const double z = edges[i] + (edges[i + 1] - edges[i]) * k / 1000.0;
      worst = std::max(worst, std::abs(i0_exp_approx(z) / i0_series(z) - 1.0));
    }
    RecordProperty("max_rel_error_interval_" + std::to_string(i), std::to_string(worst));
    EXPECT_LE(worst, 0.05);
  }
}

TEST(BesselTable, JumpsAtJoinsReported) {
  for (double z : {11.5, 20.0, 37.25}) {
    const double left = i0_exp_approx(std::nextafter(z, 0.0)), right = i0_exp_approx(z);
    RecordProperty("jump_at_" + std::to_string(z), std::to_string((right - left) / i0_series(z)));
    EXPECT_TRUE(std::isfinite(right - left));
  }
}

TEST(MarcumQ, EdgeCases) {
  for (double a : {0.0, 0.3, 2.0, 9.0}) EXPECT_EQ(marcum_q1(a, 0.0), 1.0);
  for (double b : {0.1, 1.0, 3.0, 6.0}) EXPECT_NEAR(marcum_q1(0.0, b), std::exp(-b * b / 2), 1e-15);
  EXPECT_NEAR(marcum_q1(1.0, 1.0), oracle::marcum_q1_quadrature(1.0, 1.0), 1e-8);
  EXPECT_NEAR(marcum_q1(1.0, 1.0), 0.73281, 1e-4);
  EXPECT_THROW(marcum_q1(-1.0, 1.0), std::invalid_argument);
}

TEST(MarcumQ, GridAgainstQuadratureAndNcx2) {
  double worst = 0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double a = i * 0.5, b = j * 0.5;
      const double q = marcum_q1(a, b);
      worst = std::max({worst, std::abs(q - oracle::marcum_q1_quadrature(a, b)), std::abs(q - oracle::marcum_q1_ncx2(a, b))});
    }
  EXPECT_LE(worst, 1e-8);
}

TEST(MarcumQ, LargeArgumentsStayAccurate) {
  for (auto [a, b] : {std::pair{30.0, 28.0}, {50.0, 52.0}, {100.0, 95.0}, {5.0, 40.0}})
    EXPECT_NEAR(marcum_q1(a, b), oracle::marcum_q1_ncx2(a, b), 1e-8) << a << "," << b;
}

TEST(MarcumQ, RangeAndMonotonicity) {
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double a = i * 0.4, b = j * 0.4;
      const double q = marcum_q1(a, b);
      ASSERT_GE(q, 0.0);
      ASSERT_LE(q, 1.0);
      ASSERT_LE(marcum_q1(a, b + 0.4), q + 1e-15);
      ASSERT_GE(marcum_q1(a + 0.4, b), q - 1e-15);
    }
}

TEST(MarcumQ, RicianCdfMatchesIntegratedPdf) {
  for (auto [w, s] : {std::pair{50.0, 100.0}, {200.0, 150.0}, {0.0, 80.0}})
    for (double r : {10.0, 100.0, 250.0, 600.0}) {
      const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double x) { return rician_pdf(x, w, s); }, 0.0, r, 15, 1e-12);
      EXPECT_NEAR(1.0 - marcum_q1(w / s, r / s), integral, 1e-6);
    }
}

TEST(Erf, Values) {
  EXPECT_EQ(hho::erf(0.0), 0.0);
  EXPECT_NEAR(hho::erf(1.0), 0.8427007929497149, 1e-15);
  for (double x = -5.0; x <= 5.0; x += 0.173) {
    EXPECT_NEAR(hho::erf(-x), -hho::erf(x), 1e-15);
    EXPECT_NEAR(hho::erf(x), oracle::erf_series(x), 1e-12);
  }
}

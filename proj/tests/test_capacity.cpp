#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "ranslice/capacity.hpp"
#include "ranslice/rng.hpp"

using namespace ranslice;

namespace {

// Reference radio setup used throughout: 20 MHz, -5 dB SINR target.
RadioParams reference_params() {
  RadioParams p;
  p.k = 9.89e-5;
  p.d0 = 1.0;
  p.alpha = 3.0;
  p.noise = noise_watts_from_bandwidth(20e6);
  p.sinr_min = db_to_linear(-5.0);
  p.mu = 0.8;
  return p;
}

constexpr double kLambda = 8400.0;

// Inverse of the closed form: SINR seen by a user at distance d when the RRH
// admits n users, through the intra-cell interference term.
double sinr_at_load(const RadioParams& p, double capacity, double d, double n) {
  const double pw = received_power(p, d);
  const double interferers = p.mu * n / (capacity - p.mu * n) - 1.0;
  return pw / (p.noise + interferers * pw);
}

}  // namespace

TEST(DbConversion, RoundTrip) {
  EXPECT_DOUBLE_EQ(db_to_linear(0.0), 1.0);
  EXPECT_DOUBLE_EQ(db_to_linear(10.0), 10.0);
  EXPECT_NEAR(db_to_linear(-5.0), 0.31622776601683794, 1e-15);
  for (double db = -30; db <= 30; db += 7.3)
    EXPECT_NEAR(linear_to_db(db_to_linear(db)), db, 1e-12);
}

TEST(NoiseFloor, TwentyMegahertz) {
  const double n = noise_watts_from_bandwidth(20e6);
  EXPECT_NEAR(n, 7.962143411069939e-14, 1e-27);
  EXPECT_GT(noise_watts_from_bandwidth(20e6), noise_watts_from_bandwidth(5e6));
}

TEST(RadioParams, Validation) {
  RadioParams p = reference_params();
  EXPECT_NO_THROW(p.validate());
  p.mu = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = reference_params();
  p.mu = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = reference_params();
  p.alpha = 0.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = reference_params();
  p.sinr_min = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(ReceivedPower, CubeLaw) {
  RadioParams p = reference_params();
  EXPECT_DOUBLE_EQ(received_power(p, 1.0), 9.89e-5);
  EXPECT_DOUBLE_EQ(received_power(p, 2.0), 9.89e-5 / 8.0);
  EXPECT_DOUBLE_EQ(received_power(p, 10.0), 9.89e-5 * 1e-3);
  EXPECT_GT(received_power(p, 50.0), received_power(p, 51.0));
  EXPECT_THROW(received_power(p, 0.5), std::domain_error);
}

TEST(QoeUsers, VanishingSinrTargetApproachesFullAccess) {
  RadioParams p = reference_params();
  p.sinr_min = 1e-12;
  const double unclamped = qoe_users_at_distance_unclamped(p, kLambda, 50.0);
  EXPECT_NEAR(unclamped, kLambda / p.mu, 1e-4 * kLambda);
  EXPECT_DOUBLE_EQ(qoe_users_at_distance(p, kLambda, 50.0), kLambda);
}

TEST(QoeUsers, ClosedFormInvertsSinrModel) {
  const RadioParams p = reference_params();
  for (double d : {10.0, 50.0, 120.0, 200.0}) {
    const double n = qoe_users_at_distance_unclamped(p, kLambda, d);
    const double sinr = sinr_at_load(p, kLambda, d, n);
    EXPECT_NEAR(sinr, p.sinr_min, 1e-9 * p.sinr_min) << "d=" << d;
  }
}

TEST(QoeUsers, MatchesBisectionOracle) {
  const RadioParams p = reference_params();
  const double d = 50.0;
  const double closed = qoe_users_at_distance_unclamped(p, kLambda, d);

  // Denominator-free form of the target condition; strictly decreasing in n
  // even where the interference term dips negative.
  const double pw = received_power(p, d);
  auto gap = [&](double n) {
    const double interferers = p.mu * n / (kLambda - p.mu * n) - 1.0;
    return pw - p.sinr_min * (p.noise + interferers * pw);
  };
  double lo = 0.0, hi = kLambda / p.mu * (1.0 - 1e-12);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  EXPECT_NEAR(closed, 0.5 * (lo + hi), 1e-9 * closed);
}

TEST(QoeUsers, InfeasibleTargetThrows) {
  RadioParams p = reference_params();
  p.sinr_min = 1e6;
  // Beyond ~1 km the noise term dominates and no admission meets the target.
  EXPECT_THROW(qoe_users_at_distance(p, kLambda, 2000.0), InfeasibleSinrError);
  EXPECT_THROW(qoe_users_at_distance(p, kLambda, 1180.0), InfeasibleSinrError);
}

TEST(QoeUsers, InvalidInputsThrow) {
  const RadioParams p = reference_params();
  EXPECT_THROW(qoe_users_at_distance(p, 0.0, 50.0), std::invalid_argument);
  EXPECT_THROW(qoe_users_at_distance(p, kLambda, 0.1), std::domain_error);
}

TEST(QoeUsers, RemarkOneMonotonicities) {
  const RadioParams base = reference_params();
  // Short range saturates the clamp, so compare pre-clamp values for d.
  EXPECT_DOUBLE_EQ(qoe_users_at_distance(base, kLambda, 50.0), kLambda);
  EXPECT_GT(qoe_users_at_distance_unclamped(base, kLambda, 50.0),
            qoe_users_at_distance_unclamped(base, kLambda, 100.0));

  RadioParams stricter = base;
  stricter.sinr_min = db_to_linear(0.0);
  EXPECT_GT(qoe_users_at_distance_unclamped(base, kLambda, 100.0),
            qoe_users_at_distance_unclamped(stricter, kLambda, 100.0));

  RadioParams busier = base;
  busier.mu = 0.95;
  EXPECT_GT(qoe_users_at_distance_unclamped(base, kLambda, 100.0),
            qoe_users_at_distance_unclamped(busier, kLambda, 100.0));

  EXPECT_NEAR(qoe_users_at_distance_unclamped(base, 2.0 * kLambda, 100.0),
              2.0 * qoe_users_at_distance_unclamped(base, kLambda, 100.0),
              1e-9 * kLambda);
}

TEST(DiskDensity, NormalizedAndGuarded) {
  const DistanceDensity den = disk_density(200.0);
  // Analytic integral of 2d/d_max^2 over [0, d_max].
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += den.pdf((i + 0.5) * 200.0 / n) * 200.0 / n;
  EXPECT_NEAR(sum, 1.0, 1e-6);
  EXPECT_DOUBLE_EQ(den.pdf(250.0), 0.0);
  EXPECT_THROW(disk_density(0.0), std::invalid_argument);
}

TEST(ExpectedQoe, SmoothBumpMatchesDirectIntegral) {
  const RadioParams p = reference_params();
  // Raised-cosine bump on [40, 60]; smooth enough for the adaptive panels.
  const double c = 50.0, h = 10.0;
  const double pi = std::acos(-1.0);
  DistanceDensity bump;
  bump.d_max = 60.0;
  bump.pdf = [c, h, pi](double d) {
    if (d < c - h || d > c + h) return 0.0;
    return (1.0 + std::cos(pi * (d - c) / h)) / (2.0 * h);
  };
  const ExpectedQoe e = expected_qoe_users(p, kLambda, bump);
  double oracle = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double d = (i + 0.5) * 60.0 / n;
    const double f = bump.pdf(d);
    if (f <= 0.0) continue;
    oracle += f * qoe_users_at_distance(p, kLambda, d) * 60.0 / n;
  }
  EXPECT_NEAR(e.value, oracle, 1e-6 * oracle);
  EXPECT_FALSE(e.infeasible_region);
}

TEST(ExpectedQoe, MatchesMonteCarloOnDisk) {
  const RadioParams p = reference_params();
  const ExpectedQoe e = expected_qoe_users(p, kLambda, disk_density(200.0));

  Rng rng(4242);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = 200.0 * std::sqrt(rng.uniform01());
    const double v = detail::qoe_users_unclamped_or_nan(p, kLambda, d);
    if (!std::isnan(v)) sum += std::min(std::max(v, 0.0), kLambda);
  }
  const double mc = sum / n;
  EXPECT_NEAR(e.value, mc, 5e-3 * mc);
  EXPECT_GT(e.value, 0.0);
  EXPECT_LE(e.value, kLambda);
}

TEST(ExpectedQoe, QuadratureStableUnderTighterTolerance) {
  const RadioParams p = reference_params();
  const double coarse = expected_qoe_users(p, kLambda, disk_density(200.0), 1e-8).value;
  const double fine = expected_qoe_users(p, kLambda, disk_density(200.0), 1e-10).value;
  EXPECT_NEAR(coarse, fine, 1e-6 * fine);
}

TEST(ExpectedQoe, AllMassInfeasibleYieldsZeroWithFlag) {
  RadioParams p = reference_params();
  p.sinr_min = 1e6;
  DistanceDensity far;
  far.d_max = 2000.0;
  far.pdf = [](double d) { return (d >= 1900.0 && d <= 2000.0) ? 0.01 : 0.0; };
  const ExpectedQoe e = expected_qoe_users(p, kLambda, far);
  EXPECT_DOUBLE_EQ(e.value, 0.0);
  EXPECT_TRUE(e.infeasible_region);
}

TEST(ExpectedQoe, InvalidDensityThrows) {
  const RadioParams p = reference_params();
  EXPECT_THROW(expected_qoe_users(p, kLambda, DistanceDensity{}), std::invalid_argument);
}

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fdwave/fracweights.hpp"

using namespace fdwave;

namespace {

// Independent oracle: omega_k = Gamma(k + a) / (Gamma(a) Gamma(k + 1)).
long double lgamma_weight(double a, int k) {
  return std::exp(std::lgamma(static_cast<long double>(k) + a) -
                  std::lgamma(static_cast<long double>(a)) -
                  std::lgamma(static_cast<long double>(k) + 1.0L));
}

const std::vector<double> kOrders{0.1, 0.25, 0.5, 0.75, 0.9};

} // namespace

TEST(GrunwaldWeights, SingleWeight) {
  EXPECT_EQ(grunwald_weights(0.5, 0), std::vector<double>{1.0});
}

TEST(GrunwaldWeights, SmallSequencesMatchLogGammaOracle) {
  const std::vector<double> half{1.0, 0.5, 0.375, 0.3125};
  const std::vector<double> quarter{1.0, 0.25, 0.15625};
  const auto w = grunwald_weights(0.5, 3);
  const auto v = grunwald_weights(0.25, 2);
  ASSERT_EQ(w.size(), 4u);
  ASSERT_EQ(v.size(), 3u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(half[k], static_cast<double>(lgamma_weight(0.5, k)), 1e-15);
    EXPECT_DOUBLE_EQ(w[k], half[k]);
  }
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(quarter[k], static_cast<double>(lgamma_weight(0.25, k)), 1e-15);
    EXPECT_DOUBLE_EQ(v[k], quarter[k]);
  }
}

TEST(GrunwaldWeights, RejectsOrdersOutsideUnitInterval) {
  for (double a : {0.0, 1.0, -0.3, 1.5, std::numeric_limits<double>::quiet_NaN()}) {
    EXPECT_THROW(grunwald_weights(a, 4), DomainError);
    EXPECT_THROW(scheme_weights(a, 4), DomainError);
  }
}

TEST(GrunwaldWeights, RejectsUnrepresentableCount) {
  EXPECT_THROW(grunwald_weights(0.5, std::numeric_limits<std::size_t>::max()), CapacityError);
}

TEST(GrunwaldWeights, RecurrenceMatchesOracleUpToThousand) {
  for (double a : kOrders) {
    const auto w = grunwald_weights(a, 1000);
    for (int k = 0; k <= 1000; ++k) {
      const long double ref = lgamma_weight(a, k);
      EXPECT_LE(std::abs(w[k] - ref) / ref, 1e-12) << "alpha " << a << " k " << k;
    }
  }
}

TEST(GrunwaldWeights, PositiveAndStrictlyDecreasing) {
  for (double a : kOrders) {
    const auto w = grunwald_weights(a, 500);
    EXPECT_EQ(w[0], 1.0);
    for (std::size_t k = 1; k < w.size(); ++k) {
      EXPECT_GT(w[k], 0.0);
      EXPECT_LT(w[k], w[k - 1]);
    }
  }
}

TEST(SchemeWeights, HandValues) {
  const WeightTable half = scheme_weights(0.5, 2);
  ASSERT_EQ(half.lambda().size(), 3u);
  EXPECT_DOUBLE_EQ(half.lambda(0), 0.75);
  EXPECT_DOUBLE_EQ(half.lambda(1), 0.625);
  EXPECT_DOUBLE_EQ(half.lambda(2), 0.40625);

  EXPECT_DOUBLE_EQ(scheme_weights(0.999, 3).lambda(0), 0.5005);

  const WeightTable quarter = scheme_weights(0.25, 1);
  EXPECT_DOUBLE_EQ(quarter.lambda(0), 0.875);
  EXPECT_DOUBLE_EQ(quarter.lambda(1), 0.34375);
}

TEST(SchemeWeights, TableInvariants) {
  for (double a : kOrders) {
    const WeightTable t(a, 200);
    EXPECT_EQ(t.alpha(), a);
    EXPECT_EQ(t.omega().size(), t.lambda().size());
    EXPECT_EQ(t.lambda(0), 1.0 - a / 2.0);
    for (std::size_t k = 1; k < t.size(); ++k) {
      EXPECT_EQ(t.lambda(k), (1.0 - a / 2.0) * t.omega(k) + (a / 2.0) * t.omega(k - 1));
      EXPECT_GT(t.lambda(k), 0.0);
    }
  }
}

TEST(Wsgd, ZeroSamplesGiveZero) {
  const std::vector<double> zeros(17, 0.0);
  for (double v : wsgd_integral(zeros, 0.3, 0.1))
    EXPECT_EQ(v, 0.0);
}

TEST(Wsgd, DegenerateShiftPair) {
  const std::vector<double> f(5, 1.0);
  EXPECT_THROW(wsgd_integral(f, 0.5, 0.1, 1, 1), DegenerateWeightsError);
  EXPECT_THROW(wsgd_integral_at(f, 2, 0.5, 0.1, 0, 0), DegenerateWeightsError);
}

TEST(Wsgd, LookAheadBeyondSamplesIsAnError) {
  const std::vector<double> f{0.0, 1.0, 2.0, 3.0};
  EXPECT_THROW(wsgd_integral_at(f, 3, 0.5, 0.1, 1, 0), OutOfRangeError);
  EXPECT_NO_THROW(wsgd_integral_at(f, 2, 0.5, 0.1, 1, 0));
  // Default pair never looks ahead.
  EXPECT_NO_THROW(wsgd_integral_at(f, 3, 0.5, 0.1));
  EXPECT_EQ(wsgd_integral(f, 0.5, 0.1, 1, 0).size(), 3u);
  EXPECT_EQ(wsgd_integral(f, 0.5, 0.1).size(), 4u);
}

TEST(Wsgd, LambdaFormEqualsTwoShiftedSums) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (double a : kOrders) {
    const int n = 60;
    std::vector<double> f(n + 1);
    for (double& v : f)
      v = unit(rng);
    const WeightTable table(a, n + 1);
    const double tau = 0.05;
    const auto result = wsgd_integral(f, a, tau);
    for (int k = 0; k <= n; ++k) {
      double lambda_form = 0.0;
      for (int j = 0; j <= k; ++j)
        lambda_form += table.lambda(j) * f[k - j];
      double split = 0.0;
      for (int j = 0; j <= k; ++j)
        split += (1.0 - a / 2.0) * table.omega(j) * f[k - j];
      for (int j = 0; j <= k - 1; ++j)
        split += (a / 2.0) * table.omega(j) * f[k - 1 - j];
      EXPECT_NEAR(lambda_form, split, 1e-14);
      EXPECT_NEAR(result[k], std::pow(tau, a) * lambda_form, 1e-14);
    }
  }
}

namespace {

double wsgd_error_at_one(const std::function<double(double)>& f, double exact, double a, int n,
                         int p = 0, int q = -1) {
  const double tau = 1.0 / n;
  std::vector<double> samples(n + 2);
  for (int k = 0; k < n + 2; ++k)
    samples[k] = f(k * tau);
  return std::abs(wsgd_integral_at(samples, n, a, tau, p, q) - exact);
}

} // namespace

TEST(Wsgd, CubicConvergesAtSecondOrder) {
  const double a = 0.5;
  const double exact = std::tgamma(4.0) / std::tgamma(4.5);
  EXPECT_NEAR(exact, 0.5158305, 1e-6);
  auto cube = [](double t) { return t * t * t; };
  const double e1 = wsgd_error_at_one(cube, exact, a, 40);
  const double e2 = wsgd_error_at_one(cube, exact, a, 80);
  const double e3 = wsgd_error_at_one(cube, exact, a, 160);
  EXPECT_NEAR(e1 / e2, 4.0, 0.3);
  EXPECT_NEAR(e2 / e3, 4.0, 0.3);
  EXPECT_LT(e3, 1e-3);
}

TEST(Wsgd, SecondOrderForSmoothZeroStartFunctions) {
  auto cube = [](double t) { return t * t * t; };
  auto wave = [](double t) { return t * t * std::sin(t); };
  for (double a : kOrders) {
    const double cube_exact = std::tgamma(4.0) / std::tgamma(4.0 + a);
    const double wave_exact = rl_integral_oracle(wave, a, 1.0, 4000);
    for (auto [f, exact] : {std::pair{std::function<double(double)>(cube), cube_exact},
                            std::pair{std::function<double(double)>(wave), wave_exact}}) {
      const double e40 = wsgd_error_at_one(f, exact, a, 40);
      const double e80 = wsgd_error_at_one(f, exact, a, 80);
      const double e160 = wsgd_error_at_one(f, exact, a, 160);
      for (double order : {std::log2(e40 / e80), std::log2(e80 / e160)}) {
        EXPECT_GE(order, 1.9) << "alpha " << a;
        EXPECT_LE(order, 2.1) << "alpha " << a;
      }
    }
  }
}

TEST(Wsgd, OtherShiftPairsAreAlsoSecondOrder) {
  auto cube = [](double t) { return t * t * t; };
  const double a = 0.4;
  const double exact = std::tgamma(4.0) / std::tgamma(4.0 + a);
  const double e1 = wsgd_error_at_one(cube, exact, a, 80, 1, 0);
  const double e2 = wsgd_error_at_one(cube, exact, a, 160, 1, 0);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
}

TEST(RlOracle, ClosedForms) {
  EXPECT_EQ(rl_integral_oracle([](double) { return 0.0; }, 0.5, 1.0), 0.0);
  EXPECT_NEAR(rl_integral_oracle([](double t) { return t; }, 0.5, 1.0), 1.0 / std::tgamma(2.5),
              1e-10);
  EXPECT_NEAR(1.0 / std::tgamma(2.5), 0.752252, 1e-6);
  for (double a : kOrders) {
    const double got = rl_integral_oracle([](double t) { return t * t * t; }, a, 1.0);
    EXPECT_NEAR(got, std::tgamma(4.0) / std::tgamma(4.0 + a), 1e-10) << "alpha " << a;
    // t^beta with beta non-integer, at t != 1.
    const double t = 0.7, beta = 2.5;
    const double got2 = rl_integral_oracle([&](double s) { return std::pow(s, beta); }, a, t);
    EXPECT_NEAR(got2,
                std::tgamma(beta + 1) / std::tgamma(beta + 1 + a) * std::pow(t, beta + a), 1e-10);
  }
}

TEST(RlOracle, EdgeCases) {
  EXPECT_EQ(rl_integral_oracle([](double) { return 1.0; }, 0.5, 0.0), 0.0);
  EXPECT_THROW(rl_integral_oracle([](double) { return 1.0; }, 0.5, 1.0, 0), DomainError);
  EXPECT_THROW(rl_integral_oracle([](double) { return std::nan(""); }, 0.5, 1.0), NumericError);
}

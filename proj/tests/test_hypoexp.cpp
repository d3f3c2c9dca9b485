#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "collapse_gauge/lambda.hpp"
#include "collapse_gauge/montecarlo.hpp"

using namespace collapse_gauge;

namespace {

std::vector<double> spaced(Rng& rng, int n, double start, double step) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = start + step * i + 0.5 * step * uniform01(rng);
  return v;
}

}  // namespace

TEST(Hypoexp, SingleTerm) {
  for (double c : {0.0, 0.3, 1.0, 5.0}) {
    EXPECT_NEAR(hypoexp_density(std::vector<double>{0.5}, c), std::exp(-c), 1e-15);
    EXPECT_NEAR(hypoexp_density_recursive(std::vector<double>{0.5}, c), std::exp(-c), 1e-15);
  }
}

TEST(Hypoexp, VanishesAtZero) {
  EXPECT_EQ(hypoexp_density(std::vector<double>{1.0, 2.0}, 0.0), 0.0);
  EXPECT_EQ(hypoexp_density_recursive(std::vector<double>{1.0, 2.0}, 0.0), 0.0);
}

TEST(Hypoexp, Validation) {
  EXPECT_THROW(hypoexp_density(std::vector<double>{1.0, 1.0}, 1.0), ValidationError);
  EXPECT_THROW(hypoexp_density(std::vector<double>{1.0, -1.0}, 1.0), ValidationError);
  EXPECT_THROW(hypoexp_density(std::vector<double>{1.0, 2.0}, -1.0), ValidationError);
  EXPECT_THROW(hypoexp_density(std::vector<double>{}, 1.0), ValidationError);
  // Repeated weights are fine for the recursion: Gamma(2, scale 2) density.
  EXPECT_NEAR(hypoexp_density_recursive(std::vector<double>{1.0, 1.0}, 3.0), 3.0 * std::exp(-1.5) / 4.0,
              1e-12);
}

TEST(Hypoexp, ClosedFormMatchesRecursion) {
  Rng rng = make_stream(1, 0);
  for (int n = 1; n <= 8; ++n) {
    for (int t = 0; t < 20; ++t) {
      const auto lams = spaced(rng, n, 0.2, 0.35);
      const double c = 15.0 * uniform01(rng);
      ASSERT_NEAR(hypoexp_density(lams, c), hypoexp_density_recursive(lams, c), 1e-8)
          << "n=" << n << " c=" << c;
    }
  }
}

TEST(Hypoexp, LargeOrderUsesRecursion) {
  Rng rng = make_stream(2, 0);
  const auto lams = spaced(rng, 24, 0.5, 0.2);
  const double c = 40.0;
  EXPECT_EQ(hypoexp_density(lams, c), hypoexp_density_recursive(lams, c));
}

TEST(Hypoexp, NormalizationAndMeanByQuadrature) {
  Rng rng = make_stream(3, 0);
  boost::math::quadrature::exp_sinh<double> integrator;
  for (int n = 1; n <= 6; ++n) {
    const auto lams = spaced(rng, n, 0.3, 0.4);
    const double mass = integrator.integrate([&](double c) { return hypoexp_density(lams, c); });
    const double mean = integrator.integrate([&](double c) { return c * hypoexp_density(lams, c); });
    double expected_mean = 0.0;
    for (double l : lams) expected_mean += 2.0 * l;
    EXPECT_NEAR(mass, 1.0, 1e-9);
    EXPECT_NEAR(mean, expected_mean, 1e-8 * expected_mean);
  }
}

TEST(Hypoexp, ExponentialMgfByQuadrature) {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double lam : {0.2, 1.0, 3.0}) {
    for (double t : {-2.0, -0.1, 0.05, 0.1}) {
      if (!(2 * lam * t < 1)) continue;
      const double mgf = integrator.integrate([&](double x) { return 0.5 * std::exp(-0.5 * x + lam * t * x); });
      EXPECT_NEAR(mgf, 1.0 / (1.0 - 2.0 * lam * t), 1e-10);
    }
  }
}

TEST(Hypoexp, HistogramChiSquare) {
  const std::vector<double> lams = {0.4, 1.0, 1.7};
  std::mt19937_64 gen(2024);
  std::exponential_distribution<double> expo(0.5);
  const int n = 1'000'000;
  const int bins = 40;
  const double upper = 30.0;
  const double width = upper / bins;
  std::vector<int> counts(bins + 1, 0);  // last bin collects the tail
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (double l : lams) s += l * expo(gen);
    ++counts[std::min(bins, static_cast<int>(s / width))];
  }
  double chi2 = 0.0;
  double covered = 0.0;
  for (int b = 0; b < bins; ++b) {
    double err = 0.0;
    const double prob = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double c) { return hypoexp_density(lams, c); }, b * width, (b + 1) * width, 5, 1e-13, &err);
    covered += prob;
    const double expected = prob * n;
    chi2 += (counts[b] - expected) * (counts[b] - expected) / expected;
  }
  const double tail = (1.0 - covered) * n;
  chi2 += (counts[bins] - tail) * (counts[bins] - tail) / tail;
  const boost::math::chi_squared dist(bins);
  const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  EXPECT_GT(p_value, 0.01) << "chi2=" << chi2;
}

TEST(LagrangeIdentity, VanishesForDistinctWeights) {
  Rng rng = make_stream(4, 0);
  for (int n = 2; n <= 10; ++n) {
    const auto lams = spaced(rng, n, 0.1, 0.3);
    EXPECT_NEAR(lagrange_identity_sum(lams), 0.0, 1e-9);
  }
}

TEST(ProbPositive, SymmetricTwoLevel) {
  EXPECT_NEAR(prob_positive_double_sum(std::vector<double>{1.0}, std::vector<double>{-1.0}), 0.5, 1e-15);
  EXPECT_NEAR(prob_positive_single_sum(std::vector<double>{1.0}, std::vector<double>{-1.0}), 0.5, 1e-15);
}

TEST(ProbPositive, DoubleSumEqualsSingleSum) {
  Rng rng = make_stream(5, 0);
  for (int t = 0; t < 100; ++t) {
    const int k = 1 + t % 4;
    const int m = 1 + (t / 4) % 4;
    const auto alphas = spaced(rng, k, 0.1, 0.3);
    auto betas = spaced(rng, m, 0.1, 0.3);
    for (double& b : betas) b = -b;
    std::vector<double> a_desc(alphas.rbegin(), alphas.rend());
    const double twofold = prob_positive_double_sum(alphas, betas);
    const double single = prob_positive_single_sum(alphas, betas);
    EXPECT_NEAR(twofold, single, 1e-9);
    EXPECT_NEAR(prob_positive_combination(alphas, betas), single, 1e-9);
    EXPECT_NEAR(single, measure_positive_form(SignedSpectrum(a_desc, betas)).value, 1e-9);
  }
}

TEST(ProbPositive, ThreeTermSpectrumAgainstMonteCarlo) {
  const double v = prob_positive_combination(std::vector<double>{0.5, 0.2}, std::vector<double>{-0.1});
  const HermitianOperator a = HermitianOperator::diagonal((RVector(3) << 0.5, 0.2, -0.1).finished());
  const EstimateWithCI est = estimate_positive_fraction(a, 1'000'000, 3);
  EXPECT_LE(std::abs(est.mean - v), 4.0 * est.std_error);
}

TEST(ProbPositive, Validation) {
  EXPECT_THROW(prob_positive_double_sum(std::vector<double>{1.0, 1.0}, std::vector<double>{-1.0}),
               ValidationError);
  EXPECT_THROW(prob_positive_single_sum(std::vector<double>{-1.0}, std::vector<double>{-1.0}), ValidationError);
  EXPECT_THROW(prob_positive_double_sum(std::vector<double>{1.0}, std::vector<double>{-1.0, -1.0}),
               ValidationError);
  // Coincident betas fall back to the single sum.
  EXPECT_NO_THROW(prob_positive_combination(std::vector<double>{1.0}, std::vector<double>{-1.0, -1.0}));
}

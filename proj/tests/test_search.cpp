#include <gtest/gtest.h>

#include <cmath>

#include <omp.h>

#include "collapse_gauge/random.hpp"
#include "collapse_gauge/search.hpp"

using namespace collapse_gauge;

namespace {

const SearchStrategy kAll[] = {SearchStrategy::uniform_projector, SearchStrategy::rank_k_projectors,
                               SearchStrategy::spectrum_parametrized,
                               SearchStrategy::random_restart_local};

void expect_same(const SearchReport& a, const SearchReport& b) {
  EXPECT_EQ(a.best_lambda, b.best_lambda);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_EQ(a.violated_conjecture, b.violated_conjecture);
  EXPECT_EQ(a.best_effect.matrix(), b.best_effect.matrix());
}

}  // namespace

TEST(UniformProjector, EffectAndSpectrum) {
  const Effect e = uniform_projector_effect(3);
  EXPECT_NEAR(e.trace(), 1.0, 1e-15);
  const RVector ev = collapse_indicator_operator(e, CollapseParams(0.47, 3)).eigenvalues();
  EXPECT_NEAR(ev[0], 0.47 / 3, 1e-4);
  EXPECT_NEAR(ev[1], 0.47 / 3, 1e-4);
  EXPECT_NEAR(ev[2], 0.47 / 3 - 0.53, 1e-4);
  EXPECT_THROW(uniform_projector_effect(1), ValidationError);
}

TEST(UniformProjector, AnalyticValueMatchesExact) {
  for (int d = 2; d <= 32; ++d) {
    for (double p = 0.01; p <= 0.5; p += 0.01) {
      EXPECT_NEAR(uniform_projector_lambda(d, p),
                  lambda_p(uniform_projector_effect(d), CollapseParams(p, d)).value, 1e-9);
    }
  }
  for (double p = 0.05; p < 1.0; p += 0.05) EXPECT_LE(uniform_projector_lambda(2, p), 0.5 + 1e-12);
  EXPECT_GT(uniform_projector_lambda(3, 0.47), 0.5);
}

TEST(Strategy, NamesRoundTrip) {
  for (SearchStrategy s : kAll) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_THROW(parse_strategy("gradient"), ValidationError);
}

TEST(MaximizeLambda, Validation) {
  EXPECT_THROW(maximize_lambda(1, 0.5, 10, SearchStrategy::rank_k_projectors, 1), ValidationError);
  EXPECT_THROW(maximize_lambda(3, 0.0, 10, SearchStrategy::rank_k_projectors, 1), ValidationError);
  EXPECT_THROW(maximize_lambda(3, 1.0, 10, SearchStrategy::rank_k_projectors, 1), ValidationError);
  EXPECT_THROW(maximize_lambda(3, 0.5, 0, SearchStrategy::rank_k_projectors, 1), ValidationError);
}

TEST(MaximizeLambda, TwoDimensionalCap) {
  for (SearchStrategy s : kAll) {
    for (double p : {0.2, 0.5, 0.7}) {
      const SearchReport r = maximize_lambda(2, p, 10000, s, 3);
      EXPECT_LE(r.best_lambda, 0.5 + 1e-9) << to_string(s);
      EXPECT_FALSE(r.violated_conjecture);
    }
  }
}

TEST(MaximizeLambda, ThreeLevelHalf) {
  for (SearchStrategy s : kAll) {
    const SearchReport r = maximize_lambda(3, 0.5, 10000, s, 4);
    EXPECT_GE(r.best_lambda, 5.0 / 9.0 - 1e-6) << to_string(s);
    EXPECT_LE(r.best_lambda, chernoff_bound(0.5) + 1e-9);
    EXPECT_NEAR(r.best_lambda, lambda_p(r.best_effect, CollapseParams(0.5, 3)).value, 1e-9);
  }
}

TEST(MaximizeLambda, BelowCorollaryThreshold) {
  for (SearchStrategy s : kAll) {
    const SearchReport r = maximize_lambda(4, 0.1, 5000, s, 5);
    EXPECT_LE(r.best_lambda, 0.5);
    EXPECT_LE(r.best_lambda, chernoff_bound(0.1) + 1e-9);
  }
}

TEST(MaximizeLambda, ReportObeysBounds) {
  for (SearchStrategy s : kAll) {
    for (int d : {2, 3, 4}) {
      for (double p : {0.3, 0.45, 0.6}) {
        const SearchReport r = maximize_lambda(d, p, 2000, s, 6);
        const CollapseParams params(p, d);
        EXPECT_LE(r.best_lambda, chernoff_bound(p) + 1e-9);
        const double markov = markov_bound(r.best_effect, params);
        if (markov < 1.0) {
          EXPECT_LE(r.best_lambda, markov + 1e-9);
        }
        EXPECT_EQ(r.violated_conjecture, r.best_lambda > conjecture_bound(d) + 1e-7);
        EXPECT_EQ(r.d, d);
        EXPECT_EQ(r.p, p);
      }
    }
  }
}

TEST(MaximizeLambda, UniformStrategyIsSingleEvaluation) {
  const SearchReport r = maximize_lambda(5, 0.4, 1000, SearchStrategy::uniform_projector, 1);
  EXPECT_EQ(r.evaluations, 1);
  EXPECT_NEAR(r.best_lambda, uniform_projector_lambda(5, 0.4), 1e-12);
}

TEST(MaximizeLambda, Reproducible) {
  for (SearchStrategy s : kAll) {
    expect_same(maximize_lambda(4, 0.45, 3000, s, 9), maximize_lambda(4, 0.45, 3000, s, 9));
  }
}

TEST(MaximizeLambda, ParallelMatchesSerial) {
  const int saved = omp_get_max_threads();
  for (SearchStrategy s : kAll) {
    const SearchReport ref = serial::maximize_lambda(4, 0.42, 5000, s, 10);
    for (int threads : {1, 3, 4}) {
      omp_set_num_threads(threads);
      expect_same(maximize_lambda(4, 0.42, 5000, s, 10), ref);
    }
  }
  omp_set_num_threads(saved);
}

TEST(MaximizeLambda, MonotoneInBudget) {
  for (SearchStrategy s : kAll) {
    double prev = -1.0;
    for (std::int64_t budget : {1, 10, 100, 999, 1000, 1001, 2500, 6000}) {
      const double v = maximize_lambda(3, 0.44, budget, s, 12).best_lambda;
      EXPECT_GE(v, prev) << to_string(s) << " budget=" << budget;
      prev = v;
    }
  }
}

TEST(PSweep, ZeroEffect) {
  const auto grid = uniform_p_grid(0.1);
  for (const SweepPoint& pt : p_sweep(Effect::zero(3), grid)) EXPECT_EQ(pt.lambda.value, 0.0);
}

TEST(PSweep, UniformProjectorPeak) {
  const std::vector<double> grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const auto pts = p_sweep(uniform_projector_effect(3), grid);
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].lambda.value > pts[best].lambda.value) best = i;
  }
  EXPECT_EQ(pts[best].p, 0.5);
  EXPECT_NEAR(pts[best].lambda.value, 5.0 / 9.0, 1e-12);
}

TEST(PSweep, UnimodalForRandomEffects) {
  Rng rng = make_stream(13, 0);
  const auto grid = uniform_p_grid(0.05);
  for (int t = 0; t < 50; ++t) {
    const auto pts = p_sweep(random_effect(4, rng), grid);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i].p <= 0.5 + 1e-12) {
        EXPECT_GE(pts[i].lambda.value, pts[i - 1].lambda.value - 1e-9);
      } else {
        EXPECT_LE(pts[i].lambda.value, pts[i - 1].lambda.value + 1e-9);
      }
    }
  }
}

TEST(PSweep, Validation) {
  const std::vector<double> unsorted = {0.3, 0.2};
  const std::vector<double> outside = {0.0, 0.5};
  EXPECT_THROW(p_sweep(Effect::zero(2), unsorted), ValidationError);
  EXPECT_THROW(p_sweep(Effect::zero(2), outside), ValidationError);
  EXPECT_THROW(uniform_p_grid(0.0), ValidationError);
  EXPECT_EQ(uniform_p_grid(0.25).size(), 3u);
}

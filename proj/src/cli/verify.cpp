#include "collapse_gauge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <omp.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "collapse_gauge/core.hpp"
#include "collapse_gauge/lambda.hpp"
#include "collapse_gauge/montecarlo.hpp"
#include "collapse_gauge/random.hpp"
#include "collapse_gauge/search.hpp"
#include "collapse_gauge/spectrum.hpp"

namespace collapse_gauge {

namespace {

// Collects one row of the table. `observe` records a discrepancy against a
// tolerance; `expect` records a boolean property.
class Check {
 public:
  Check(std::string module, std::string name) {
    r_.module = std::move(module);
    r_.name = std::move(name);
    r_.passed = true;
  }

  void observe(double discrepancy, double tolerance) {
    ++r_.instances;
    if (!(discrepancy <= tolerance)) {
      if (r_.passed) first_failure_ = r_.instances;
      r_.passed = false;
    }
    if (!(discrepancy <= worst_)) worst_ = discrepancy;  // NaN sticks
  }

  void expect(bool ok) {
    ++r_.instances;
    if (!ok && r_.passed) {
      r_.passed = false;
      first_failure_ = r_.instances;
    }
  }

  void fail(const std::string& why) {
    r_.passed = false;
    r_.detail = why;
  }

  CheckResult finish() {
    if (r_.detail.empty()) {
      std::ostringstream os;
      os << std::setprecision(3);
      if (worst_ > 0.0 || std::isnan(worst_)) os << "worst " << worst_;
      if (!r_.passed) os << (worst_ > 0.0 || std::isnan(worst_) ? ", " : "") << "first failure at #" << first_failure_;
      r_.detail = os.str();
    }
    return std::move(r_);
  }

 private:
  CheckResult r_;
  double worst_ = 0.0;
  int first_failure_ = 0;
};

template <class Body>
CheckResult guarded(const std::string& module, const std::string& name, Body body) {
  Check c(module, name);
  try {
    body(c);
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  return c.finish();
}

int draw_dim(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

double draw_p(Rng& rng) { return 0.01 + 0.98 * uniform01(rng); }

// Stream ids: one per check so that adding a check never shifts the others.
enum Stream : std::uint64_t {
  kReliabilityRange = 1,
  kSphereAverage,
  kHelstromConsistency,
  kOptimality,
  kCriterion,
  kTraceLaw,
  kComplement,
  kOnePositive,
  kTwoDimCap,
  kUnimodal,
  kScale,
  kBetaContinuity,
  kKyFan,
  kSchurHorn,
  kPartialSum,
  kFullTrace,
  kSpectralBounds,
  kTraceNormalized,
  kDeterminism,
  kRate,
  kMcComplement,
  kMcExact,
  kHypoexp,
  kDoubleSum,
};

Rng stream(std::uint64_t seed, Stream s) { return make_stream(seed, 0x7e51f00000000000ULL + s); }

std::vector<double> random_spectrum(Rng& rng, int d) {
  std::vector<double> v(static_cast<std::size_t>(d));
  for (double& x : v) x = 2.0 * uniform01(rng) - 1.0;
  return v;
}

// ---------------------------------------------------------------------------

void core_checks(std::uint64_t seed, std::vector<CheckResult>& out) {
  out.push_back(guarded("core", "reliability lies in [0, 1]", [&](Check& c) {
    Rng rng = stream(seed, kReliabilityRange);
    for (int t = 0; t < 2000; ++t) {
      const int d = draw_dim(rng, 2, 6);
      const CollapseParams params(uniform01(rng), d);
      const PureState psi = sample_uniform_state(d, rng);
      const double r = reliability_pure(psi, params, random_effect(d, rng));
      c.expect(r >= 0.0 && r <= 1.0);
    }
  }));

  out.push_back(guarded("core", "sphere average equals maximally mixed reliability", [&](Check& c) {
    Rng rng = stream(seed, kSphereAverage);
    for (int t = 0; t < 4; ++t) {
      const int d = draw_dim(rng, 2, 5);
      const CollapseParams params(draw_p(rng), d);
      const Effect e = random_effect(d, rng);
      const int n = 100000;
      double sum = 0.0;
      double sq = 0.0;
      for (int s = 0; s < n; ++s) {
        const double r = reliability_pure(sample_uniform_state(d, rng), params, e);
        sum += r;
        sq += r * r;
      }
      const double mean = sum / n;
      const double se = std::sqrt(std::max(0.0, sq / n - mean * mean) / (n - 1));
      const double exact = reliability_density(DensityMatrix::maximally_mixed(d), params, e);
      c.observe(std::abs(mean - exact) / se, 3.0);
    }
  }));

  out.push_back(guarded("core", "Helstrom consistency (1-p)+l+ = p-l-", [&](Check& c) {
    Rng rng = stream(seed, kHelstromConsistency);
    for (int t = 0; t < 500; ++t) {
      const int d = draw_dim(rng, 2, 6);
      const double p = uniform01(rng);
      const DensityMatrix r1 = random_density(d, rng);
      const DensityMatrix r2 = random_density(d, rng);
      const HelstromResult h = helstrom_optimal(r1, r2, p);
      c.observe(std::abs((1.0 - p) + h.lambda_plus - (p - h.lambda_minus)), 1e-10);
    }
  }));

  out.push_back(guarded("core", "Helstrom effect is optimal", [&](Check& c) {
    Rng rng = stream(seed, kOptimality);
    for (int t = 0; t < 100; ++t) {
      const int d = draw_dim(rng, 2, 5);
      const double p = uniform01(rng);
      const DensityMatrix r1 = random_density(d, rng);
      const DensityMatrix r2 = random_density(d, rng);
      const HelstromResult h = helstrom_optimal(r1, r2, p);
      for (int s = 0; s < 100; ++s) {
        const double r = discrimination_reliability(r1, r2, p, random_effect(d, rng));
        c.observe(r - h.r_max, 1e-10);
      }
    }
  }));

  out.push_back(guarded("core", "indicator sign <=> beats blind guessing", [&](Check& c) {
    Rng rng = stream(seed, kCriterion);
    for (int t = 0; t < 2000; ++t) {
      const int d = draw_dim(rng, 2, 6);
      const CollapseParams params(draw_p(rng), d);
      const Effect e = random_effect(d, rng);
      const PureState psi = sample_uniform_state(d, rng);
      const bool by_form = psi.expectation(collapse_indicator_operator(e, params)) > 0.0;
      const bool by_r = reliability_pure(psi, params, e) > blind_guess_reliability(params.p());
      c.expect(by_form == by_r);
    }
  }));

  out.push_back(guarded("core", "trace law of the indicator operator", [&](Check& c) {
    Rng rng = stream(seed, kTraceLaw);
    for (int t = 0; t < 2000; ++t) {
      const int d = draw_dim(rng, 2, 8);
      const CollapseParams params(uniform01(rng), d);
      const Effect e = random_effect(d, rng);
      const double tr = collapse_indicator_operator(e, params).trace();
      c.observe(std::abs(tr - indicator_trace(e, params)), 1e-12 * d);
    }
  }));
}

void lambda_checks(std::uint64_t seed, std::vector<CheckResult>& out) {
  out.push_back(guarded("lambda", "complement identity", [&](Check& c) {
    Rng rng = stream(seed, kComplement);
    for (int t = 0; t < 500; ++t) {
      const auto spec = SignedSpectrum::classify(random_spectrum(rng, draw_dim(rng, 2, 10)));
      const double sum =
          measure_positive_form(spec).value + measure_positive_form(spec.negated()).value;
      c.observe(std::abs(sum - 1.0), 1e-8);
    }
  }));

  out.push_back(guarded("lambda", "one positive eigenvalue and trace <= 0 caps at 1/2", [&](Check& c) {
    Rng rng = stream(seed, kOnePositive);
    for (int t = 0; t < 500; ++t) {
      const int d = draw_dim(rng, 2, 12);
      std::vector<double> betas(static_cast<std::size_t>(d - 1));
      double neg = 0.0;
      for (double& b : betas) {
        b = -uniform01(rng) - 1e-3;
        neg -= b;
      }
      std::sort(betas.rbegin(), betas.rend());
      const double alpha = neg * (0.01 + 0.99 * uniform01(rng));
      c.observe(measure_positive_form(SignedSpectrum({alpha}, betas)).value - 0.5, 1e-12);
    }
  }));

  out.push_back(guarded("lambda", "d = 2 cap", [&](Check& c) {
    Rng rng = stream(seed, kTwoDimCap);
    for (int t = 0; t < 300; ++t) {
      const Effect e = random_effect(2, rng);
      for (double p = 0.05; p < 0.96; p += 0.05) {
        c.observe(lambda_p(e, CollapseParams(p, 2)).value - 0.5, 1e-9);
      }
    }
  }));

  out.push_back(guarded("lambda", "unimodality in p", [&](Check& c) {
    Rng rng = stream(seed, kUnimodal);
    for (int t = 0; t < 50; ++t) {
      const int d = draw_dim(rng, 2, 6);
      const Effect e = random_effect(d, rng);
      double prev = lambda_p(e, CollapseParams(0.05, d)).value;
      for (int i = 2; i <= 19; ++i) {
        const double p = 0.05 * i;
        const double v = lambda_p(e, CollapseParams(p, d)).value;
        // Increases up to p = 1/2 (i = 10), decreases afterwards.
        c.observe(i <= 10 ? prev - v : v - prev, 1e-9);
        prev = v;
      }
    }
  }));

  out.push_back(guarded("lambda", "scale invariance", [&](Check& c) {
    Rng rng = stream(seed, kScale);
    for (int t = 0; t < 300; ++t) {
      const auto raw = random_spectrum(rng, draw_dim(rng, 2, 10));
      const double base = measure_positive_form(SignedSpectrum::classify(raw)).value;
      for (double s : {1e-3, 0.37, 7.5, 1e3}) {
        std::vector<double> scaled = raw;
        for (double& x : scaled) x *= s;
        const double v = measure_positive_form(SignedSpectrum::classify(scaled)).value;
        c.observe(std::abs(v - base), 1e-8);
      }
    }
  }));

  out.push_back(guarded("lambda", "continuity in coincident betas", [&](Check& c) {
    Rng rng = stream(seed, kBetaContinuity);
    for (int t = 0; t < 300; ++t) {
      const int k = draw_dim(rng, 1, 4);
      const int m = draw_dim(rng, 2, 5);
      std::vector<double> alphas(static_cast<std::size_t>(k));
      for (double& a : alphas) a = 0.05 + uniform01(rng);
      std::sort(alphas.rbegin(), alphas.rend());
      const double beta = -0.05 - uniform01(rng);
      const std::vector<double> tied(static_cast<std::size_t>(m), beta);
      std::vector<double> spread(static_cast<std::size_t>(m));
      for (int h = 0; h < m; ++h) spread[static_cast<std::size_t>(h)] = beta + ((h % 2) ? -1e-9 : 1e-9) * (1 + h / 2);
      std::sort(spread.rbegin(), spread.rend());
      const double a = measure_positive_form(SignedSpectrum(alphas, tied)).value;
      const double b = measure_positive_form(SignedSpectrum(alphas, spread)).value;
      c.observe(std::abs(a - b), 1e-6);
    }
  }));
}

void spectrum_checks(std::uint64_t seed, std::vector<CheckResult>& out) {
  out.push_back(guarded("spectrum", "Ky Fan inequality", [&](Check& c) {
    Rng rng = stream(seed, kKyFan);
    for (int t = 0; t < 500; ++t) {
      const int d = draw_dim(rng, 2, 8);
      const HermitianOperator b = random_hermitian(d, rng);
      const HermitianOperator h = random_hermitian(d, rng);
      for (int m = 1; m <= d; ++m) c.expect(ky_fan_check(b, h, m));
    }
  }));

  out.push_back(guarded("spectrum", "Schur-Horn majorization", [&](Check& c) {
    Rng rng = stream(seed, kSchurHorn);
    for (int t = 0; t < 500; ++t) {
      const int d = draw_dim(rng, 2, 8);
      const Effect e = random_effect(d, rng);
      for (int m = 1; m <= d; ++m) c.expect(schur_horn_check(e, m));
    }
  }));

  out.push_back(guarded("spectrum", "partial-sum bounds, both branches", [&](Check& c) {
    Rng rng = stream(seed, kPartialSum);
    for (int t = 0; t < 500; ++t) {
      const int d = draw_dim(rng, 2, 8);
      const Effect e = random_effect(d, rng);
      for (double p : {0.5 * uniform01(rng), 0.5 + 0.5 * uniform01(rng)}) {
        for (int m = 1; m <= d; ++m) c.expect(partial_sum_check(e, CollapseParams(p, d), m));
      }
    }
  }));

  out.push_back(guarded("spectrum", "m = d reproduces the trace relation", [&](Check& c) {
    Rng rng = stream(seed, kFullTrace);
    for (int t = 0; t < 500; ++t) {
      const int d = draw_dim(rng, 2, 8);
      const Effect e = random_effect(d, rng);
      const CollapseParams params(uniform01(rng), d);
      c.observe(std::abs(partial_sum_bound(e, params, d) - indicator_trace(e, params)), 1e-12 * d);
    }
  }));

  out.push_back(guarded("spectrum", "extreme eigenvalue and eigenvalue-sum bounds", [&](Check& c) {
    Rng rng = stream(seed, kSpectralBounds);
    for (int t = 0; t < 500; ++t) {
      const int d = draw_dim(rng, 2, 8);
      const Effect e = (t % 2) ? random_effect(d, rng) : random_projector(d, draw_dim(rng, 1, d), rng);
      c.expect(indicator_spectral_check(e, CollapseParams(uniform01(rng), d)));
    }
  }));

  out.push_back(guarded("spectrum", "trace-normalized eigenvalue-sum bounds", [&](Check& c) {
    Rng rng = stream(seed, kTraceNormalized);
    for (int t = 0; t < 500; ++t) {
      const int d = draw_dim(rng, 2, 8);
      const Effect e = random_effect(d, rng);
      double p = uniform01(rng);
      if (std::abs(p - 0.5) < 1e-6) p = 0.25;
      c.expect(trace_normalized_check(e, CollapseParams(p, d)));
    }
  }));
}

void montecarlo_checks(std::uint64_t seed, std::vector<CheckResult>& out) {
  out.push_back(guarded("montecarlo", "estimates independent of partitioning", [&](Check& c) {
    Rng rng = stream(seed, kDeterminism);
    const int saved = omp_get_max_threads();
    for (int t = 0; t < 4; ++t) {
      const int d = draw_dim(rng, 2, 6);
      const CollapseParams params(draw_p(rng), d);
      const Effect e = random_effect(d, rng);
      const PureState psi = sample_uniform_state(d, rng);
      const std::uint64_t s = rng();
      const std::int64_t n = 3 * kBlockSize + 1234;
      const double ref_l = serial::estimate_lambda(e, params, n, s).mean;
      const double ref_r = serial::estimate_reliability(psi, params, e, n, s).mean;
      for (int threads : {1, 2, 3, 8}) {
        omp_set_num_threads(threads);
        c.expect(estimate_lambda(e, params, n, s).mean == ref_l);
        c.expect(estimate_reliability(psi, params, e, n, s).mean == ref_r);
      }
    }
    omp_set_num_threads(saved);
  }));

  out.push_back(guarded("montecarlo", "error shrinks like 1/sqrt(n)", [&](Check& c) {
    Rng rng = stream(seed, kRate);
    const int d = 3;
    // Λ ≈ 0.504 here, so the Bernoulli variance is near its maximum.
    const CollapseParams params(0.47, d);
    const Effect e = uniform_projector_effect(d);
    const std::int64_t n = 4000;
    const int reps = 200;
    auto spread = [&](std::int64_t samples, std::uint64_t base, double& mean_se) {
      double sum = 0.0;
      double sq = 0.0;
      mean_se = 0.0;
      for (int r = 0; r < reps; ++r) {
        const EstimateWithCI est = estimate_lambda(e, params, samples, base + r);
        sum += est.mean;
        sq += est.mean * est.mean;
        mean_se += est.std_error / reps;
      }
      const double m = sum / reps;
      return std::sqrt((sq - reps * m * m) / (reps - 1));
    };
    const std::uint64_t base = rng();
    double se_small = 0.0;
    double se_large = 0.0;
    const double sd_small = spread(n, base, se_small);
    const double sd_large = spread(4 * n, base + reps, se_large);
    // Four times the samples halves both the reported and the observed error.
    c.observe(std::abs(se_large / se_small / 0.5 - 1.0), 0.2);
    c.observe(std::abs(sd_large / sd_small / 0.5 - 1.0), 0.2);
  }));

  out.push_back(guarded("montecarlo", "estimate(A) + estimate(-A) = 1", [&](Check& c) {
    Rng rng = stream(seed, kMcComplement);
    for (int t = 0; t < 5; ++t) {
      const HermitianOperator a = random_hermitian(draw_dim(rng, 2, 6), rng);
      const std::uint64_t s = rng();
      const EstimateWithCI plus = estimate_positive_fraction(a, 200000, s);
      const EstimateWithCI minus = estimate_positive_fraction(-a, 200000, s + 1);
      const double joint = std::hypot(plus.std_error, minus.std_error);
      const double miss = std::abs(plus.mean + minus.mean - 1.0);
      // A definite A gives estimates of exactly 0 and 1 with zero error.
      c.observe(joint > 0.0 ? miss / joint : miss, joint > 0.0 ? 4.0 : 0.0);
    }
  }));

  out.push_back(guarded("montecarlo", "Monte Carlo agrees with the exact measure", [&](Check& c) {
    Rng rng = stream(seed, kMcExact);
    for (int t = 0; t < 6; ++t) {
      const int d = draw_dim(rng, 2, 6);
      const CollapseParams params(draw_p(rng), d);
      const Effect e = random_effect(d, rng);
      const EstimateWithCI est = estimate_lambda(e, params, 200000, rng());
      const double exact = lambda_p(e, params).value;
      // Standard error under the exact value; an estimate of 0 hits has none.
      const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(est.n));
      const double miss = std::abs(est.mean - exact);
      c.observe(sigma > 0.0 ? miss / sigma : miss, sigma > 0.0 ? 4.0 : 0.0);
    }
  }));

  out.push_back(guarded("montecarlo", "exponential MGF by quadrature", [&](Check& c) {
    boost::math::quadrature::exp_sinh<double> integrator;
    for (double lam : {0.3, 1.0, 2.5}) {
      for (double t : {-1.0, 0.05, 0.1, 0.15}) {
        if (!(2.0 * lam * t < 1.0)) continue;
        const double mgf = integrator.integrate(
            [&](double x) { return 0.5 * std::exp(-0.5 * x + lam * x * t); });
        c.observe(std::abs(mgf - 1.0 / (1.0 - 2.0 * lam * t)), 1e-9);
      }
    }
  }));

  out.push_back(guarded("montecarlo", "hypoexponential closed form = recursion", [&](Check& c) {
    Rng rng = stream(seed, kHypoexp);
    for (int t = 0; t < 100; ++t) {
      const int n = draw_dim(rng, 1, 8);
      std::vector<double> lams(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) lams[static_cast<std::size_t>(i)] = 0.2 + 0.3 * i + 0.25 * uniform01(rng);
      const double x = 10.0 * uniform01(rng);
      c.observe(std::abs(hypoexp_density(lams, x) - hypoexp_density_recursive(lams, x)), 1e-8);
    }
  }));

  out.push_back(guarded("montecarlo", "double sum = single sum", [&](Check& c) {
    Rng rng = stream(seed, kDoubleSum);
    for (int t = 0; t < 100; ++t) {
      const int k = draw_dim(rng, 1, 4);
      const int m = draw_dim(rng, 1, 4);
      std::vector<double> alphas(static_cast<std::size_t>(k));
      std::vector<double> betas(static_cast<std::size_t>(m));
      for (int i = 0; i < k; ++i) alphas[static_cast<std::size_t>(i)] = 0.1 + 0.4 * i + 0.3 * uniform01(rng);
      for (int h = 0; h < m; ++h) betas[static_cast<std::size_t>(h)] = -(0.1 + 0.4 * h + 0.3 * uniform01(rng));
      const double twofold = prob_positive_double_sum(alphas, betas);
      const double single = prob_positive_single_sum(alphas, betas);
      c.observe(std::abs(twofold - single), 1e-9);
      if (k >= 2) c.observe(std::abs(lagrange_identity_sum(alphas)), 1e-9);
    }
  }));
}

}  // namespace

std::vector<CheckResult> run_verification(std::uint64_t seed) {
  std::vector<CheckResult> out;
  core_checks(seed, out);
  lambda_checks(seed, out);
  spectrum_checks(seed, out);
  montecarlo_checks(seed, out);
  return out;
}

void print_verification_table(const std::vector<CheckResult>& results, std::ostream& os) {
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.module.size() + r.name.size() + 2);
  int failed = 0;
  for (const auto& r : results) {
    const std::string label = r.module + ": " + r.name;
    os << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << label
       << std::right << std::setw(7) << r.instances;
    if (!r.detail.empty()) os << "  " << r.detail;
    os << '\n';
    if (!r.passed) ++failed;
  }
  os << (results.size() - static_cast<std::size_t>(failed)) << '/' << results.size()
     << " checks passed\n";
}

}  // namespace collapse_gauge

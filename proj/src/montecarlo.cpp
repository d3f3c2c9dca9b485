#include "collapse_gauge/montecarlo.hpp"

#include <cmath>
#include <vector>

#include "collapse_gauge/random.hpp"

namespace collapse_gauge {

EstimateWithCI bernoulli_estimate(std::int64_t hits, std::int64_t n, std::uint64_t seed) {
  const double mean = static_cast<double>(hits) / static_cast<double>(n);
  return {mean, std::sqrt(mean * (1.0 - mean) / static_cast<double>(n)), n, seed};
}

PureState sample_uniform_state(int d, Rng& rng) {
  if (d < 2) throw ValidationError("sample_uniform_state: d must be at least 2");
  for (;;) {
    const CVector phi = sample_complex_gaussian(d, rng);
    if (phi.squaredNorm() > 0.0) return PureState::normalized(phi);
  }
}

PureState sample_uniform_state(int d, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return sample_uniform_state(d, rng);
}

namespace {

void require_samples(std::int64_t n) {
  if (n < 1) throw ValidationError("estimator: n must be at least 1");
}

std::int64_t block_count(std::int64_t n) { return (n + kBlockSize - 1) / kBlockSize; }

std::int64_t block_length(std::int64_t n, std::int64_t b) {
  return std::min(kBlockSize, n - b * kBlockSize);
}

// Upper triangle of A packed for the quadratic-form kernel.
struct PackedForm {
  int d;
  std::vector<double> diag;
  std::vector<Complex> upper;  // row-major i < j
};

PackedForm pack(const HermitianOperator& a) {
  PackedForm f{a.dim(), {}, {}};
  for (int i = 0; i < f.d; ++i) {
    f.diag.push_back(a(i, i).real());
    for (int j = i + 1; j < f.d; ++j) f.upper.push_back(a(i, j));
  }
  return f;
}

std::int64_t positive_hits_block(const PackedForm& f, std::uint64_t seed, std::int64_t block,
                                 std::int64_t count) {
  Rng rng = make_stream(seed, static_cast<std::uint64_t>(block));
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<Complex> phi(f.d);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < count; ++s) {
    for (int i = 0; i < f.d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      phi[i] = Complex(re, im);
    }
    // ⟨φ|A|φ⟩ = Σ_i A_ii |φ_i|² + 2 Re Σ_{i<j} conj(φ_i) A_ij φ_j
    double diag = 0.0;
    double off = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < f.d; ++i) {
      diag += f.diag[i] * std::norm(phi[i]);
      const Complex ci = std::conj(phi[i]);
      for (int j = i + 1; j < f.d; ++j) off += (ci * f.upper[idx++] * phi[j]).real();
    }
    if (diag + 2.0 * off > 0.0) ++hits;
  }
  return hits;
}

std::int64_t correct_calls_block(const CVector& amps, double p, double e_psi,
                                 const std::vector<double>& e_diag, std::uint64_t seed,
                                 std::int64_t block, std::int64_t count) {
  Rng rng = make_stream(seed, static_cast<std::uint64_t>(block));
  std::int64_t correct = 0;
  for (std::int64_t s = 0; s < count; ++s) {
    const int k = collapse_branch(amps, p, uniform01(rng));
    const double yes_prob = k < 0 ? e_psi : e_diag[k];
    const bool yes = uniform01(rng) < yes_prob;
    if (yes == (k >= 0)) ++correct;
  }
  return correct;
}

}  // namespace

EstimateWithCI estimate_positive_fraction(const HermitianOperator& a, std::int64_t n,
                                          std::uint64_t seed) {
  require_samples(n);
  const PackedForm f = pack(a);
  const std::int64_t blocks = block_count(n);
  std::int64_t hits = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : hits)
  for (std::int64_t b = 0; b < blocks; ++b) {
    hits += positive_hits_block(f, seed, b, block_length(n, b));
  }
  return bernoulli_estimate(hits, n, seed);
}

EstimateWithCI estimate_lambda(const Effect& e, const CollapseParams& params, std::int64_t n,
                               std::uint64_t seed) {
  return estimate_positive_fraction(collapse_indicator_operator(e, params), n, seed);
}

EstimateWithCI estimate_reliability(const PureState& psi, const CollapseParams& params,
                                    const Effect& e, std::int64_t n, std::uint64_t seed) {
  require_samples(n);
  if (psi.dim() != e.dim() || psi.dim() != params.d()) {
    throw DimensionMismatch("estimate_reliability: dimension mismatch");
  }
  const double e_psi = psi.expectation(e.op());
  std::vector<double> e_diag(e.dim());
  for (int k = 0; k < e.dim(); ++k) e_diag[k] = e.matrix()(k, k).real();
  const std::int64_t blocks = block_count(n);
  std::int64_t correct = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : correct)
  for (std::int64_t b = 0; b < blocks; ++b) {
    correct += correct_calls_block(psi.amplitudes(), params.p(), e_psi, e_diag, seed, b,
                                   block_length(n, b));
  }
  return bernoulli_estimate(correct, n, seed);
}

}  // namespace collapse_gauge

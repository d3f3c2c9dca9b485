#pragma once

// Brute-force oracle: uniform sampling of the unit sphere and empirical
// estimates of the closed forms.
//
// Sample loops are split into fixed blocks of kBlockSize samples; block b
// draws from make_stream(seed, b). The OpenMP estimators distribute blocks
// across threads and reduce integer hit counts, so an estimate depends only
// on (inputs, n, seed). The functions in namespace `serial` are plain
// single-threaded reference implementations of the same estimators that
// consume the generator identically; tests require the two to agree.

#include <cstdint>
#include <span>
#include <vector>

#include "collapse_gauge/core.hpp"

namespace collapse_gauge {

struct EstimateWithCI {
  double mean = 0.0;
  double std_error = 0.0;  // sqrt(mean (1 - mean) / n)
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::int64_t kBlockSize = 1 << 14;

EstimateWithCI bernoulli_estimate(std::int64_t hits, std::int64_t n, std::uint64_t seed);

/// Uniform point on the unit sphere of C^d by normalizing a complex
/// Gaussian vector; redraws on a zero vector.
PureState sample_uniform_state(int d, Rng& rng);
PureState sample_uniform_state(int d, std::uint64_t seed);

/// Fraction of n uniform ψ with ⟨ψ|A|ψ⟩ > 0. The Gaussian vector is not
/// normalized before the test since normalization does not change the sign.
EstimateWithCI estimate_positive_fraction(const HermitianOperator& a, std::int64_t n,
                                          std::uint64_t seed);

/// Empirical Λ_p(E): estimate_positive_fraction applied to A_p(E).
EstimateWithCI estimate_lambda(const Effect& e, const CollapseParams& params, std::int64_t n,
                               std::uint64_t seed);

/// Simulates the full experiment n times: collapse ψ, measure {E, I-E},
/// score a "yes" as a claim that collapse happened. Returns the rate of
/// correct claims.
EstimateWithCI estimate_reliability(const PureState& psi, const CollapseParams& params,
                                    const Effect& e, std::int64_t n, std::uint64_t seed);

namespace serial {

EstimateWithCI estimate_positive_fraction(const HermitianOperator& a, std::int64_t n,
                                          std::uint64_t seed);
EstimateWithCI estimate_lambda(const Effect& e, const CollapseParams& params, std::int64_t n,
                               std::uint64_t seed);
EstimateWithCI estimate_reliability(const PureState& psi, const CollapseParams& params,
                                    const Effect& e, std::int64_t n, std::uint64_t seed);

}  // namespace serial

// ---------------------------------------------------------------------------
// Hypoexponential densities and the two-sided probability behind Λ.
//
// S_n = Σ λ_i X_i with X_i i.i.d. exponential of rate 1/2 (mean 2).

/// Closed-form density of S_n at c ≥ 0 for pairwise distinct λ_i > 0:
///   Σ_i e^{-c/(2λ_i)} λ_i^{n-2} / [2 Π_{j≠i} (λ_i - λ_j)].
/// For n > 20 the quadrature recursion is used instead.
double hypoexp_density(std::span<const double> lams, double c);

/// The same density obtained by iterating
///   f_1(c)     = e^{-c/(2λ_1)} / (2λ_1),
///   f_{n+1}(c) = e^{-c/(2λ_{n+1})} / (2λ_{n+1}) ∫_0^c f_n(s) e^{s/(2λ_{n+1})} ds
/// with Chebyshev spectral integration on [0, c]. Does not need distinct λ.
double hypoexp_density_recursive(std::span<const double> lams, double c);

/// Σ_i λ_i^{n-2} / Π_{j≠i} (λ_i - λ_j); zero for distinct λ and n ≥ 2.
double lagrange_identity_sum(std::span<const double> lams);

/// P(Σ α_i A_i + Σ β_h B_h > 0) as the double sum over (i, h)
///   α_i^k (-β_h)^{m-1} / [(α_i - β_h) Π_{j≠i}(α_i - α_j) Π_{ℓ≠h}(β_ℓ - β_h)].
/// Needs distinct α and distinct β.
double prob_positive_double_sum(std::span<const double> alphas, std::span<const double> betas);

/// The same probability after collapsing the β sum:
///   Σ_i α_i^{k+m-1} / [Π_{j≠i}(α_i - α_j) Π_ℓ (α_i - β_ℓ)].
double prob_positive_single_sum(std::span<const double> alphas, std::span<const double> betas);

/// Double sum when the β are distinct, cross-checked against the single
/// sum (|difference| ≤ 1e-9, else NumericalError); single sum otherwise.
double prob_positive_combination(std::span<const double> alphas, std::span<const double> betas);

}  // namespace collapse_gauge

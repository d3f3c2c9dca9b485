#pragma once

// Λ_p(E): the uniform-measure fraction of the unit sphere on which the
// effect E is strictly more reliable than blind guessing, together with the
// closed-form bounds on it.

#include <string_view>

#include "collapse_gauge/core.hpp"

namespace collapse_gauge {

enum class LambdaMethod {
  exact,         // direct sum over the (distinct) positive eigenvalues
  complemented,  // 1 - measure of the negated spectrum
  confluent,     // repeated eigenvalues on both sides: higher-order residues
};

std::string_view to_string(LambdaMethod m);

struct LambdaResult {
  double value = 0.0;
  LambdaMethod method = LambdaMethod::exact;
};

/// Positive eigenvalues closer than this (relative) are treated as equal.
inline constexpr double kEigenGapTol = 1e-7;
/// Largest dimension for which the closed form is trusted.
inline constexpr int kMaxExactDim = 64;

/// μ{ψ ∈ S : ⟨ψ|A|ψ⟩ > 0 } for a Hermitian A with the given signed spectrum:
///
///   Σ_i α_i^{d-1} / [ Π_h (α_i - β_h) · Π_{j≠i} (α_i - α_j) ].
///
/// Each term is evaluated in log space with its sign tracked separately and
/// the terms are added with compensated summation; the sum alternates in
/// sign and cancels heavily as d grows.
///
/// The same value is 1 - (measure of -A), because the zero set of the form
/// is null. Both sums are formed when their positive eigenvalues are
/// distinct, and the one with the smaller Σ|term| (hence the smaller
/// rounding error) is returned. If both sides have repeated eigenvalues the
/// sum is replaced by its confluent limit, i.e. the sum of residues of
/// x^{d-1} / Π(x-α)(x-β) at the α clusters.
///
/// Throws ValidationError for an empty spectrum or d > kMaxExactDim, and
/// NumericalError if round-off pushes the result more than 1e-8 outside
/// [0, 1].
LambdaResult measure_positive_form(const SignedSpectrum& spec);

/// Λ_p(E) for 0 < p < 1 via the spectrum of A_p(E).
LambdaResult lambda_p(const Effect& e, const CollapseParams& params);

/// Markov-inequality bound
///   [(1-p) + (2p-1) tr E / d] / [(1-p) + max(0, 2p-1)].
double markov_bound(const Effect& e, const CollapseParams& params);

/// 4p(1-p), independent of d.
double chernoff_bound(double p);

/// Conjectured supremum 1 - (1 - 1/d)^{d-1}; tends to 1 - 1/e.
double conjecture_bound(int d);

/// Smallest p ≤ 1/2 above which the uniform-superposition projector beats
/// blind guessing on more than half the sphere (d ≥ 3):
///   1 - 1 / (1 + d (1 - 2^{-1/(d-1)})).
double good_p_threshold(int d);

/// ln 2 / (1 + ln 2), the d → ∞ limit of good_p_threshold.
double good_p_threshold_limit();

/// True iff p < ln2/(1+ln2) or p > 1/(1+ln2). In this regime every effect
/// whose indicator operator has a single negative eigenvalue has Λ ≤ 1/2.
bool single_negative_regime(double p);

}  // namespace collapse_gauge

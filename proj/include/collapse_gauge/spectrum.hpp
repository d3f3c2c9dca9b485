#pragma once

// Majorization facts about the indicator operator A_p(E) and the spectral
// bounds that follow from them. The *_check functions evaluate theorems and
// should always return true; a false return points at a numerical problem.

#include "collapse_gauge/core.hpp"

namespace collapse_gauge {

struct SpectralBounds {
  double lambda_max_bound;  // λ_1(A_p(E)) ≤ this
  double lambda_min_bound;  // λ_d(A_p(E)) ≥ this
  double alpha_sum_bound;   // sum of positive eigenvalues ≤ this
  double beta_sum_bound;    // sum of negative eigenvalues ≥ this
};

struct TraceNormalizedBounds {
  double beta_lower;   // sum of negative eigenvalues ≥ this
  double alpha_upper;  // sum of positive eigenvalues ≤ this
};

/// Sums of the positive and of the negative eigenvalues.
struct EigenvalueSums {
  double positive;
  double negative;
};

/// 1e-10, multiplied by max(1, spectral_norm) once d > 16.
double inequality_tolerance(int d, double spectral_norm);

EigenvalueSums eigenvalue_sums(const HermitianOperator& a);

/// Σ_{i≤m} λ_i(B+C) ≤ Σ_{i≤m} λ_i(B) + Σ_{i≤m} λ_i(C).
bool ky_fan_check(const HermitianOperator& b, const HermitianOperator& c, int m);

/// Σ_{i≤m} d_i ≤ Σ_{i≤m} μ_i for the sorted diagonal d and spectrum μ of E,
/// plus 0 ≤ μ_d ≤ d_d ≤ d_1 ≤ μ_1 ≤ 1.
bool schur_horn_check(const Effect& e, int m);

/// Right-hand side of the Ky Fan bound on Σ_{i≤m} λ_i(A_p(E)):
///   p ≤ 1/2:  p Σ_{i≤m} d_i - (1-p) Σ_{i>d-m} μ_i
///   p > 1/2:  (1-p) Σ_{i>d-m} (1-μ_i) - p Σ_{i≤m} (1-d_i)
double partial_sum_bound(const Effect& e, const CollapseParams& params, int m);

/// Σ_{i≤m} λ_i(A_p(E)) ≤ partial_sum_bound(e, params, m) within tolerance.
bool partial_sum_check(const Effect& e, const CollapseParams& params, int m);

/// With t = min(1, tr E) and p ≤ 1/2:
///   λ_1 ≤ t p,  λ_d ≥ -t (1-p),  α ≤ p tr E,  β ≥ -(1-p) tr E.
/// For p > 1/2 the same with E → I - E and p ↔ 1-p.
SpectralBounds indicator_spectral_bounds(const Effect& e, const CollapseParams& params);

/// True iff the computed spectrum of A_p(E) respects indicator_spectral_bounds.
bool indicator_spectral_check(const Effect& e, const CollapseParams& params);

/// Bounds on α, β in terms of tr A_p(E) alone; p ≠ 1/2.
///   p < 1/2:  β ≥ (1-p)/(1-2p) tr A,  α ≤ -p/(1-2p) tr A
///   p > 1/2:  β ≥ p/(2p-1) tr A,      α ≤ -(1-p)/(2p-1) tr A
TraceNormalizedBounds trace_normalized_bounds(const Effect& e, const CollapseParams& params);

bool trace_normalized_check(const Effect& e, const CollapseParams& params);

}  // namespace collapse_gauge

#include "collapse_gauge/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace collapse_gauge {

namespace {

void require_m(int m, int d) {
  if (m < 1 || m > d) throw ValidationError("partial sums: m must satisfy 1 <= m <= d");
}

double leading_sum(const RVector& descending, int m) {
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += descending[i];
  return s;
}

double trailing_sum(const RVector& descending, int m) {
  double s = 0.0;
  const int d = static_cast<int>(descending.size());
  for (int i = d - m; i < d; ++i) s += descending[i];
  return s;
}

RVector sorted_diagonal(const Effect& e) {
  RVector diag = e.matrix().diagonal().real();
  std::sort(diag.data(), diag.data() + diag.size(), std::greater<>());
  return diag;
}

}  // namespace

double inequality_tolerance(int d, double spectral_norm) {
  return d > 16 ? 1e-10 * std::max(1.0, spectral_norm) : 1e-10;
}

EigenvalueSums eigenvalue_sums(const HermitianOperator& a) {
  EigenvalueSums s{0.0, 0.0};
  const RVector ev = a.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > 0.0) s.positive += ev[i];
    if (ev[i] < 0.0) s.negative += ev[i];
  }
  return s;
}

bool ky_fan_check(const HermitianOperator& b, const HermitianOperator& c, int m) {
  if (b.dim() != c.dim()) throw DimensionMismatch("ky_fan_check: dimension mismatch");
  require_m(m, b.dim());
  const HermitianOperator sum = b + c;
  const RVector ls = sum.eigenvalues();
  const RVector lb = b.eigenvalues();
  const RVector lc = c.eigenvalues();
  const double scale = std::max({std::abs(ls[0]), std::abs(ls[ls.size() - 1]), std::abs(lb[0]),
                                 std::abs(lb[lb.size() - 1]), std::abs(lc[0]),
                                 std::abs(lc[lc.size() - 1])});
  const double tol = inequality_tolerance(b.dim(), scale);
  return leading_sum(ls, m) <= leading_sum(lb, m) + leading_sum(lc, m) + tol;
}

bool schur_horn_check(const Effect& e, int m) {
  require_m(m, e.dim());
  const RVector mu = e.op().eigenvalues();
  const RVector diag = sorted_diagonal(e);
  const int d = e.dim();
  const double tol = inequality_tolerance(d, 1.0);
  const bool majorized = leading_sum(diag, m) <= leading_sum(mu, m) + tol;
  const bool sandwich = -tol <= mu[d - 1] && mu[d - 1] <= diag[d - 1] + tol &&
                        diag[d - 1] <= diag[0] && diag[0] <= mu[0] + tol && mu[0] <= 1.0 + tol;
  return majorized && sandwich;
}

double partial_sum_bound(const Effect& e, const CollapseParams& params, int m) {
  require_m(m, e.dim());
  if (e.dim() != params.d()) throw DimensionMismatch("partial_sum_bound: dimension mismatch");
  const double p = params.p();
  const RVector mu = e.op().eigenvalues();
  const RVector diag = sorted_diagonal(e);
  if (p <= 0.5) {
    return p * leading_sum(diag, m) - (1.0 - p) * trailing_sum(mu, m);
  }
  const double rest_eig = static_cast<double>(m) - trailing_sum(mu, m);
  const double rest_diag = static_cast<double>(m) - leading_sum(diag, m);
  return (1.0 - p) * rest_eig - p * rest_diag;
}

bool partial_sum_check(const Effect& e, const CollapseParams& params, int m) {
  const HermitianOperator a = collapse_indicator_operator(e, params);
  const RVector ev = a.eigenvalues();
  const double norm = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  return leading_sum(ev, m) <=
         partial_sum_bound(e, params, m) + inequality_tolerance(e.dim(), norm);
}

SpectralBounds indicator_spectral_bounds(const Effect& e, const CollapseParams& params) {
  const double p = params.p();
  if (p <= 0.5) {
    const double tr = std::max(0.0, e.trace());
    const double t = std::min(1.0, tr);
    return {t * p, -t * (1.0 - p), p * tr, -(1.0 - p) * tr};
  }
  const double tr = std::max(0.0, e.dim() - e.trace());
  const double t = std::min(1.0, tr);
  return {t * (1.0 - p), -t * p, (1.0 - p) * tr, -p * tr};
}

bool indicator_spectral_check(const Effect& e, const CollapseParams& params) {
  const SpectralBounds b = indicator_spectral_bounds(e, params);
  const HermitianOperator a = collapse_indicator_operator(e, params);
  const RVector ev = a.eigenvalues();
  const double norm = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  const double tol = inequality_tolerance(e.dim(), norm);
  const EigenvalueSums s = eigenvalue_sums(a);
  return ev[0] <= b.lambda_max_bound + tol && ev[ev.size() - 1] >= b.lambda_min_bound - tol &&
         s.positive <= b.alpha_sum_bound + tol && s.negative >= b.beta_sum_bound - tol &&
         b.lambda_min_bound <= b.lambda_max_bound && b.beta_sum_bound <= 0.0 &&
         b.alpha_sum_bound >= 0.0;
}

TraceNormalizedBounds trace_normalized_bounds(const Effect& e, const CollapseParams& params) {
  const double p = params.p();
  if (p == 0.5) throw ValidationError("trace_normalized_bounds: undefined at p = 1/2");
  const double tr = collapse_indicator_operator(e, params).trace();
  if (p < 0.5) {
    return {(1.0 - p) / (1.0 - 2.0 * p) * tr, -p / (1.0 - 2.0 * p) * tr};
  }
  return {p / (2.0 * p - 1.0) * tr, -(1.0 - p) / (2.0 * p - 1.0) * tr};
}

bool trace_normalized_check(const Effect& e, const CollapseParams& params) {
  const TraceNormalizedBounds b = trace_normalized_bounds(e, params);
  const HermitianOperator a = collapse_indicator_operator(e, params);
  const EigenvalueSums s = eigenvalue_sums(a);
  const double tol = inequality_tolerance(e.dim(), a.spectral_norm());
  return s.negative >= b.beta_lower - tol && s.positive <= b.alpha_upper + tol &&
         s.negative <= tol && s.positive >= -tol;
}

}  // namespace collapse_gauge

#pragma once

// Domain types for a d-level system subject to random collapse in the
// standard basis, plus the reliability functionals of yes-no experiments.
//
// The collapse basis is always the standard coordinate basis. Experiments
// relative to another orthonormal basis are handled by conjugating the
// operators with the change-of-basis unitary before calling in.

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "collapse_gauge/rng.hpp"

namespace collapse_gauge {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Input violates a documented invariant (bad dimension, non-Hermitian
/// matrix, eigenvalue out of range, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A computation lost too much precision to honour its contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double norm = 1e-12;         // |‖ψ‖ - 1|
inline constexpr double hermitian = 1e-12;    // max |M - M†| relative to max(1, max|M_ij|)
inline constexpr double eigenvalue = 1e-10;   // slack on 0 ≤ E ≤ I and ρ ≥ 0
inline constexpr double trace = 1e-10;        // |tr ρ - 1|
inline constexpr double helstrom = 1e-10;     // (1-p)+λ⁺ vs p-λ⁻
}  // namespace tol

class HermitianOperator;

/// Unit vector ψ in C^d, d ≥ 2.
class PureState {
 public:
  explicit PureState(CVector amplitudes, double norm_tol = tol::norm);

  /// ψ = v / ‖v‖. Throws if v is (numerically) zero.
  static PureState normalized(const CVector& v);
  /// Standard basis vector b_k (0-based k).
  static PureState basis(int d, int k);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](int k) const { return amplitudes_[k]; }

  /// ⟨ψ|H|ψ⟩ (real because H is Hermitian).
  double expectation(const HermitianOperator& h) const;

 private:
  CVector amplitudes_;
};

/// Eigenvalues sorted descending with matching eigenvector columns.
struct Eigensystem {
  RVector values;
  CMatrix vectors;
};

/// Dense Hermitian d×d matrix. The input is replaced by (M + M†)/2 on
/// construction; inputs whose anti-Hermitian part exceeds `herm_tol` are
/// rejected.
class HermitianOperator {
 public:
  explicit HermitianOperator(const CMatrix& entries, double herm_tol = tol::hermitian);

  static HermitianOperator zero(int d);
  static HermitianOperator identity(int d);
  static HermitianOperator diagonal(const RVector& diag);
  /// |v⟩⟨v| (v is not normalized).
  static HermitianOperator outer(const CVector& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const;
  /// Descending.
  RVector eigenvalues() const;
  Eigensystem eigensystem() const;
  /// max |λ|.
  double spectral_norm() const;

  HermitianOperator operator-() const;
  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);

 private:
  struct Trusted {};
  HermitianOperator(CMatrix entries, Trusted);
  CMatrix m_;
};

/// Yes-outcome operator of a yes-no experiment: 0 ≤ E ≤ I.
///
/// Eigenvalues within `val_tol` outside [0, 1] are accepted and the stored
/// spectrum is clamped; the matrix entries themselves are kept verbatim.
class Effect {
 public:
  explicit Effect(HermitianOperator op, double val_tol = tol::eigenvalue);

  static Effect zero(int d);
  static Effect identity(int d);
  /// Orthogonal projector onto the span of the columns of `v`
  /// (columns must be orthonormal).
  static Effect projector(const CMatrix& v);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const CMatrix& matrix() const { return op_.matrix(); }
  /// Clamped to [0, 1], descending.
  const RVector& spectrum() const { return spectrum_; }
  double trace() const { return op_.trace(); }
  /// I - E.
  Effect complement() const;

 private:
  HermitianOperator op_;
  RVector spectrum_;
};

/// ρ ≥ 0, tr ρ = 1.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op, double val_tol = tol::eigenvalue,
                         double trace_tol = tol::trace);

  static DensityMatrix pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int d);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const CMatrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

/// Collapse probability p ∈ [0, 1] and Hilbert dimension d ≥ 2.
class CollapseParams {
 public:
  CollapseParams(double p, int d);
  double p() const { return p_; }
  int d() const { return d_; }

 private:
  double p_;
  int d_;
};

/// Spectrum split into positive eigenvalues α (descending, > zero_tol) and
/// non-positive eigenvalues β (descending; entries within zero_tol of 0 are
/// stored as exactly 0).
class SignedSpectrum {
 public:
  static constexpr double kDefaultRelativeZeroTol = 1e-10;

  /// Classify raw eigenvalues using zero_tol = rel_zero_tol * max|λ|.
  static SignedSpectrum classify(std::span<const double> eigenvalues,
                                 double rel_zero_tol = kDefaultRelativeZeroTol);
  static SignedSpectrum of(const HermitianOperator& a,
                           double rel_zero_tol = kDefaultRelativeZeroTol);

  /// Explicit split; alphas must be > 0 and betas ≤ 0.
  SignedSpectrum(std::vector<double> alphas, std::vector<double> betas);

  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& betas() const { return betas_; }
  int k() const { return static_cast<int>(alphas_.size()); }
  int m() const { return static_cast<int>(betas_.size()); }
  int dim() const { return k() + m(); }
  double zero_tol() const { return zero_tol_; }
  double trace() const;

  /// Spectrum of -A.
  SignedSpectrum negated() const;

 private:
  SignedSpectrum() = default;
  std::vector<double> alphas_;
  std::vector<double> betas_;
  double zero_tol_ = 0.0;
};

// ---------------------------------------------------------------------------
// Operations

/// Keeps the diagonal of H in the collapse basis.
HermitianOperator diag_part(const HermitianOperator& h);

/// One draw of the collapse channel: ψ with probability 1-p, otherwise the
/// phase-aligned basis vector (c_k/|c_k|) b_k with probability p|c_k|².
/// The branch is picked by inverse CDF over [1-p, p|c_1|², ..., p|c_d|²]
/// with a single uniform draw.
PureState simulate_collapse(const PureState& psi, const CollapseParams& params, Rng& rng);
PureState simulate_collapse(const PureState& psi, const CollapseParams& params,
                            std::uint64_t seed);

/// simulate_collapse together with the branch that produced the state.
struct CollapseDraw {
  PureState state;
  int branch;  // -1: no collapse, else the basis index
  bool collapsed() const { return branch >= 0; }
};
CollapseDraw collapse_draw(const PureState& psi, const CollapseParams& params, Rng& rng);

/// Branch index of the collapse channel for uniform variate u ∈ [0,1):
/// -1 means "no collapse", otherwise the basis index k. Zero-weight
/// branches are never returned.
int collapse_branch(const CVector& amplitudes, double p, double u);

/// max(p, 1-p): reliability of blind guessing.
double blind_guess_reliability(double p);

/// R = p⟨ψ|diag E|ψ⟩ + (1-p)⟨ψ|I-E|ψ⟩.
double reliability_pure(const PureState& psi, const CollapseParams& params, const Effect& e);

/// R = tr[ρ (p diag E + (1-p)(I-E))].
double reliability_density(const DensityMatrix& rho, const CollapseParams& params,
                           const Effect& e);

/// A = p ρ₁ - (1-p) ρ₂, where hypothesis 1 has prior probability p.
HermitianOperator discrimination_operator(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                          double p);

/// Probability that answering "1" on the yes outcome of E is correct:
/// 1 - p + tr[A E].
double discrimination_reliability(const DensityMatrix& rho1, const DensityMatrix& rho2, double p,
                                  const Effect& e);

struct HelstromResult {
  Effect effect;         // projector onto the positive spectral subspace of A
  double r_max;          // (1-p) + λ⁺
  double lambda_plus;    // sum of positive eigenvalues of A
  double lambda_minus;   // sum of negative eigenvalues of A
};

/// Optimal two-hypothesis discrimination. Any effect between P⁺_A and
/// P⁺_A + P⁰_A is optimal; the returned one is P⁺_A (eigenvalues of A above
/// 1e-12·max(1, ‖A‖) count as positive).
HelstromResult helstrom_optimal(const DensityMatrix& rho1, const DensityMatrix& rho2, double p);

/// The two densities of the collapse-detection problem for a known ψ:
/// first = diag |ψ⟩⟨ψ| (collapsed, prior p), second = |ψ⟩⟨ψ| (prior 1-p).
std::pair<DensityMatrix, DensityMatrix> collapse_hypotheses(const PureState& psi);

/// max(p, 1 - p/d): upper bound on the optimal reliability for known ψ.
double helstrom_upper_bound(const CollapseParams& params);

/// A_p(E): R_ψ(E) = max(p, 1-p) + ⟨ψ|A_p(E)|ψ⟩.
///   p ≤ 1/2:  p diag E - (1-p) E
///   p > 1/2:  (1-p)(I - E) - p diag(I - E)
HermitianOperator collapse_indicator_operator(const Effect& e, const CollapseParams& params);

/// tr A_p(E) from the effect's trace alone (always ≤ 0).
double indicator_trace(const Effect& e, const CollapseParams& params);

}  // namespace collapse_gauge

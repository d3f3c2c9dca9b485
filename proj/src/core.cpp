#include "collapse_gauge/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace collapse_gauge {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionMismatch(os.str());
  }
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << ": p = " << p << " outside [0, 1]";
    throw ValidationError(os.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(CVector amplitudes, double norm_tol) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) {
    throw ValidationError("pure state: dimension must be at least 2");
  }
  const double n = amplitudes_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > norm_tol) {
    std::ostringstream os;
    os << "pure state: norm " << n << " differs from 1 by more than " << norm_tol;
    throw ValidationError(os.str());
  }
}

PureState PureState::normalized(const CVector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("pure state: cannot normalize a zero or non-finite vector");
  }
  return PureState(v / n);
}

PureState PureState::basis(int d, int k) {
  if (k < 0 || k >= d) throw ValidationError("pure state: basis index out of range");
  CVector v = CVector::Zero(d);
  v[k] = 1.0;
  return PureState(std::move(v));
}

double PureState::expectation(const HermitianOperator& h) const {
  require_same_dim(dim(), h.dim(), "expectation");
  return amplitudes_.dot(h.matrix() * amplitudes_).real();
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(const CMatrix& entries, double herm_tol) {
  if (entries.rows() != entries.cols()) {
    throw ValidationError("hermitian operator: matrix is not square");
  }
  if (entries.rows() < 1) throw ValidationError("hermitian operator: empty matrix");
  if (!entries.allFinite()) throw ValidationError("hermitian operator: non-finite entry");
  const CMatrix adj = entries.adjoint();
  const double asym = (entries - adj).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  if (asym > herm_tol * scale) {
    std::ostringstream os;
    os << "hermitian operator: max |M - M^dagger| = " << asym << " exceeds tolerance";
    throw ValidationError(os.str());
  }
  m_ = 0.5 * (entries + adj);
}

HermitianOperator::HermitianOperator(CMatrix entries, Trusted) : m_(std::move(entries)) {}

HermitianOperator HermitianOperator::zero(int d) {
  return HermitianOperator(CMatrix::Zero(d, d), Trusted{});
}

HermitianOperator HermitianOperator::identity(int d) {
  return HermitianOperator(CMatrix::Identity(d, d), Trusted{});
}

HermitianOperator HermitianOperator::diagonal(const RVector& diag) {
  return HermitianOperator(CMatrix(diag.cast<Complex>().asDiagonal()), Trusted{});
}

HermitianOperator HermitianOperator::outer(const CVector& v) {
  CMatrix m = v * v.adjoint();
  // Exact Hermitian symmetry and a real diagonal.
  return HermitianOperator(m);
}

double HermitianOperator::trace() const { return m_.trace().real(); }

RVector HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

Eigensystem HermitianOperator::eigensystem() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_);
  return {es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
}

double HermitianOperator::spectral_norm() const {
  const RVector ev = eigenvalues();
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

HermitianOperator HermitianOperator::operator-() const { return HermitianOperator(-m_, Trusted{}); }

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator+");
  return HermitianOperator(a.m_ + b.m_, HermitianOperator::Trusted{});
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator-");
  return HermitianOperator(a.m_ - b.m_, HermitianOperator::Trusted{});
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  return HermitianOperator(s * a.m_, HermitianOperator::Trusted{});
}

// ---------------------------------------------------------------------------
// Effect / DensityMatrix / CollapseParams

Effect::Effect(HermitianOperator op, double val_tol) : op_(std::move(op)) {
  RVector ev = op_.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -val_tol || ev[i] > 1.0 + val_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "effect: eigenvalue " << ev[i] << " outside [0, 1] (tolerance " << val_tol << ")";
      throw ValidationError(os.str());
    }
    ev[i] = std::clamp(ev[i], 0.0, 1.0);
  }
  spectrum_ = std::move(ev);
}

Effect Effect::zero(int d) { return Effect(HermitianOperator::zero(d)); }

Effect Effect::identity(int d) { return Effect(HermitianOperator::identity(d)); }

Effect Effect::projector(const CMatrix& v) {
  const CMatrix gram = v.adjoint() * v;
  if ((gram - CMatrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("effect: projector columns are not orthonormal");
  }
  return Effect(HermitianOperator(CMatrix(v * v.adjoint())));
}

Effect Effect::complement() const {
  return Effect(HermitianOperator::identity(dim()) - op_);
}

DensityMatrix::DensityMatrix(HermitianOperator op, double val_tol, double trace_tol)
    : op_(std::move(op)) {
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > trace_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "density matrix: trace " << tr << " differs from 1 by more than " << trace_tol;
    throw ValidationError(os.str());
  }
  const double lowest = op_.eigenvalues()[op_.dim() - 1];
  if (lowest < -val_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "density matrix: eigenvalue " << lowest << " is negative";
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  return DensityMatrix(HermitianOperator::outer(psi.amplitudes()));
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix((1.0 / d) * HermitianOperator::identity(d));
}

CollapseParams::CollapseParams(double p, int d) : p_(p), d_(d) {
  require_probability(p, "collapse params");
  if (d < 2) throw ValidationError("collapse params: d must be at least 2");
}

// ---------------------------------------------------------------------------
// SignedSpectrum

SignedSpectrum SignedSpectrum::classify(std::span<const double> eigenvalues, double rel_zero_tol) {
  if (eigenvalues.empty()) throw ValidationError("signed spectrum: empty spectrum");
  double scale = 0.0;
  for (double v : eigenvalues) {
    if (!std::isfinite(v)) throw ValidationError("signed spectrum: non-finite eigenvalue");
    scale = std::max(scale, std::abs(v));
  }
  SignedSpectrum s;
  s.zero_tol_ = rel_zero_tol * scale;
  for (double v : eigenvalues) {
    if (v > s.zero_tol_) {
      s.alphas_.push_back(v);
    } else {
      s.betas_.push_back(v >= -s.zero_tol_ ? 0.0 : v);
    }
  }
  std::sort(s.alphas_.begin(), s.alphas_.end(), std::greater<>());
  std::sort(s.betas_.begin(), s.betas_.end(), std::greater<>());
  return s;
}

SignedSpectrum SignedSpectrum::of(const HermitianOperator& a, double rel_zero_tol) {
  const RVector ev = a.eigenvalues();
  const double scale = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  if (std::abs(ev.sum() - a.trace()) > 1e-9 * std::max(scale, 1e-300)) {
    throw NumericalError("signed spectrum: eigenvalue sum does not reproduce the trace");
  }
  return classify(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())),
                  rel_zero_tol);
}

SignedSpectrum::SignedSpectrum(std::vector<double> alphas, std::vector<double> betas)
    : alphas_(std::move(alphas)), betas_(std::move(betas)) {
  if (alphas_.empty() && betas_.empty()) {
    throw ValidationError("signed spectrum: empty spectrum");
  }
  for (double a : alphas_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ValidationError("signed spectrum: alphas must be finite and positive");
    }
  }
  for (double b : betas_) {
    if (!(b <= 0.0) || !std::isfinite(b)) {
      throw ValidationError("signed spectrum: betas must be finite and non-positive");
    }
  }
  std::sort(alphas_.begin(), alphas_.end(), std::greater<>());
  std::sort(betas_.begin(), betas_.end(), std::greater<>());
}

double SignedSpectrum::trace() const {
  double t = 0.0;
  for (double a : alphas_) t += a;
  for (double b : betas_) t += b;
  return t;
}

SignedSpectrum SignedSpectrum::negated() const {
  SignedSpectrum s;
  s.zero_tol_ = zero_tol_;
  for (double b : betas_) {
    if (b < 0.0) {
      s.alphas_.push_back(-b);
    } else {
      s.betas_.push_back(0.0);
    }
  }
  for (double a : alphas_) s.betas_.push_back(-a);
  std::sort(s.alphas_.begin(), s.alphas_.end(), std::greater<>());
  std::sort(s.betas_.begin(), s.betas_.end(), std::greater<>());
  return s;
}

// ---------------------------------------------------------------------------
// Operations

HermitianOperator diag_part(const HermitianOperator& h) {
  return HermitianOperator::diagonal(h.matrix().diagonal().real());
}

int collapse_branch(const CVector& amplitudes, double p, double u) {
  double acc = 1.0 - p;
  if (u < acc) return -1;
  int last = -1;
  for (Eigen::Index k = 0; k < amplitudes.size(); ++k) {
    const double w = p * std::norm(amplitudes[k]);
    if (w <= 0.0) continue;
    last = static_cast<int>(k);
    acc += w;
    if (u < acc) return last;
  }
  // u fell past the accumulated total through round-off.
  return last;
}

CollapseDraw collapse_draw(const PureState& psi, const CollapseParams& params, Rng& rng) {
  require_same_dim(psi.dim(), params.d(), "simulate_collapse");
  const int k = collapse_branch(psi.amplitudes(), params.p(), uniform01(rng));
  if (k < 0) return {psi, -1};
  const Complex c = psi[k];
  CVector out = CVector::Zero(psi.dim());
  out[k] = c / std::abs(c);
  return {PureState(std::move(out)), k};
}

PureState simulate_collapse(const PureState& psi, const CollapseParams& params, Rng& rng) {
  return collapse_draw(psi, params, rng).state;
}

PureState simulate_collapse(const PureState& psi, const CollapseParams& params,
                            std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return simulate_collapse(psi, params, rng);
}

double blind_guess_reliability(double p) { return std::max(p, 1.0 - p); }

double reliability_pure(const PureState& psi, const CollapseParams& params, const Effect& e) {
  require_same_dim(psi.dim(), e.dim(), "reliability_pure");
  require_same_dim(psi.dim(), params.d(), "reliability_pure");
  const double p = params.p();
  const CVector& a = psi.amplitudes();
  double diag_term = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    diag_term += e.matrix()(k, k).real() * std::norm(a[k]);
  }
  const double e_term = a.dot(e.matrix() * a).real();
  return std::clamp(p * diag_term + (1.0 - p) * (1.0 - e_term), 0.0, 1.0);
}

double reliability_density(const DensityMatrix& rho, const CollapseParams& params,
                           const Effect& e) {
  require_same_dim(rho.dim(), e.dim(), "reliability_density");
  require_same_dim(rho.dim(), params.d(), "reliability_density");
  const double p = params.p();
  const int d = rho.dim();
  const CMatrix m = p * CMatrix(e.matrix().diagonal().asDiagonal()) +
                    (1.0 - p) * (CMatrix::Identity(d, d) - e.matrix());
  const double r = (rho.matrix() * m).trace().real();
  return std::clamp(r, 0.0, 1.0);
}

HermitianOperator discrimination_operator(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                          double p) {
  require_same_dim(rho1.dim(), rho2.dim(), "discrimination_operator");
  require_probability(p, "discrimination_operator");
  return p * rho1.op() - (1.0 - p) * rho2.op();
}

double discrimination_reliability(const DensityMatrix& rho1, const DensityMatrix& rho2, double p,
                                  const Effect& e) {
  require_same_dim(rho1.dim(), e.dim(), "discrimination_reliability");
  const HermitianOperator a = discrimination_operator(rho1, rho2, p);
  return 1.0 - p + (a.matrix() * e.matrix()).trace().real();
}

HelstromResult helstrom_optimal(const DensityMatrix& rho1, const DensityMatrix& rho2, double p) {
  const HermitianOperator a = discrimination_operator(rho1, rho2, p);
  const Eigensystem es = a.eigensystem();
  const double scale = std::max(1.0, std::max(std::abs(es.values[0]),
                                              std::abs(es.values[es.values.size() - 1])));
  const double cut = 1e-12 * scale;

  double plus = 0.0;
  double minus = 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double v = es.values[i];
    if (v > 0.0) plus += v;
    if (v < 0.0) minus += v;
    if (v > cut) ++rank;
  }
  const double r_plus = (1.0 - p) + plus;
  const double r_minus = p - minus;
  if (std::abs(r_plus - r_minus) > tol::helstrom) {
    std::ostringstream os;
    os.precision(17);
    os << "helstrom: (1-p)+lambda+ = " << r_plus << " disagrees with p-lambda- = " << r_minus;
    throw NumericalError(os.str());
  }
  // Eigenvalues are sorted descending, so the positive subspace is the
  // leading `rank` columns.
  const CMatrix v = es.vectors.leftCols(rank);
  Effect e = rank == 0 ? Effect::zero(a.dim()) : Effect::projector(v);
  return {std::move(e), r_plus, plus, minus};
}

std::pair<DensityMatrix, DensityMatrix> collapse_hypotheses(const PureState& psi) {
  DensityMatrix pure = DensityMatrix::pure(psi);
  DensityMatrix collapsed(diag_part(pure.op()));
  return {std::move(collapsed), std::move(pure)};
}

double helstrom_upper_bound(const CollapseParams& params) {
  return std::max(params.p(), 1.0 - params.p() / params.d());
}

HermitianOperator collapse_indicator_operator(const Effect& e, const CollapseParams& params) {
  require_same_dim(e.dim(), params.d(), "collapse_indicator_operator");
  const double p = params.p();
  const HermitianOperator& op = e.op();
  if (p <= 0.5) {
    return p * diag_part(op) - (1.0 - p) * op;
  }
  const HermitianOperator rest = HermitianOperator::identity(e.dim()) - op;
  return (1.0 - p) * rest - p * diag_part(rest);
}

double indicator_trace(const Effect& e, const CollapseParams& params) {
  const double p = params.p();
  if (p <= 0.5) return -(1.0 - 2.0 * p) * e.trace();
  return -(2.0 * p - 1.0) * (e.dim() - e.trace());
}

}  // namespace collapse_gauge

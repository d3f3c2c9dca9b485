#include "collapse_gauge/random.hpp"

#include <cmath>

namespace collapse_gauge {

CVector sample_complex_gaussian(int d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CVector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = Complex(re, im);
  }
  return v;
}

namespace {

CMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) g.col(j) = sample_complex_gaussian(rows, rng);
  return g;
}

}  // namespace

CMatrix haar_unitary(int d, Rng& rng) {
  const CMatrix g = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

Effect random_effect(int d, Rng& rng) {
  const CMatrix u = haar_unitary(d, rng);
  RVector mu(d);
  for (int i = 0; i < d; ++i) mu[i] = uniform01(rng);
  return Effect(HermitianOperator(CMatrix(u * mu.cast<Complex>().asDiagonal() * u.adjoint())));
}

Effect random_projector(int d, int k, Rng& rng) {
  if (k < 0 || k > d) throw ValidationError("random_projector: rank out of range");
  if (k == 0) return Effect::zero(d);
  const CMatrix u = haar_unitary(d, rng);
  return Effect::projector(u.leftCols(k));
}

DensityMatrix random_density(int d, Rng& rng) {
  const CMatrix g = gaussian_matrix(d, d, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(HermitianOperator(rho));
}

HermitianOperator random_hermitian(int d, Rng& rng) {
  const CMatrix g = gaussian_matrix(d, d, rng);
  return HermitianOperator(CMatrix(0.5 * (g + g.adjoint())));
}

}  // namespace collapse_gauge

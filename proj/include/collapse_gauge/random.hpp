#pragma once

// Random operators and states used by the Monte Carlo oracle, the search
// engine and the property tests.

#include "collapse_gauge/core.hpp"

namespace collapse_gauge {

/// d i.i.d. complex Gaussians, real and imaginary parts N(0, 1/2).
CVector sample_complex_gaussian(int d, Rng& rng);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal moved into Q.
CMatrix haar_unitary(int d, Rng& rng);

/// E = U diag(μ) U† with U Haar and μ uniform in [0, 1]^d.
Effect random_effect(int d, Rng& rng);

/// Projector onto a Haar-random k-dimensional subspace.
Effect random_projector(int d, int k, Rng& rng);

/// Ginibre density matrix G G† / tr(G G†).
DensityMatrix random_density(int d, Rng& rng);

/// Gaussian Hermitian matrix (G + G†)/2.
HermitianOperator random_hermitian(int d, Rng& rng);

}  // namespace collapse_gauge

#pragma once

#include "gapprox/dense_operator.hpp"
#include "gapprox/linalg.hpp"

namespace gapprox {

/// Eigendecomposition of a Hermitian operator, tied to the support it was
/// computed on. `ground_shift` records any constant subtracted from the
/// spectrum (so shifted data satisfies eigenvalues(0) == 0).
struct SpectralData {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // columns, unitary
  SiteSet support;
  const Lattice* lattice = nullptr;
  double ground_shift = 0;
};

SpectralData eigendecompose(const DenseOperator& H);

/// Subtract c from all eigenvalues and record it.
SpectralData shifted(SpectralData spec, double c);

struct GroundState {
  Eigen::VectorXcd psi0;
  double gamma = 0;
  double energy = 0;  // unshifted ground energy
};

/// Lowest eigenvector and gap; throws DegenerateGroundState when
/// gamma < degeneracy_tol * max(1, ||H||).
GroundState ground_state(const SpectralData& spec, double degeneracy_tol = 1e-8);

/// (A)_alpha for the dynamics generated by spec: eigenbasis matrix elements
/// damped by exp(-(lambda_i - lambda_j)^2 / (4 alpha)).
DenseOperator gaussian_smear(const DenseOperator& A, double alpha, const SpectralData& spec);

/// Heisenberg evolution exp(iHt) A exp(-iHt).
DenseOperator evolve(const DenseOperator& A, double t, const SpectralData& spec);

/// f(H) with f(lambda) = exp(-lambda^2 / (4 alpha)); requires the ground
/// energy shifted to zero (|eigenvalues(0)| <= 1e-9 * scale).
DenseOperator matrix_gaussian(const SpectralData& spec, double alpha);

struct ProjectionBelow {
  DenseOperator projector;
  int rank = 0;
  bool threshold_tie = false;  // some eigenvalue within 1e-12 of delta
};

/// Orthogonal projection onto eigenvalues strictly below delta.
ProjectionBelow spectral_projection_below(const DenseOperator& M, double delta);

}  // namespace gapprox

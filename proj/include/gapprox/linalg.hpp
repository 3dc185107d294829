#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gapprox {

struct EigResult {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns
};

/// Full Hermitian eigendecomposition (LAPACK zheevd).
EigResult eig_hermitian(const Eigen::MatrixXcd& H);

/// Eigenvalues only.
Eigen::VectorXd eigvals_hermitian(const Eigen::MatrixXcd& H);

/// Largest singular value. Uses zgesdd for modest sizes and
/// sqrt(lambda_max(A^* A)) for large matrices.
double spectral_norm(const Eigen::MatrixXcd& A);

/// All singular values, descending (zgesdd).
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& A);

/// Gauss-Hermite nodes and weights for integrating f(u) exp(-u^2) du
/// (Golub-Welsch on the Hermite recurrence).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_hermite(int n);

}  // namespace gapprox

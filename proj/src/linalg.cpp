#include "gapprox/linalg.hpp"

#include <cmath>
#include <complex>

#include <lapacke.h>

#include "gapprox/errors.hpp"

namespace gapprox {

namespace {
lapack_complex_double* lp(std::complex<double>* p) {
  return reinterpret_cast<lapack_complex_double*>(p);
}
}  // namespace

EigResult eig_hermitian(const Eigen::MatrixXcd& H) {
  const int n = static_cast<int>(H.rows());
  EigResult r;
  r.vectors = H;
  r.values.resize(n);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, lp(r.vectors.data()), n,
                            r.values.data());
  if (info != 0) throw ConvergenceFailure("zheevd failed, info=" + std::to_string(info));
  return r;
}

Eigen::VectorXd eigvals_hermitian(const Eigen::MatrixXcd& H) {
  const int n = static_cast<int>(H.rows());
  Eigen::MatrixXcd A = H;
  Eigen::VectorXd w(n);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, lp(A.data()), n, w.data());
  if (info != 0) throw ConvergenceFailure("zheevd failed, info=" + std::to_string(info));
  return w;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& A) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  Eigen::MatrixXcd W = A;
  Eigen::VectorXd s(std::min(m, n));
  int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, lp(W.data()), m, s.data(), nullptr, 1,
                            nullptr, 1);
  if (info != 0) throw ConvergenceFailure("zgesdd failed, info=" + std::to_string(info));
  return s;
}

double spectral_norm(const Eigen::MatrixXcd& A) {
  if (A.rows() <= 2048 || A.rows() != A.cols()) return singular_values(A)(0);
  // at dim >= 4096 a Gram eigensolve is much cheaper than a full SVD
  Eigen::MatrixXcd G = A.adjoint() * A;
  Eigen::VectorXd w = eigvals_hermitian(G);
  return std::sqrt(std::max(0.0, w(w.size() - 1)));
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_hermite(int n) {
  if (n < 1) throw NonPositiveInput("gauss_hermite requires n >= 1");
  // Jacobi matrix of the (physicists') Hermite polynomials: off-diagonal sqrt(k/2)
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(k / 2.0);
  Eigen::MatrixXd z(n, n);
  int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', n, diag.data(), off.data(), z.data(), n);
  if (info != 0) throw ConvergenceFailure("dstev failed, info=" + std::to_string(info));
  const double mu0 = std::sqrt(M_PI);  // integral of the weight
  Eigen::VectorXd w(n);
  for (int k = 0; k < n; ++k) w(k) = mu0 * z(0, k) * z(0, k);
  return {diag, w};
}

}  // namespace gapprox

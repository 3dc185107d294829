#include "gapprox/spectral.hpp"

#include <cmath>
#include <functional>

namespace gapprox {

SpectralData eigendecompose(const DenseOperator& H) {
  if (!H.hermitian) throw PreconditionViolated("eigendecompose requires a Hermitian operator");
  EigResult e = eig_hermitian(H.mat);
  SpectralData s;
  s.eigenvalues = std::move(e.values);
  s.eigenvectors = std::move(e.vectors);
  s.support = H.support;
  s.lattice = H.lattice;
  return s;
}

SpectralData shifted(SpectralData spec, double c) {
  spec.eigenvalues.array() -= c;
  spec.ground_shift += c;
  return spec;
}

GroundState ground_state(const SpectralData& spec, double degeneracy_tol) {
  GroundState g;
  g.energy = spec.eigenvalues(0) + spec.ground_shift;
  g.psi0 = spec.eigenvectors.col(0);
  g.gamma = spec.eigenvalues(1) - spec.eigenvalues(0);
  const double scale =
      std::max(std::abs(spec.eigenvalues(0)), std::abs(spec.eigenvalues(spec.eigenvalues.size() - 1)));
  if (g.gamma < degeneracy_tol * std::max(1.0, scale))
    throw DegenerateGroundState("ground state gap " + std::to_string(g.gamma) +
                                " below degeneracy tolerance");
  return g;
}

namespace {

DenseOperator in_eigenbasis_apply(const DenseOperator& A, const SpectralData& spec,
                                  const std::function<std::complex<double>(double, double)>& f) {
  DenseOperator Ae = embed(A, spec.support);
  Eigen::MatrixXcd T = spec.eigenvectors.adjoint() * Ae.mat * spec.eigenvectors;
  for (Eigen::Index j = 0; j < T.cols(); ++j)
    for (Eigen::Index i = 0; i < T.rows(); ++i)
      T(i, j) *= f(spec.eigenvalues(i), spec.eigenvalues(j));
  DenseOperator r;
  r.support = spec.support;
  r.mat = spec.eigenvectors * T * spec.eigenvectors.adjoint();
  r.lattice = spec.lattice;
  r.hermitian = Ae.hermitian;
  return r;
}

}  // namespace

DenseOperator gaussian_smear(const DenseOperator& A, double alpha, const SpectralData& spec) {
  if (alpha <= 0) throw NonPositiveInput("gaussian_smear requires alpha > 0");
  return in_eigenbasis_apply(A, spec, [alpha](double li, double lj) -> std::complex<double> {
    const double w = li - lj;
    return std::exp(-w * w / (4 * alpha));
  });
}

DenseOperator evolve(const DenseOperator& A, double t, const SpectralData& spec) {
  using namespace std::complex_literals;
  return in_eigenbasis_apply(A, spec, [t](double li, double lj) {
    return std::exp(1i * ((li - lj) * t));
  });
}

DenseOperator matrix_gaussian(const SpectralData& spec, double alpha) {
  if (alpha <= 0) throw NonPositiveInput("matrix_gaussian requires alpha > 0");
  const double scale = std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
  if (std::abs(spec.eigenvalues(0)) > 1e-9 * scale)
    throw ShiftMissing("matrix_gaussian requires the ground energy shifted to zero");
  Eigen::VectorXcd f(spec.eigenvalues.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    const double l = spec.eigenvalues(k);
    f(k) = std::exp(-l * l / (4 * alpha));
  }
  DenseOperator r;
  r.support = spec.support;
  r.mat = spec.eigenvectors * f.asDiagonal() * spec.eigenvectors.adjoint();
  r.lattice = spec.lattice;
  r.hermitian = true;
  return r;
}

ProjectionBelow spectral_projection_below(const DenseOperator& M, double delta) {
  if (!M.hermitian)
    throw PreconditionViolated("spectral_projection_below requires a Hermitian operator");
  EigResult e = eig_hermitian(M.mat);
  ProjectionBelow out;
  Eigen::VectorXcd sel = Eigen::VectorXcd::Zero(e.values.size());
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (std::abs(e.values(k) - delta) < 1e-12) out.threshold_tie = true;
    if (e.values(k) < delta) {
      sel(k) = 1.0;
      ++out.rank;
    }
  }
  out.projector.support = M.support;
  out.projector.mat = e.vectors * sel.asDiagonal() * e.vectors.adjoint();
  out.projector.lattice = M.lattice;
  out.projector.hermitian = true;
  return out;
}

}  // namespace gapprox

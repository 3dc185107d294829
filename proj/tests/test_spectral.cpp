#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gapprox/interaction.hpp"
#include "gapprox/linalg.hpp"
#include "gapprox/spectral.hpp"

using namespace gapprox;
using namespace std::complex_literals;

namespace {

Lattice chain(int n) {
  LatticeSpec s;
  s.dims = {n};
  return Lattice::build(s);
}

std::mt19937 rng(4242);

Eigen::MatrixXcd random_hermitian(int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = {g(rng), g(rng)};
  return (m + m.adjoint()) / 2;
}

// time-quadrature oracle for the Gaussian smearing, 200 Gauss-Hermite nodes
DenseOperator smear_quadrature(const DenseOperator& A, double alpha, const SpectralData& spec) {
  auto [u, w] = gauss_hermite(200);
  DenseOperator acc = zero_op(*A.lattice, spec.support);
  for (int k = 0; k < 200; ++k) {
    DenseOperator tau = evolve(A, u(k) / std::sqrt(alpha), spec);
    acc.mat += (w(k) / std::sqrt(M_PI)) * embed(tau, spec.support).mat;
  }
  acc.hermitian = A.hermitian;
  return acc;
}

}  // namespace

TEST_CASE("ground state extraction") {
  Lattice c1 = chain(1);
  Interaction I1 = tfi_model(c1, 1.0, 1.0);
  SpectralData s1 = eigendecompose(local_hamiltonian(I1, {0}));
  GroundState g1 = ground_state(s1);
  CHECK(g1.gamma == doctest::Approx(2));
  Eigen::VectorXcd plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(plus.dot(g1.psi0)) - 1) < 1e-12);

  Lattice c2 = chain(2);
  SpectralData s2 =
      eigendecompose(embed_full(local_hamiltonian(tfi_model(c2, 0.0, 1.0), {0, 1})));
  CHECK(ground_state(s2).gamma == doctest::Approx(2));

  SpectralData sdeg =
      eigendecompose(embed_full(local_hamiltonian(tfi_model(c2, 1.0, 0.0), {0, 1})));
  CHECK_THROWS_AS(ground_state(sdeg), DegenerateGroundState);
}

TEST_CASE("residuals on random hermitian input") {
  Lattice c3 = chain(3);
  DenseOperator H = make_operator(c3, {0, 1, 2}, random_hermitian(8));
  SpectralData s = eigendecompose(H);
  for (int k = 0; k < 8; ++k)
    CHECK((H.mat * s.eigenvectors.col(k) - s.eigenvalues(k) * s.eigenvectors.col(k)).norm() <
          1e-9);
}

TEST_CASE("gaussian smear") {
  Lattice c2 = chain(2);
  // A commuting with the generator is unchanged
  DenseOperator gen = pauli_string(c2, {0, 1}, "ZZ", 1.0);
  SpectralData sg = eigendecompose(gen);
  DenseOperator A = pauli_string(c2, {0}, "Z", 0.7);
  DenseOperator sm = gaussian_smear(A, 0.3, sg);
  CHECK((sm.mat - embed(A, sg.support).mat).cwiseAbs().maxCoeff() < 1e-12);

  // single frequency gamma: off-diagonals damped by exp(-gamma^2/4alpha)
  Lattice c1 = chain(1);
  const double gamma = 1.7, alpha = 0.9;
  Eigen::MatrixXcd gm = Eigen::MatrixXcd::Zero(2, 2);
  gm(1, 1) = gamma;
  SpectralData sd = eigendecompose(make_operator(c1, {0}, gm));
  DenseOperator sx = make_operator(c1, {0}, pauli('X'));
  DenseOperator smx = gaussian_smear(sx, alpha, sd);
  CHECK(std::abs(smx.mat(0, 1)) ==
        doctest::Approx(std::exp(-gamma * gamma / (4 * alpha))).epsilon(1e-12));

  // linearity and contraction
  Lattice c3 = chain(3);
  DenseOperator H3 = make_operator(c3, {0, 1, 2}, random_hermitian(8));
  SpectralData s3 = eigendecompose(H3);
  for (int rep = 0; rep < 5; ++rep) {
    DenseOperator P = make_operator(c3, {0, 1, 2}, random_hermitian(8));
    DenseOperator Q = make_operator(c3, {0, 1, 2}, random_hermitian(8));
    DenseOperator both = gaussian_smear(add(P, Q), 0.5, s3);
    DenseOperator sep = add(gaussian_smear(P, 0.5, s3), gaussian_smear(Q, 0.5, s3));
    CHECK((both.mat - sep.mat).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(op_norm(gaussian_smear(P, 0.5, s3)) <= op_norm(P) + 1e-11);
  }

  // quadrature oracle agreement
  for (int rep = 0; rep < 3; ++rep) {
    DenseOperator R = make_operator(c3, {0, 1, 2}, random_hermitian(8));
    DenseOperator exact = gaussian_smear(R, 1.1, s3);
    DenseOperator quad = smear_quadrature(R, 1.1, s3);
    CHECK(op_norm(sub(exact, quad)) < 1e-8);
  }
}

TEST_CASE("evolution") {
  Lattice c1 = chain(1);
  SpectralData sz = eigendecompose(make_operator(c1, {0}, pauli('Z')));
  DenseOperator sx = make_operator(c1, {0}, pauli('X'));
  CHECK((evolve(sx, 0.0, sz).mat - sx.mat).cwiseAbs().maxCoeff() < 1e-14);

  DenseOperator gen_back = make_operator(c1, {0}, pauli('Z'));
  CHECK((evolve(gen_back, 1.3, sz).mat - gen_back.mat).cwiseAbs().maxCoeff() < 1e-12);

  // e^{i pi/4 sz} sx e^{-i pi/4 sz} = -sy
  Eigen::MatrixXcd expect = -pauli('Y');
  CHECK((evolve(sx, M_PI / 4, sz).mat - expect).cwiseAbs().maxCoeff() < 1e-12);

  Lattice c3 = chain(3);
  DenseOperator H3 = make_operator(c3, {0, 1, 2}, random_hermitian(8));
  SpectralData s3 = eigendecompose(H3);
  DenseOperator A = make_operator(c3, {0, 1, 2}, random_hermitian(8));
  CHECK(op_norm(evolve(A, 0.7, s3)) == doctest::Approx(op_norm(A)).epsilon(1e-10));
}

TEST_CASE("matrix gaussian") {
  Lattice c1 = chain(1);
  const double gamma = 2.2, alpha = 0.6;
  Eigen::MatrixXcd gm = Eigen::MatrixXcd::Zero(2, 2);
  gm(1, 1) = gamma;
  SpectralData sd = eigendecompose(make_operator(c1, {0}, gm));
  DenseOperator P = matrix_gaussian(sd, alpha);
  CHECK(std::abs(P.mat(0, 0).real() - 1) < 1e-14);
  CHECK(P.mat(1, 1).real() ==
        doctest::Approx(std::exp(-gamma * gamma / (4 * alpha))).epsilon(1e-13));

  SpectralData unshifted = sd;
  unshifted.eigenvalues.array() += 5.0;
  CHECK_THROWS_AS(matrix_gaussian(unshifted, alpha), ShiftMissing);

  // ||P_alpha - P_0|| equals the gap filter exactly on the 8-site chain
  Lattice c8 = chain(8);
  Interaction I = tfi_model(c8, 1.0, 2.0);
  SpectralData s = eigendecompose(embed_full(local_hamiltonian(I, c8.all_sites())));
  GroundState g = ground_state(s);
  SpectralData s0 = shifted(s, s.eigenvalues(0));
  const double a8 = 1.3;
  DenseOperator Pa = matrix_gaussian(s0, a8);
  Eigen::MatrixXcd P0 = g.psi0 * g.psi0.adjoint();
  DenseOperator diff = make_operator(c8, c8.all_sites(), Pa.mat - P0);
  CHECK(op_norm(diff) ==
        doctest::Approx(std::exp(-g.gamma * g.gamma / (4 * a8))).epsilon(1e-11));
}

TEST_CASE("spectral projection below threshold") {
  Lattice c1 = chain(1);
  DenseOperator zero = zero_op(c1, {0});
  ProjectionBelow all = spectral_projection_below(zero, 0.5);
  CHECK(all.rank == 2);
  CHECK((all.projector.mat - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  ProjectionBelow below = spectral_projection_below(make_operator(c1, {0}, pauli('Z')), 0.0);
  CHECK(below.rank == 1);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(2, 2);
  expect(1, 1) = 1;
  CHECK((below.projector.mat - expect).cwiseAbs().maxCoeff() < 1e-13);

  // rank equals the eigenvalue-count oracle on random operators
  Lattice c3 = chain(3);
  for (int rep = 0; rep < 10; ++rep) {
    DenseOperator M = make_operator(c3, {0, 1, 2}, random_hermitian(8));
    const double delta = 0.3;
    ProjectionBelow p = spectral_projection_below(M, delta);
    Eigen::VectorXd w = eigvals_hermitian(M.mat);
    int count = 0;
    for (int k = 0; k < w.size(); ++k) count += w(k) < delta;
    CHECK(p.rank == count);
    CHECK(op_norm(sub(mul(p.projector, p.projector), p.projector)) < 1e-10);
  }
}

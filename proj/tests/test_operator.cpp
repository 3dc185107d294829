#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gapprox/dense_operator.hpp"

using namespace gapprox;
using namespace std::complex_literals;

namespace {

Lattice chain(int n) {
  LatticeSpec s;
  s.dims = {n};
  return Lattice::build(s);
}

std::mt19937 rng(12345);

Eigen::MatrixXcd random_matrix(int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = {g(rng), g(rng)};
  return m;
}

Eigen::MatrixXcd random_hermitian(int n) {
  Eigen::MatrixXcd m = random_matrix(n);
  return (m + m.adjoint()) / 2;
}

// Haar-random unitary from the QR decomposition of a Ginibre matrix
Eigen::MatrixXcd haar_unitary(int n) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_matrix(n));
  Eigen::MatrixXcd Q = qr.householderQ();
  Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) Q.col(k) *= R(k, k) / std::abs(R(k, k));
  return Q;
}

// power-iteration oracle for the largest singular value (on A^* A)
double power_iteration_norm(const Eigen::MatrixXcd& A, int iters = 2000) {
  Eigen::MatrixXcd G = A.adjoint() * A;
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(A.cols());
  v.normalize();
  double lam = 0;
  for (int k = 0; k < iters; ++k) {
    v = G * v;
    lam = v.norm();
    v /= lam;
  }
  return std::sqrt(lam);
}

}  // namespace

TEST_CASE("embedding basics") {
  Lattice lat = chain(2);
  DenseOperator sx = make_operator(lat, {0}, pauli('X'));
  DenseOperator e = embed(sx, {0, 1});
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
  expect.block(0, 2, 2, 2) = Eigen::Matrix2cd::Identity();
  expect.block(2, 0, 2, 2) = Eigen::Matrix2cd::Identity();
  CHECK((e.mat - expect).cwiseAbs().maxCoeff() < 1e-14);

  DenseOperator id = identity_op(lat, {1});
  CHECK((embed(id, {0, 1}).mat - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(embed(make_operator(lat, {1}, pauli('Z')), SiteSet{0}), SupportNotContained);
}

TEST_CASE("embedding is an algebra homomorphism") {
  Lattice lat = chain(4);
  for (int rep = 0; rep < 5; ++rep) {
    DenseOperator A = make_operator(lat, {0, 2}, random_matrix(4));
    DenseOperator B = make_operator(lat, {0, 2}, random_matrix(4));
    DenseOperator AB = make_operator(lat, {0, 2}, A.mat * B.mat);
    SiteSet S = {0, 1, 2, 3};
    Eigen::MatrixXcd lhs = embed(AB, S).mat;
    Eigen::MatrixXcd rhs = embed(A, S).mat * embed(B, S).mat;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("embedding preserves spectrum with multiplicity") {
  Lattice lat = chain(3);
  DenseOperator A = make_operator(lat, {1}, random_hermitian(2));
  DenseOperator E = embed(A, {0, 1, 2});
  Eigen::VectorXd small = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(A.mat).eigenvalues();
  Eigen::VectorXd big = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(E.mat).eigenvalues();
  std::vector<double> expect;
  for (int k = 0; k < small.size(); ++k)
    for (int r = 0; r < 4; ++r) expect.push_back(small(k));
  std::sort(expect.begin(), expect.end());
  for (int k = 0; k < big.size(); ++k) CHECK(big(k) == doctest::Approx(expect[k]));
}

TEST_CASE("localize basics") {
  Lattice lat = chain(3);
  // already supported in Y -> unchanged
  DenseOperator B = make_operator(lat, {0}, random_matrix(2));
  DenseOperator Bfull = embed(B, {0, 1, 2});
  DenseOperator loc = localize(Bfull, {0});
  CHECK((embed(loc, {0, 1, 2}).mat - Bfull.mat).cwiseAbs().maxCoeff() < 1e-13);

  // identity on Y times C elsewhere -> (tr C / dim) * identity
  DenseOperator C = make_operator(lat, {1, 2}, random_matrix(4));
  DenseOperator Cfull = embed(C, {0, 1, 2});
  DenseOperator loc2 = localize(Cfull, {0});
  std::complex<double> mean = C.mat.trace() / 4.0;
  CHECK((loc2.mat - mean * Eigen::MatrixXcd::Identity(loc2.dim(), loc2.dim()))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}

TEST_CASE("localize equals Monte-Carlo Haar average") {
  Lattice lat = chain(3);
  const int samples = 10000;
  for (int rep = 0; rep < 2; ++rep) {
    DenseOperator A = make_operator(lat, {0, 1, 2}, random_matrix(8));
    DenseOperator loc = localize(A, {0});
    Eigen::MatrixXcd locE = embed(loc, {0, 1, 2}).mat;

    Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(8, 8);
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(8, 8);
    for (int s = 1; s <= samples; ++s) {
      DenseOperator U = make_operator(lat, {1, 2}, haar_unitary(4));
      Eigen::MatrixXcd Ue = embed(U, {0, 1, 2}).mat;
      Eigen::MatrixXcd sample = Ue.adjoint() * A.mat * Ue;
      Eigen::MatrixXcd delta = sample - mean;
      mean += delta / static_cast<double>(s);
      m2 += delta.cwiseAbs2().matrix();
    }
    double se = std::sqrt(m2.sum() / samples) / std::sqrt(static_cast<double>(samples));
    double err = (mean - locE).norm();  // Frobenius
    CHECK(err <= 5 * se);
  }
}

TEST_CASE("localize contraction and conditional expectation") {
  Lattice lat = chain(3);
  for (int rep = 0; rep < 20; ++rep) {
    DenseOperator A = make_operator(lat, {0, 1, 2}, random_matrix(8));
    CHECK(op_norm(localize(A, {0, 1})) <= op_norm(A) + 1e-12);
  }
  for (int rep = 0; rep < 5; ++rep) {
    DenseOperator A = make_operator(lat, {0, 1, 2}, random_matrix(8));
    DenseOperator L = embed(make_operator(lat, {0}, random_matrix(2)), {0, 1, 2});
    DenseOperator R = embed(make_operator(lat, {1}, random_matrix(2)), {0, 1, 2});
    DenseOperator lhs = localize(mul(mul(L, A), R), {0, 1});
    DenseOperator rhs = mul(mul(localize(L, {0, 1}), localize(A, {0, 1})), localize(R, {0, 1}));
    CHECK((embed(lhs, {0, 1}).mat - embed(rhs, {0, 1}).mat).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("op_norm") {
  Lattice lat = chain(2);
  CHECK(op_norm(identity_op(lat, {0, 1})) == doctest::Approx(1.0));
  CHECK(op_norm(make_operator(lat, {0}, pauli('X'))) == doctest::Approx(1.0));

  Lattice lat6 = chain(6);
  DenseOperator A = make_operator(lat6, {0, 1, 2, 3, 4, 5}, random_matrix(64));
  CHECK(op_norm(A) == doctest::Approx(power_iteration_norm(A.mat)).epsilon(1e-9));
}

TEST_CASE("commutator") {
  Lattice lat = chain(3);
  DenseOperator A = make_operator(lat, {0}, random_matrix(2));
  DenseOperator B = make_operator(lat, {2}, random_matrix(2));
  CHECK(op_norm(commutator(A, B)) < 1e-13);

  DenseOperator sx = make_operator(lat, {1}, pauli('X'));
  DenseOperator sy = make_operator(lat, {1}, pauli('Y'));
  DenseOperator c = commutator(sx, sy);
  CHECK((c.mat - 2i * pauli('Z')).cwiseAbs().maxCoeff() < 1e-14);

  DenseOperator P = make_operator(lat, {0, 1}, random_matrix(4));
  DenseOperator Q = make_operator(lat, {1, 2}, random_matrix(4));
  DenseOperator anti = add(commutator(P, Q), commutator(Q, P));
  CHECK(op_norm(anti) < 1e-12);
}

TEST_CASE("pauli strings") {
  Lattice lat = chain(2);
  DenseOperator zz = pauli_string(lat, {0, 1}, "ZZ", -1.0);
  Eigen::VectorXcd diag = zz.mat.diagonal();
  CHECK(diag(0) == std::complex<double>(-1));
  CHECK(diag(1) == std::complex<double>(1));
  CHECK(diag(2) == std::complex<double>(1));
  CHECK(diag(3) == std::complex<double>(-1));
  CHECK(zz.mat.cwiseAbs().sum() == doctest::Approx(4.0));  // diagonal only
}

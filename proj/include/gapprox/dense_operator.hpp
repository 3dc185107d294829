#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "gapprox/lattice.hpp"

namespace gapprox {

/// Complex matrix on the tensor-product space of its support sites.
/// The support is always ascending in the lattice's global site order;
/// site order defines Kronecker order (first site = most significant factor).
struct DenseOperator {
  SiteSet support;
  Eigen::MatrixXcd mat;
  const Lattice* lattice = nullptr;
  bool hermitian = false;

  std::int64_t dim() const { return mat.rows(); }
};

/// Validates the dimension against the support and detects hermiticity.
DenseOperator make_operator(const Lattice& lattice, SiteSet support, Eigen::MatrixXcd mat);

DenseOperator identity_op(const Lattice& lattice, SiteSet support);
DenseOperator zero_op(const Lattice& lattice, SiteSet support);

/// A acting on supp(A), identity on target \ supp(A).
DenseOperator embed(const DenseOperator& A, const SiteSet& target);

/// Embed on the whole lattice.
DenseOperator embed_full(const DenseOperator& A);

/// Unnormalized partial trace over support \ keep.
DenseOperator partial_trace(const DenseOperator& A, const SiteSet& keep);

/// <A>_Y: normalized partial trace over the sites of supp(A) outside Y,
/// equal to the Haar average of U* A U over unitaries on Y^c.
DenseOperator localize(const DenseOperator& A, const SiteSet& Y);

/// Largest singular value (max |eigenvalue| when flagged hermitian).
double op_norm(const DenseOperator& A);

DenseOperator commutator(const DenseOperator& A, const DenseOperator& B);

// arithmetic with auto-embedding to the union support
DenseOperator add(const DenseOperator& A, const DenseOperator& B);
DenseOperator sub(const DenseOperator& A, const DenseOperator& B);
DenseOperator mul(const DenseOperator& A, const DenseOperator& B);
DenseOperator scale(const DenseOperator& A, std::complex<double> c);
DenseOperator shift_identity(const DenseOperator& A, double c);  // A + c*I

// Pauli matrices and strings
Eigen::Matrix2cd pauli(char p);  // 'I','X','Y','Z'

/// coeff * P_1 ... P_k on the given sites (k = chars.size()), canonical order.
DenseOperator pauli_string(const Lattice& lattice, const std::vector<int>& sites,
                           const std::string& chars, double coeff);

/// Basis-state offsets of a sub-support inside a covering support.
std::vector<std::int64_t> sub_offsets(const Lattice& lattice, const SiteSet& subset,
                                      const SiteSet& within);

}  // namespace gapprox

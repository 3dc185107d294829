#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "gapprox/dense_operator.hpp"
#include "gapprox/lattice.hpp"

namespace gapprox {

struct Term {
  SiteSet sites;           // ascending
  Eigen::MatrixXcd op;     // on the tensor space of `sites`
  std::string label;
};

/// Finite family of Hermitian interaction terms with supports.
struct Interaction {
  const Lattice* lattice = nullptr;
  std::vector<Term> terms;
  double range_R = 0;      // declared range
  std::string model_name;
};

struct AssumptionReport {
  double R = 0;            // max term diameter
  double J = 0;            // max term norm
  double C_phi = 0;        // max_x #{terms containing x}
  double N_phi = 0;        // max_x sum_{terms containing x} |support|
  double mu0 = 0;
  double kappa_mu0 = 0;
  double gap_gamma = 0;    // filled by the spectral stage
  bool ground_degenerate = false;
};

/// Nearest-neighbour transverse-field Ising model:
/// -J sz_i sz_j on path-distance-1 bonds, -h sx_i per site. R = 1.
Interaction tfi_model(const Lattice& lattice, double J_coupling, double h_field);

/// XXZ chain with fields:
/// Jxy (sx sx + sy sy) + Jz sz sz on bonds, plus hx sx_i + hz sz_i per site.
Interaction xxz_model(const Lattice& lattice, double Jxy, double Jz, double hx, double hz);

struct TermSpec {
  SiteSet sites;
  // either an explicit matrix or a Pauli string with coefficient
  Eigen::MatrixXcd matrix;          // empty -> use pauli string
  std::string pauli;
  double coeff = 1.0;
  std::string label;
};

Interaction custom_model(const Lattice& lattice, const std::vector<TermSpec>& specs,
                         double declared_R);

AssumptionReport validate_assumptions(const Interaction& interaction, const Lattice& lattice,
                                      double mu0);

/// Sites of X touched by a term whose support also meets V \ X.
SiteSet phi_boundary(const Interaction& interaction, const SiteSet& X);

/// Sum of all terms supported inside W, on the subsystem space of W.
DenseOperator local_hamiltonian(const Interaction& interaction, const SiteSet& W);

/// H_Z^b: sum of all terms whose support meets Z, on the subsystem space of
/// the union of those supports (use embed to place it on a larger region).
DenseOperator boundary_hamiltonian(const Interaction& interaction, const SiteSet& Z);

struct HamiltonianDecomposition {
  DenseOperator H_int_b;  // terms meeting the interior, embedded on V
  DenseOperator H_bd;     // terms inside the border, embedded on V
  DenseOperator H_ext_b;  // terms meeting the exterior, embedded on V
  int terms_int = 0, terms_bd = 0, terms_ext = 0;
};

/// Exact three-way partition of the terms of H_V (requires ell > R).
HamiltonianDecomposition decompose_hamiltonian(const Interaction& interaction,
                                               const RegionDecomposition& decomp);

}  // namespace gapprox

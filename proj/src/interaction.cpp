#include "gapprox/interaction.hpp"

#include <algorithm>
#include <cmath>

#include "gapprox/linalg.hpp"

namespace gapprox {

namespace {

double term_diameter(const Lattice& lat, const SiteSet& sites) {
  double d = 0;
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = i + 1; j < sites.size(); ++j)
      d = std::max(d, lat.distance(sites[i], sites[j]));
  return d;
}

void validate_term(const Lattice& lat, const Term& t, double declared_R) {
  if ((t.op - t.op.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw NonHermitianTerm("interaction term '" + t.label + "' is not Hermitian");
  if (t.op.rows() != lat.hilbert_dim(t.sites))
    throw InvalidDims("term '" + t.label + "' dimension mismatch");
  if (term_diameter(lat, t.sites) > declared_R + 1e-12)
    throw RangeViolation("term '" + t.label + "' exceeds declared range");
}

bool meets(const SiteSet& a, const SiteSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else return true;
  }
  return false;
}

}  // namespace

Interaction tfi_model(const Lattice& lattice, double J_coupling, double h_field) {
  Interaction I;
  I.lattice = &lattice;
  I.range_R = 1;
  I.model_name = "tfi";
  const int n = lattice.num_sites();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (lattice.distance(x, y) <= 1.0) {
        Term t;
        t.sites = {x, y};
        t.op = pauli_string(lattice, {x, y}, "ZZ", -J_coupling).mat;
        t.label = "zz(" + std::to_string(x) + "," + std::to_string(y) + ")";
        I.terms.push_back(std::move(t));
      }
  for (int x = 0; x < n; ++x) {
    Term t;
    t.sites = {x};
    t.op = -h_field * pauli('X');
    t.label = "x(" + std::to_string(x) + ")";
    I.terms.push_back(std::move(t));
  }
  for (const Term& t : I.terms) validate_term(lattice, t, I.range_R);
  return I;
}

Interaction xxz_model(const Lattice& lattice, double Jxy, double Jz, double hx, double hz) {
  Interaction I;
  I.lattice = &lattice;
  I.range_R = 1;
  I.model_name = "xxz";
  const int n = lattice.num_sites();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (lattice.distance(x, y) <= 1.0) {
        Term t;
        t.sites = {x, y};
        t.op = pauli_string(lattice, {x, y}, "XX", Jxy).mat +
               pauli_string(lattice, {x, y}, "YY", Jxy).mat +
               pauli_string(lattice, {x, y}, "ZZ", Jz).mat;
        t.label = "xxz(" + std::to_string(x) + "," + std::to_string(y) + ")";
        I.terms.push_back(std::move(t));
      }
  for (int x = 0; x < n; ++x) {
    Term t;
    t.sites = {x};
    t.op = hx * pauli('X') + hz * pauli('Z');
    t.label = "field(" + std::to_string(x) + ")";
    I.terms.push_back(std::move(t));
  }
  for (const Term& t : I.terms) validate_term(lattice, t, I.range_R);
  return I;
}

Interaction custom_model(const Lattice& lattice, const std::vector<TermSpec>& specs,
                         double declared_R) {
  Interaction I;
  I.lattice = &lattice;
  I.range_R = declared_R;
  I.model_name = "custom";
  int idx = 0;
  for (const TermSpec& s : specs) {
    Term t;
    t.label = s.label.empty() ? "term" + std::to_string(idx) : s.label;
    if (s.matrix.size() > 0) {
      t.sites = s.sites;
      if (!std::is_sorted(t.sites.begin(), t.sites.end()))
        throw InvalidDims("explicit-matrix term sites must be ascending");
      t.op = s.matrix;
    } else {
      DenseOperator p = pauli_string(lattice, s.sites, s.pauli, s.coeff);
      t.sites = p.support;
      t.op = p.mat;
    }
    validate_term(lattice, t, declared_R);
    I.terms.push_back(std::move(t));
    ++idx;
  }
  return I;
}

AssumptionReport validate_assumptions(const Interaction& interaction, const Lattice& lattice,
                                      double mu0) {
  if (mu0 <= 0) throw NonPositiveInput("validate_assumptions requires mu0 > 0");
  AssumptionReport r;
  r.mu0 = mu0;
  r.kappa_mu0 = kappa(lattice, mu0);
  for (const Term& t : interaction.terms) {
    r.R = std::max(r.R, term_diameter(lattice, t.sites));
    DenseOperator op = make_operator(lattice, t.sites, t.op);
    r.J = std::max(r.J, op_norm(op));
  }
  for (int x = 0; x < lattice.num_sites(); ++x) {
    double c = 0, nph = 0;
    for (const Term& t : interaction.terms)
      if (std::binary_search(t.sites.begin(), t.sites.end(), x)) {
        c += 1;
        nph += static_cast<double>(t.sites.size());
      }
    r.C_phi = std::max(r.C_phi, c);
    r.N_phi = std::max(r.N_phi, nph);
  }
  return r;
}

SiteSet phi_boundary(const Interaction& interaction, const SiteSet& X) {
  const SiteSet comp = interaction.lattice->complement(X);
  SiteSet out;
  for (int x : X) {
    for (const Term& t : interaction.terms) {
      if (!std::binary_search(t.sites.begin(), t.sites.end(), x)) continue;
      if (meets(t.sites, comp)) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

DenseOperator local_hamiltonian(const Interaction& interaction, const SiteSet& W) {
  const Lattice& lat = *interaction.lattice;
  DenseOperator H = zero_op(lat, W);
  for (const Term& t : interaction.terms) {
    if (!is_subset(t.sites, W)) continue;
    H = add(H, embed(make_operator(lat, t.sites, t.op), W));
  }
  H.hermitian = true;
  return H;
}

DenseOperator boundary_hamiltonian(const Interaction& interaction, const SiteSet& Z) {
  const Lattice& lat = *interaction.lattice;
  SiteSet supp = Z;
  for (const Term& t : interaction.terms)
    if (meets(t.sites, Z)) supp = set_union(supp, t.sites);
  DenseOperator H = zero_op(lat, supp);
  for (const Term& t : interaction.terms)
    if (meets(t.sites, Z)) H = add(H, embed(make_operator(lat, t.sites, t.op), supp));
  H.hermitian = true;
  return H;
}

HamiltonianDecomposition decompose_hamiltonian(const Interaction& interaction,
                                               const RegionDecomposition& decomp) {
  const Lattice& lat = *interaction.lattice;
  const SiteSet V = lat.all_sites();
  HamiltonianDecomposition out;
  out.H_int_b = zero_op(lat, V);
  out.H_bd = zero_op(lat, V);
  out.H_ext_b = zero_op(lat, V);
  for (const Term& t : interaction.terms) {
    const bool in_int = meets(t.sites, decomp.interior);
    const bool in_ext = meets(t.sites, decomp.exterior);
    if (in_int && in_ext)
      throw DecompositionMismatch("term meets both interior and exterior (ell <= R?)");
    DenseOperator op = embed(make_operator(lat, t.sites, t.op), V);
    if (in_int) {
      out.H_int_b.mat += op.mat;
      ++out.terms_int;
    } else if (in_ext) {
      out.H_ext_b.mat += op.mat;
      ++out.terms_ext;
    } else {
      if (!is_subset(t.sites, decomp.border))
        throw DecompositionMismatch("residual term not contained in the border");
      out.H_bd.mat += op.mat;
      ++out.terms_bd;
    }
  }
  out.H_int_b.hermitian = out.H_bd.hermitian = out.H_ext_b.hermitian = true;

  // cross-check against the direct definitions
  DenseOperator direct_int = embed(boundary_hamiltonian(interaction, decomp.interior), V);
  DenseOperator direct_ext = embed(boundary_hamiltonian(interaction, decomp.exterior), V);
  DenseOperator direct_bd = embed(local_hamiltonian(interaction, decomp.border), V);
  DenseOperator H_V = embed(local_hamiltonian(interaction, V), V);
  const double mismatch =
      std::max({(out.H_int_b.mat - direct_int.mat).cwiseAbs().maxCoeff(),
                (out.H_ext_b.mat - direct_ext.mat).cwiseAbs().maxCoeff(),
                (out.H_bd.mat - direct_bd.mat).cwiseAbs().maxCoeff(),
                (out.H_int_b.mat + out.H_bd.mat + out.H_ext_b.mat - H_V.mat)
                    .cwiseAbs()
                    .maxCoeff()});
  if (mismatch > 1e-10)
    throw DecompositionMismatch("Hamiltonian pieces do not reproduce H_V");
  return out;
}

}  // namespace gapprox

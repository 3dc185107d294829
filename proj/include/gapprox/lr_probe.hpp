#pragma once

#include "gapprox/interaction.hpp"
#include "gapprox/spectral.hpp"

namespace gapprox {

/// Commutator light-cone data: norms(p, k) = ||[tau_{t_k}(A_p), B_p]|| for
/// probe pairs with disjoint supports.
struct LightConeProfile {
  struct Pair {
    SiteSet A_support, B_support;
    double distance = 0;
    double boundary_weight = 1;  // min(|dPhi A|, |dPhi B|) for the envelope
  };
  std::vector<Pair> probe_pairs;
  Eigen::VectorXd times;
  Eigen::MatrixXd norms;  // one row per pair
  double mu = 0;
};

/// Exact full-space Heisenberg evolution of A against a fixed B; appends one
/// row to the profile. Probes must be normalized (||A|| = ||B|| = 1) and
/// disjoint. Pass a precomputed spectral decomposition of H_V to amortize the
/// diagonalization across pairs.
void commutator_profile(const Interaction& interaction, const Lattice& lattice,
                        const DenseOperator& A, const DenseOperator& B,
                        const Eigen::VectorXd& times, LightConeProfile& profile,
                        const SpectralData* hv_spectral = nullptr);

/// Single-site sigma-z pairs (site 0 against every site at distance >= 2).
LightConeProfile default_profile(const Interaction& interaction, const Lattice& lattice,
                                 const Eigen::VectorXd& times, double mu);

struct VelocityFit {
  double c = 0, v = 0;
  bool degenerate = false;   // all-zero profile
  int excluded_points = 0;   // saturated or numerically zero entries
  int used_points = 0;
  double max_violation = 0;  // certification residual (<= 0 when the bound holds)
};

/// Smallest envelope norms <= c * w * exp(-mu (d - v t)) over the
/// sub-saturation data (norm < ||A|| ||B||), via the upper convex hull of
/// (mu t, log(norm/w) + mu d); the hull edge with minimal mean slack gives v,
/// and c follows in closed form. The returned parameters are re-certified
/// against every data point.
VelocityFit fit_velocity(const LightConeProfile& profile, double mu);

}  // namespace gapprox

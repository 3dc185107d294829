#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gapprox/errors.hpp"

namespace gapprox {

/// Ascending list of global site ids.
using SiteSet = std::vector<int>;

enum class MetricKind { euclidean, graph_path };

struct LatticeSpec {
  std::vector<int> dims;                 // rectangular extents, row-major site order
  MetricKind metric = MetricKind::graph_path;
  std::vector<int> local_dims;           // one entry per site, or a single broadcast entry; empty -> qubits
  int site_cap = 16;
};

/// Finite metric set of sites, each carrying a local Hilbert-space dimension.
/// Site ordering is fixed at construction and defines the canonical tensor order.
class Lattice {
 public:
  static Lattice build(const LatticeSpec& spec);

  /// |V| x |V| distance matrix, validated as a metric.
  static Lattice from_distance_matrix(const Eigen::MatrixXd& dist, std::vector<int> local_dims,
                                      int site_cap = 64);

  int num_sites() const { return static_cast<int>(local_dims_.size()); }
  int local_dim(int x) const { return local_dims_[x]; }
  double distance(int x, int y) const { return dist_(x, y); }
  const Eigen::MatrixXd& distances() const { return dist_; }
  const std::vector<std::vector<int>>& positions() const { return positions_; }

  std::int64_t hilbert_dim(const SiteSet& sites) const;
  SiteSet all_sites() const;
  SiteSet complement(const SiteSet& X) const;

 private:
  Lattice() = default;
  void validate_metric() const;

  std::vector<int> local_dims_;
  std::vector<std::vector<int>> positions_;  // empty for distance-matrix lattices
  Eigen::MatrixXd dist_;
};

/// max_x sum_y exp(-mu d(x,y))
double kappa(const Lattice& lattice, double mu);

/// {x in X : exists y in V\X with d(x,y) <= R}
SiteSet r_boundary(const Lattice& lattice, const SiteSet& X, double R);

struct RegionDecomposition {
  SiteSet region_X;
  double ell = 0;
  SiteSet boundary_X;  // R-boundary of X
  SiteSet interior;    // d(., boundary_X) >= ell, inside X
  SiteSet border;      // d(., boundary_X) < ell
  SiteSet exterior;    // d(., boundary_X) >= ell, outside X
  SiteSet border2;     // border at 2*ell
  SiteSet border3;     // border at 3*ell
  bool degenerate = false;  // interior or exterior empty
};

RegionDecomposition decompose_region(const Lattice& lattice, const SiteSet& X, double ell,
                                     double R);

/// Smallest C with max{|bd(interior)|, |border|, |bd(exterior)|} <= C * ell * |bd(X)|.
double structural_constant(const Lattice& lattice, const RegionDecomposition& decomp, double R);

// set helpers (inputs and outputs ascending)
SiteSet set_union(const SiteSet& a, const SiteSet& b);
SiteSet set_intersection(const SiteSet& a, const SiteSet& b);
SiteSet set_difference(const SiteSet& a, const SiteSet& b);
bool is_subset(const SiteSet& a, const SiteSet& b);

}  // namespace gapprox

#include "gapprox/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace gapprox {

SiteSet set_union(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SiteSet set_intersection(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SiteSet set_difference(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const SiteSet& a, const SiteSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Lattice Lattice::build(const LatticeSpec& spec) {
  if (spec.dims.empty()) throw InvalidDims("lattice dimension list is empty");
  std::int64_t n = 1;
  for (int d : spec.dims) {
    if (d < 1) throw InvalidDims("lattice extent must be >= 1");
    n *= d;
  }
  if (n > spec.site_cap)
    throw SiteCapExceeded("lattice has " + std::to_string(n) + " sites, cap is " +
                          std::to_string(spec.site_cap));

  Lattice lat;
  const int nd = static_cast<int>(spec.dims.size());
  lat.positions_.reserve(n);
  std::vector<int> pos(nd, 0);
  for (std::int64_t i = 0; i < n; ++i) {
    lat.positions_.push_back(pos);
    for (int k = nd - 1; k >= 0; --k) {  // row-major ordering
      if (++pos[k] < spec.dims[k]) break;
      pos[k] = 0;
    }
  }

  if (spec.local_dims.empty()) {
    lat.local_dims_.assign(n, 2);
  } else if (spec.local_dims.size() == 1) {
    lat.local_dims_.assign(n, spec.local_dims[0]);
  } else if (static_cast<std::int64_t>(spec.local_dims.size()) == n) {
    lat.local_dims_ = spec.local_dims;
  } else {
    throw InvalidDims("local_dims must have 1 or |V| entries");
  }
  for (int d : lat.local_dims_)
    if (d < 2) throw InvalidDims("local Hilbert dimensions must be >= 2");

  lat.dist_.resize(n, n);
  if (spec.metric == MetricKind::euclidean) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        double s = 0;
        for (int k = 0; k < nd; ++k) {
          double dd = lat.positions_[x][k] - lat.positions_[y][k];
          s += dd * dd;
        }
        lat.dist_(x, y) = std::sqrt(s);
      }
  } else {
    // BFS shortest path over orthogonal nearest neighbours; distances are integers
    std::vector<std::vector<int>> adj(n);
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        int diff = 0;
        for (int k = 0; k < nd; ++k)
          diff += std::abs(lat.positions_[x][k] - lat.positions_[y][k]);
        if (diff == 1) {
          adj[x].push_back(y);
          adj[y].push_back(x);
        }
      }
    for (int s = 0; s < n; ++s) {
      std::vector<double> d(n, -1);
      std::queue<int> q;
      d[s] = 0;
      q.push(s);
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : adj[u])
          if (d[w] < 0) {
            d[w] = d[u] + 1;
            q.push(w);
          }
      }
      for (int y = 0; y < n; ++y) {
        if (d[y] < 0) throw InvalidMetric("graph-path lattice is disconnected");
        lat.dist_(s, y) = d[y];
      }
    }
  }
  lat.validate_metric();
  return lat;
}

Lattice Lattice::from_distance_matrix(const Eigen::MatrixXd& dist, std::vector<int> local_dims,
                                      int site_cap) {
  if (dist.rows() != dist.cols()) throw InvalidMetric("distance matrix must be square");
  const std::int64_t n = dist.rows();
  if (n == 0) throw InvalidDims("distance matrix is empty");
  if (n > site_cap) throw SiteCapExceeded("distance matrix exceeds site cap");
  Lattice lat;
  lat.dist_ = dist;
  if (local_dims.empty()) local_dims.assign(n, 2);
  if (local_dims.size() == 1) local_dims.assign(n, local_dims[0]);
  if (static_cast<std::int64_t>(local_dims.size()) != n)
    throw InvalidDims("local_dims must have 1 or |V| entries");
  for (int d : local_dims)
    if (d < 2) throw InvalidDims("local Hilbert dimensions must be >= 2");
  lat.local_dims_ = std::move(local_dims);
  lat.validate_metric();
  return lat;
}

void Lattice::validate_metric() const {
  const int n = num_sites();
  if (n > 64) return;  // exhaustive check only at desk scale
  for (int x = 0; x < n; ++x) {
    if (dist_(x, x) != 0) throw InvalidMetric("nonzero diagonal distance");
    for (int y = 0; y < n; ++y) {
      if (x != y && dist_(x, y) <= 0) throw InvalidMetric("non-positive off-diagonal distance");
      if (dist_(x, y) != dist_(y, x)) throw InvalidMetric("asymmetric distance");
      for (int z = 0; z < n; ++z)
        if (dist_(x, z) > dist_(x, y) + dist_(y, z) + 1e-12)
          throw InvalidMetric("triangle inequality violated");
    }
  }
}

std::int64_t Lattice::hilbert_dim(const SiteSet& sites) const {
  std::int64_t d = 1;
  for (int x : sites) d *= local_dims_[x];
  return d;
}

SiteSet Lattice::all_sites() const {
  SiteSet s(num_sites());
  for (int i = 0; i < num_sites(); ++i) s[i] = i;
  return s;
}

SiteSet Lattice::complement(const SiteSet& X) const { return set_difference(all_sites(), X); }

double kappa(const Lattice& lattice, double mu) {
  if (mu <= 0) throw NonPositiveInput("kappa requires mu > 0");
  double best = 0;
  for (int x = 0; x < lattice.num_sites(); ++x) {
    double s = 0;
    for (int y = 0; y < lattice.num_sites(); ++y) s += std::exp(-mu * lattice.distance(x, y));
    best = std::max(best, s);
  }
  return best;
}

SiteSet r_boundary(const Lattice& lattice, const SiteSet& X, double R) {
  if (X.empty()) throw EmptyRegion("r_boundary of empty region");
  const SiteSet comp = lattice.complement(X);
  SiteSet bd;
  for (int x : X)
    for (int y : comp)
      if (lattice.distance(x, y) <= R) {
        bd.push_back(x);
        break;
      }
  return bd;  // empty when X = V
}

RegionDecomposition decompose_region(const Lattice& lattice, const SiteSet& X, double ell,
                                     double R) {
  if (ell <= R) throw PreconditionViolated("decompose_region requires ell > R");
  RegionDecomposition d;
  d.region_X = X;
  d.ell = ell;
  d.boundary_X = r_boundary(lattice, X, R);
  if (d.boundary_X.empty()) throw EmptyRegion("region has empty R-boundary (X = V?)");

  auto dist_to_bd = [&](int x) {
    double m = std::numeric_limits<double>::infinity();
    for (int y : d.boundary_X) m = std::min(m, lattice.distance(x, y));
    return m;
  };
  const SiteSet comp = lattice.complement(X);
  for (int x : X)
    if (dist_to_bd(x) >= ell) d.interior.push_back(x);
  for (int x : comp)
    if (dist_to_bd(x) >= ell) d.exterior.push_back(x);
  for (int x = 0; x < lattice.num_sites(); ++x) {
    double dx = dist_to_bd(x);
    if (dx < ell) d.border.push_back(x);
    if (dx < 2 * ell) d.border2.push_back(x);
    if (dx < 3 * ell) d.border3.push_back(x);
  }
  d.degenerate = d.interior.empty() || d.exterior.empty();
  return d;
}

double structural_constant(const Lattice& lattice, const RegionDecomposition& decomp, double R) {
  if (decomp.boundary_X.empty()) throw DivisionByZero("structural_constant with empty boundary");
  auto bd_size = [&](const SiteSet& S) -> std::size_t {
    if (S.empty()) return 0;
    return r_boundary(lattice, S, R).size();
  };
  const double num = static_cast<double>(std::max(
      {bd_size(decomp.interior), decomp.border.size(), bd_size(decomp.exterior)}));
  return num / (decomp.ell * static_cast<double>(decomp.boundary_X.size()));
}

}  // namespace gapprox

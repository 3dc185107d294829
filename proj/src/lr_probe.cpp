#include "gapprox/lr_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace gapprox {

using namespace std::complex_literals;

namespace {

double set_distance(const Lattice& lat, const SiteSet& a, const SiteSet& b) {
  double d = std::numeric_limits<double>::infinity();
  for (int x : a)
    for (int y : b) d = std::min(d, lat.distance(x, y));
  return d;
}

}  // namespace

void commutator_profile(const Interaction& interaction, const Lattice& lattice,
                        const DenseOperator& A, const DenseOperator& B,
                        const Eigen::VectorXd& times, LightConeProfile& profile,
                        const SpectralData* hv_spectral) {
  if (!set_intersection(A.support, B.support).empty())
    throw OverlappingSupports("probe operators must have disjoint supports");
  if (std::abs(op_norm(A) - 1) > 1e-9 || std::abs(op_norm(B) - 1) > 1e-9)
    throw PreconditionViolated("probe operators must be normalized");
  if (profile.times.size() == 0) profile.times = times;
  else if (profile.times != times)
    throw PreconditionViolated("all profile rows must share the time grid");

  SpectralData local_spec;
  if (!hv_spectral) {
    local_spec = eigendecompose(embed_full(local_hamiltonian(interaction, lattice.all_sites())));
    hv_spectral = &local_spec;
  }
  const Eigen::MatrixXcd& Q = hv_spectral->eigenvectors;
  const Eigen::VectorXd& lam = hv_spectral->eigenvalues;
  const Eigen::MatrixXcd Ae = Q.adjoint() * embed_full(A).mat * Q;
  const Eigen::MatrixXcd Be = Q.adjoint() * embed_full(B).mat * Q;
  const bool herm = A.hermitian && B.hermitian;

  Eigen::VectorXd row(times.size());
  Eigen::MatrixXcd At(Ae.rows(), Ae.cols());
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    const double t = times(k);
    for (Eigen::Index j = 0; j < Ae.cols(); ++j)
      for (Eigen::Index i = 0; i < Ae.rows(); ++i)
        At(i, j) = Ae(i, j) * std::exp(1i * ((lam(i) - lam(j)) * t));
    Eigen::MatrixXcd C = At * Be - Be * At;
    if (herm) {
      // [A(t), B] is anti-Hermitian for Hermitian probes
      Eigen::VectorXd w = eigvals_hermitian(1i * C);
      row(k) = std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
    } else {
      row(k) = spectral_norm(C);
    }
  }

  LightConeProfile::Pair p;
  p.A_support = A.support;
  p.B_support = B.support;
  p.distance = set_distance(lattice, A.support, B.support);
  p.boundary_weight =
      std::min<double>(phi_boundary(interaction, A.support).size(),
                       phi_boundary(interaction, B.support).size());
  if (p.boundary_weight == 0) p.boundary_weight = 1;
  profile.probe_pairs.push_back(std::move(p));
  profile.norms.conservativeResize(profile.probe_pairs.size(), times.size());
  profile.norms.row(profile.probe_pairs.size() - 1) = row;
}

LightConeProfile default_profile(const Interaction& interaction, const Lattice& lattice,
                                 const Eigen::VectorXd& times, double mu) {
  LightConeProfile prof;
  prof.mu = mu;
  SpectralData spec =
      eigendecompose(embed_full(local_hamiltonian(interaction, lattice.all_sites())));
  DenseOperator A = pauli_string(lattice, {0}, "Z", 1.0);
  for (int y = 1; y < lattice.num_sites(); ++y) {
    if (lattice.distance(0, y) < 2) continue;
    DenseOperator B = pauli_string(lattice, {y}, "Z", 1.0);
    commutator_profile(interaction, lattice, A, B, times, prof, &spec);
  }
  return prof;
}

VelocityFit fit_velocity(const LightConeProfile& profile, double mu) {
  if (mu <= 0) throw NonPositiveInput("fit_velocity requires mu > 0");
  VelocityFit fit;
  if (profile.norms.size() == 0) throw InsufficientData("empty profile");

  struct Pt {
    double x, y;       // (mu t, log(norm / w) + mu d)
    double t, d, w, n; // original entry for certification
  };
  std::vector<Pt> pts;
  std::vector<Pt> saturated;
  std::set<double> dists, ts;
  double max_norm = 0;
  for (std::size_t p = 0; p < profile.probe_pairs.size(); ++p) {
    const auto& pr = profile.probe_pairs[p];
    for (Eigen::Index k = 0; k < profile.times.size(); ++k) {
      const double n = profile.norms(p, k);
      max_norm = std::max(max_norm, n);
      if (n < 1e-12) continue;  // numerically zero; bound holds trivially
      Pt q{mu * profile.times(k), std::log(n / pr.boundary_weight) + mu * pr.distance,
           profile.times(k), pr.distance, pr.boundary_weight, n};
      if (n >= 1.0) {  // half the trivial bound 2 ||A|| ||B||
        saturated.push_back(q);
        ++fit.excluded_points;
        continue;
      }
      pts.push_back(q);
      dists.insert(pr.distance);
      ts.insert(profile.times(k));
    }
  }
  if (max_norm <= 1e-12) {
    fit.degenerate = true;
    return fit;
  }
  if (dists.size() < 3 || ts.size() < 5)
    throw InsufficientData("need >= 3 distances and >= 5 times below saturation");
  fit.used_points = static_cast<int>(pts.size());

  // upper convex hull of (x, y); each hull edge is a supporting line
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    return a.x != b.x ? a.x < b.x : a.y > b.y;
  });
  std::vector<const Pt*> hull;
  for (const Pt& q : pts) {
    if (!hull.empty() && hull.back()->x == q.x) continue;  // keep the max-y duplicate
    while (hull.size() >= 2) {
      const Pt* a = hull[hull.size() - 2];
      const Pt* b = hull[hull.size() - 1];
      // drop b when it lies on or below segment a-q
      if ((b->y - a->y) * (q.x - a->x) <= (q.y - a->y) * (b->x - a->x)) hull.pop_back();
      else break;
    }
    hull.push_back(&q);
  }
  if (hull.size() < 2) throw InsufficientData("profile collapses to a single abscissa");

  double best_slack = std::numeric_limits<double>::infinity();
  double best_v = 0, best_b = 0;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const double v = (hull[e + 1]->y - hull[e]->y) / (hull[e + 1]->x - hull[e]->x);
    const double b = hull[e]->y - v * hull[e]->x;
    double slack = 0;
    for (const Pt& q : pts) slack += b + v * q.x - q.y;
    slack /= static_cast<double>(pts.size());
    if (slack < best_slack) {
      best_slack = slack;
      best_v = v;
      best_b = b;
    }
  }
  if (best_v < 0) {  // profile decays in time; flat envelope suffices
    best_v = 0;
    best_b = -std::numeric_limits<double>::infinity();
    for (const Pt& q : pts) best_b = std::max(best_b, q.y);
  }
  fit.v = best_v;
  fit.c = std::exp(best_b);
  // lift c so the envelope also clears the saturated entries
  for (const Pt& q : saturated)
    fit.c = std::max(fit.c, q.n / (q.w * std::exp(-mu * (q.d - fit.v * q.t))));
  // independent certification over every retained entry
  auto all = pts;
  all.insert(all.end(), saturated.begin(), saturated.end());
  fit.max_violation = -std::numeric_limits<double>::infinity();
  for (const Pt& q : all)
    fit.max_violation =
        std::max(fit.max_violation, q.n - fit.c * q.w * std::exp(-mu * (q.d - fit.v * q.t)));
  return fit;
}

}  // namespace gapprox

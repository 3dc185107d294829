#include "gapprox/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gapprox {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

using nlohmann::ordered_json;

// raw token so JSON numbers carry exactly the CSV precision
void put_real(ordered_json& j, const char* key, double x) {
  j[key] = ordered_json::parse(std::isfinite(x) ? format_real(x) : "null");
}

ordered_json report_json(const ApproximationReport& r) {
  ordered_json j;
  put_real(j, "ell", r.param.ell);
  put_real(j, "alpha", r.param.alpha);
  put_real(j, "epsilon", r.param.epsilon);
  put_real(j, "xi", r.param.xi);
  put_real(j, "delta", r.param.delta);
  put_real(j, "gap", r.gap);
  put_real(j, "err_theorem", r.err_theorem);
  put_real(j, "err_corollary", r.err_corollary);
  put_real(j, "norm_H_minus_M", r.norm_H_minus_M);
  put_real(j, "norm_MX_psi0", r.norm_MX_psi0);
  put_real(j, "norm_Mbd_psi0", r.norm_Mbd_psi0);
  put_real(j, "norm_MXc_psi0", r.norm_MXc_psi0);
  put_real(j, "norm_Palpha_minus_P0", r.norm_Palpha_minus_P0);
  j["rank_PX"] = r.rank_PX;
  j["rank_PXc"] = r.rank_PXc;
  j["degenerate_geometry_flag"] = r.degenerate_geometry ? 1 : 0;
  j["quad_nodes"] = r.quad_nodes;
  put_real(j, "runtime_s", r.runtime_s);
  // extras beyond the CSV schema
  put_real(j, "mu", r.param.mu);
  put_real(j, "v", r.param.v);
  put_real(j, "mu0", r.mu0);
  put_real(j, "kappa_mu0", r.kappa_mu0);
  put_real(j, "J", r.J);
  put_real(j, "C_phi", r.C_phi);
  put_real(j, "N_phi", r.N_phi);
  put_real(j, "structural_C", r.structural_C);
  put_real(j, "ground_energy", r.ground_energy);
  j["size_boundary"] = r.size_boundary;
  j["size_interior"] = r.size_interior;
  j["size_border"] = r.size_border;
  j["size_exterior"] = r.size_exterior;
  put_real(j, "norm_Ptilde_minus_P0", r.norm_Ptilde_minus_P0);
  put_real(j, "norm_Phat_minus_Pbd", r.norm_Phat_minus_Pbd);
  put_real(j, "norm_Pbd", r.norm_Pbd);
  put_real(j, "norm_smear_minus_M_X", r.norm_smear_minus_M_X);
  put_real(j, "norm_smear_minus_M_bd", r.norm_smear_minus_M_bd);
  put_real(j, "norm_smear_minus_M_Xc", r.norm_smear_minus_M_Xc);
  put_real(j, "corollary_min_eigenvalue", r.corollary_min_eigenvalue);
  put_real(j, "quad_doubling_delta", r.quad_doubling_delta);
  j["threshold_tie"] = r.threshold_tie;
  ordered_json checks = ordered_json::array();
  for (const BoundCheck& b : r.bound_checks) {
    ordered_json c;
    c["name"] = b.name;
    put_real(c, "lhs", b.lhs);
    put_real(c, "rhs", b.rhs);
    c["holds"] = b.holds;
    checks.push_back(std::move(c));
  }
  j["bound_checks"] = std::move(checks);
  j["all_explicit_bounds_hold"] = r.all_explicit_bounds_hold();
  return j;
}

}  // namespace

std::string report_to_json(const ApproximationReport& report) {
  return report_json(report).dump(2) + "\n";
}

void write_sweep_csv(const std::vector<ApproximationReport>& reports, std::ostream& out) {
  out << "ell,alpha,epsilon,xi,delta,gap,err_theorem,err_corollary,norm_H_minus_M,"
         "norm_MX_psi0,norm_Mbd_psi0,norm_MXc_psi0,norm_Palpha_minus_P0,rank_PX,rank_PXc,"
         "degenerate_geometry_flag,quad_nodes,runtime_s\n";
  for (const ApproximationReport& r : reports) {
    out << format_real(r.param.ell) << ',' << format_real(r.param.alpha) << ','
        << format_real(r.param.epsilon) << ',' << format_real(r.param.xi) << ','
        << format_real(r.param.delta) << ',' << format_real(r.gap) << ','
        << format_real(r.err_theorem) << ',' << format_real(r.err_corollary) << ','
        << format_real(r.norm_H_minus_M) << ',' << format_real(r.norm_MX_psi0) << ','
        << format_real(r.norm_Mbd_psi0) << ',' << format_real(r.norm_MXc_psi0) << ','
        << format_real(r.norm_Palpha_minus_P0) << ',' << r.rank_PX << ',' << r.rank_PXc << ','
        << (r.degenerate_geometry ? 1 : 0) << ',' << r.quad_nodes << ','
        << format_real(r.runtime_s) << '\n';
  }
}

SweepSummary summarize_sweep(const std::vector<ApproximationReport>& reports) {
  SweepSummary s;
  std::vector<double> xs, ys;
  for (const ApproximationReport& r : reports) {
    if (r.degenerate_geometry) {
      ++s.excluded_points;
      continue;
    }
    xs.push_back(r.param.ell);
    ys.push_back(r.err_theorem);
    s.xi = r.param.xi;  // largest usable ell wins (reports are in ell order)
  }
  s.used_points = static_cast<int>(xs.size());
  if (s.used_points < 3)
    throw InsufficientLadder("sweep needs >= 3 non-degenerate ell points, got " +
                             std::to_string(s.used_points));
  s.predicted_rate = 1.0 / (2 * s.xi);
  const bool all_tiny =
      std::all_of(ys.begin(), ys.end(), [](double e) { return e <= 1e-8; });
  if (all_tiny) {
    s.slope_applicable = false;
    return s;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += std::log(ys[i]);
  }
  mx /= xs.size();
  my /= xs.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (std::log(ys[i]) - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  s.slope = num / den;
  return s;
}

std::string sweep_summary_to_json(const SweepSummary& s) {
  ordered_json j;
  if (s.slope_applicable) put_real(j, "slope", s.slope);
  else j["slope"] = "not-applicable";
  j["slope_applicable"] = s.slope_applicable;
  put_real(j, "xi", s.xi);
  put_real(j, "predicted_rate", s.predicted_rate);
  j["used_points"] = s.used_points;
  j["excluded_points"] = s.excluded_points;
  return j.dump(2) + "\n";
}

void dump_operator(const DenseOperator& op, const std::string& path) {
  ordered_json header;
  header["support"] = op.support;
  header["rows"] = op.mat.rows();
  header["cols"] = op.mat.cols();
  header["hermitian"] = op.hermitian;
  std::ofstream out(path, std::ios::binary);
  out << header.dump() << '\n';
  // little-endian interleaved re/im doubles, row-major
  for (Eigen::Index i = 0; i < op.mat.rows(); ++i)
    for (Eigen::Index k = 0; k < op.mat.cols(); ++k) {
      const double re = op.mat(i, k).real();
      const double im = op.mat(i, k).imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof re);
      out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
}

void write_spectrum_csv(const Eigen::VectorXd& eigenvalues, std::ostream& out) {
  out << "index,eigenvalue\n";
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    out << k << ',' << format_real(eigenvalues(k)) << '\n';
}

void write_profile_csv(const LightConeProfile& profile, std::ostream& out) {
  out << "pair_id,distance,t,norm\n";
  for (std::size_t p = 0; p < profile.probe_pairs.size(); ++p)
    for (Eigen::Index k = 0; k < profile.times.size(); ++k)
      out << p << ',' << format_real(profile.probe_pairs[p].distance) << ','
          << format_real(profile.times(k)) << ',' << format_real(profile.norms(p, k)) << '\n';
}

std::string fit_to_json(const VelocityFit& fit, double mu) {
  ordered_json j;
  put_real(j, "mu", mu);
  put_real(j, "c", fit.c);
  put_real(j, "v", fit.v);
  j["degenerate"] = fit.degenerate;
  j["excluded_points"] = fit.excluded_points;
  j["used_points"] = fit.used_points;
  put_real(j, "max_violation", fit.max_violation);
  return j.dump(2) + "\n";
}

}  // namespace gapprox

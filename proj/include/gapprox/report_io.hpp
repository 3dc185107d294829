#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gapprox/lr_probe.hpp"
#include "gapprox/pipeline.hpp"

namespace gapprox {

/// Shortest decimal form with 17 significant digits (round-trips a double).
std::string format_real(double x);

/// Full per-(X, ell) report as a JSON object (keys are a superset of the
/// sweep CSV columns, printed at the same precision so rows round-trip).
std::string report_to_json(const ApproximationReport& report);

/// Sweep CSV: header plus one row per report, LF line endings.
void write_sweep_csv(const std::vector<ApproximationReport>& reports, std::ostream& out);

struct SweepSummary {
  double slope = 0;            // least-squares slope of log err_theorem vs ell
  bool slope_applicable = true;  // false when all errors are below 1e-8
  double xi = 0;
  double predicted_rate = 0;   // 1 / (2 xi) at the largest ell
  int used_points = 0;
  int excluded_points = 0;     // geometry-degenerate rows
};

/// Regression over non-degenerate rows; throws InsufficientLadder below 3
/// usable points.
SweepSummary summarize_sweep(const std::vector<ApproximationReport>& reports);

std::string sweep_summary_to_json(const SweepSummary& s);

/// One-line JSON header (support, dims, hermitian flag) followed by
/// little-endian interleaved re/im doubles, row-major.
void dump_operator(const DenseOperator& op, const std::string& path);

/// (index, eigenvalue) rows.
void write_spectrum_csv(const Eigen::VectorXd& eigenvalues, std::ostream& out);

/// (pair_id, distance, t, norm) rows.
void write_profile_csv(const LightConeProfile& profile, std::ostream& out);

std::string fit_to_json(const VelocityFit& fit, double mu);

}  // namespace gapprox

#pragma once

#include <string>
#include <vector>

#include "gapprox/interaction.hpp"
#include "gapprox/lattice.hpp"

namespace gapprox {

struct QuadratureSpec {
  int initial_nodes = 64;
  double tol = 1e-8;
};

struct ToleranceSpec {
  double gap_degeneracy = 1e-8;
  double identity_check = 1e-10;
};

struct OutputSpec {
  std::string dir = ".";
  std::vector<std::string> formats = {"json", "csv"};
};

struct ModelSpec {
  std::string type;  // "tfi" | "xxz" | "custom"
  double J = 1, h = 1;                  // tfi
  double Jxy = 0, Jz = 0, hx = 0, hz = 0;  // xxz
  std::vector<TermSpec> terms;          // custom
  double range_R = 1;
};

/// Parsed "gapprox/1" experiment configuration.
struct ExperimentConfig {
  LatticeSpec lattice;
  std::string distance_csv;  // non-empty -> explicit metric loaded from CSV
  ModelSpec model;
  SiteSet region_X;
  std::vector<double> ell_values;  // strictly increasing, all > range_R
  double mu0 = 1.0;
  double mu = 0;
  bool mu_auto = true;  // mu = 2 mu0
  double v = 1.0;
  bool v_fit = true;  // fit v with the light-cone probe
  std::vector<double> lr_times;  // empty -> default grid
  double lr_mu = 0;              // <= 0 -> 2 mu0
  QuadratureSpec quadrature;
  ToleranceSpec tolerances;
  OutputSpec output;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// |V| x |V| metric loaded from comma-separated rows.
Eigen::MatrixXd load_distance_csv(const std::string& path);

Lattice build_lattice(const ExperimentConfig& config);
Interaction build_model(const ExperimentConfig& config, const Lattice& lattice);

}  // namespace gapprox

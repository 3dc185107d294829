#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gapprox/config.hpp"
#include "gapprox/lr_probe.hpp"
#include "gapprox/pipeline.hpp"
#include "gapprox/report_io.hpp"

namespace fs = std::filesystem;
using namespace gapprox;

namespace {

struct CliArgs {
  std::string config_path;
  double ell = 0;
  int jobs = 1;
  bool dump_operators = false;
  double mu_override = 0;
  std::string out_dir;
};

Eigen::VectorXd lr_time_grid(const ExperimentConfig& cfg) {
  if (!cfg.lr_times.empty())
    return Eigen::Map<const Eigen::VectorXd>(cfg.lr_times.data(), cfg.lr_times.size());
  Eigen::VectorXd t(10);
  for (int k = 0; k < 10; ++k) t(k) = 0.2 * (k + 1);
  return t;
}

double resolve_mu(const ExperimentConfig& cfg, const CliArgs& args) {
  double mu = args.mu_override > 0 ? args.mu_override
              : cfg.mu_auto        ? 2 * cfg.mu0
                                   : cfg.mu;
  if (mu < 2 * cfg.mu0)
    std::cerr << "warning: mu = " << mu << " below 2*mu0 = " << 2 * cfg.mu0
              << "; proceeding anyway\n";
  return mu;
}

/// Fitted velocity when the config asks for it, else the configured value.
double resolve_v(const ExperimentConfig& cfg, const Interaction& model, const Lattice& lat,
                 double mu) {
  if (!cfg.v_fit) return cfg.v;
  LightConeProfile prof = default_profile(model, lat, lr_time_grid(cfg), mu);
  VelocityFit fit = fit_velocity(prof, mu);
  if (fit.degenerate || fit.v <= 0) {
    std::cerr << "warning: velocity fit degenerate; falling back to v = 1\n";
    return 1.0;
  }
  return fit.v;
}

PipelineOptions pipeline_options(const ExperimentConfig& cfg, double mu, double v) {
  PipelineOptions opt;
  opt.mu0 = cfg.mu0;
  opt.mu = mu;
  opt.v = v;
  opt.quad_nodes = cfg.quadrature.initial_nodes;
  opt.quad_tol = cfg.quadrature.tol;
  opt.degeneracy_tol = cfg.tolerances.gap_degeneracy;
  opt.identity_tol = cfg.tolerances.identity_check;
  return opt;
}

fs::path out_dir(const ExperimentConfig& cfg, const CliArgs& args) {
  fs::path dir = args.out_dir.empty() ? cfg.output.dir : args.out_dir;
  fs::create_directories(dir);
  return dir;
}

int cmd_validate(const ExperimentConfig& cfg) {
  Lattice lat = build_lattice(cfg);
  Interaction model = build_model(cfg, lat);
  AssumptionReport as = validate_assumptions(model, lat, cfg.mu0);
  SpectralData spec = eigendecompose(embed_full(local_hamiltonian(model, lat.all_sites())));
  bool degenerate = false;
  double gamma = 0;
  try {
    GroundState gs = ground_state(spec, cfg.tolerances.gap_degeneracy);
    gamma = gs.gamma;
  } catch (const DegenerateGroundState&) {
    degenerate = true;
    gamma = spec.eigenvalues(1) - spec.eigenvalues(0);
  }
  std::printf("{\n  \"R\": %s,\n  \"J\": %s,\n  \"C_phi\": %s,\n  \"N_phi\": %s,\n"
              "  \"kappa_mu0\": %s,\n  \"gap\": %s,\n  \"ground_degenerate\": %s\n}\n",
              format_real(as.R).c_str(), format_real(as.J).c_str(),
              format_real(as.C_phi).c_str(), format_real(as.N_phi).c_str(),
              format_real(as.kappa_mu0).c_str(), format_real(gamma).c_str(),
              degenerate ? "true" : "false");
  return degenerate ? 1 : 0;
}

int cmd_run(const ExperimentConfig& cfg, const CliArgs& args) {
  Lattice lat = build_lattice(cfg);
  Interaction model = build_model(cfg, lat);
  double ell = args.ell > 0 ? args.ell : (cfg.ell_values.empty() ? 0 : cfg.ell_values.front());
  if (ell <= cfg.model.range_R) {
    std::cerr << "error: ell must exceed the interaction range R = " << cfg.model.range_R << "\n";
    return 2;
  }
  const double mu = resolve_mu(cfg, args);
  const double v = resolve_v(cfg, model, lat, mu);
  ApproximationReport rep = run_pipeline(model, lat, cfg.region_X, ell, pipeline_options(cfg, mu, v));
  std::cout << report_to_json(rep);
  if (args.dump_operators) {
    fs::path dir = out_dir(cfg, args);
    RegionDecomposition decomp = decompose_region(lat, cfg.region_X, ell, cfg.model.range_R);
    HamiltonianDecomposition hd = decompose_hamiltonian(model, decomp);
    dump_operator(embed_full(local_hamiltonian(model, lat.all_sites())), (dir / "H_V.op").string());
    dump_operator(hd.H_int_b, (dir / "H_int_b.op").string());
    dump_operator(hd.H_bd, (dir / "H_bd.op").string());
    dump_operator(hd.H_ext_b, (dir / "H_ext_b.op").string());
  }
  return rep.all_explicit_bounds_hold() ? 0 : 1;
}

int cmd_sweep(const ExperimentConfig& cfg, const CliArgs& args) {
  Lattice lat = build_lattice(cfg);
  Interaction model = build_model(cfg, lat);
  const double mu = resolve_mu(cfg, args);
  const double v = resolve_v(cfg, model, lat, mu);
  PipelineOptions opt = pipeline_options(cfg, mu, v);
  SpectralData specV = eigendecompose(embed_full(local_hamiltonian(model, lat.all_sites())));
  opt.hv_spectral = &specV;  // shared across ell points
  std::vector<ApproximationReport> reports;
  for (double ell : cfg.ell_values)
    reports.push_back(run_pipeline(model, lat, cfg.region_X, ell, opt));

  fs::path dir = out_dir(cfg, args);
  {
    std::ofstream csv(dir / "sweep.csv");
    write_sweep_csv(reports, csv);
  }
  SweepSummary summary = summarize_sweep(reports);
  const std::string sj = sweep_summary_to_json(summary);
  std::ofstream(dir / "sweep_summary.json") << sj;
  std::cout << sj;
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const ApproximationReport& r) {
    return r.all_explicit_bounds_hold();
  });
  return ok ? 0 : 1;
}

int cmd_lr(const ExperimentConfig& cfg, const CliArgs& args) {
  Lattice lat = build_lattice(cfg);
  Interaction model = build_model(cfg, lat);
  double mu = args.mu_override > 0 ? args.mu_override
              : cfg.lr_mu > 0      ? cfg.lr_mu
                                   : 2 * cfg.mu0;
  if (mu < 2 * cfg.mu0)
    std::cerr << "warning: fitting mu = " << mu << " below 2*mu0 = " << 2 * cfg.mu0 << "\n";
  LightConeProfile prof = default_profile(model, lat, lr_time_grid(cfg), mu);
  VelocityFit fit = fit_velocity(prof, mu);
  fs::path dir = out_dir(cfg, args);
  {
    std::ofstream csv(dir / "lr_profile.csv");
    write_profile_csv(prof, csv);
  }
  std::cout << fit_to_json(fit, mu);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ground-state projector localization experiments"};
  app.require_subcommand(1);
  CliArgs args;
  app.add_option("--jobs", args.jobs, "worker count (results merged deterministically)");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "experiment JSON config")->required();
    sub->add_option("--mu", args.mu_override, "override decay rate mu");
    sub->add_option("--out", args.out_dir, "output directory");
  };
  CLI::App* validate = app.add_subcommand("validate", "check model assumptions");
  add_common(validate);
  CLI::App* run = app.add_subcommand("run", "single pipeline run");
  add_common(run);
  run->add_option("--ell", args.ell, "length scale (must exceed R)");
  run->add_flag("--dump-operators", args.dump_operators, "write operator dumps");
  CLI::App* sweep = app.add_subcommand("sweep", "ell ladder with decay summary");
  add_common(sweep);
  CLI::App* lr = app.add_subcommand("lr", "light-cone probe and velocity fit");
  add_common(lr);

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = load_config(args.config_path);
    if (validate->parsed()) return cmd_validate(cfg);
    if (run->parsed()) return cmd_run(cfg, args);
    if (sweep->parsed()) return cmd_sweep(cfg, args);
    return cmd_lr(cfg, args);
  } catch (const ConfigParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionViolated& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NonPositiveInput& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidDims& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const QuadratureNotConverged& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const ConvergenceFailure& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

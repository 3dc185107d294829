#include "gapprox/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gapprox {

using nlohmann::json;

namespace {

ConfigParseError field_error(const std::string& field, const std::string& what) {
  return ConfigParseError("config field '" + field + "': " + what);
}

std::vector<double> real_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw field_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) throw field_error(field, "expected numeric entries");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> int_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw field_error(field, "expected an array of integers");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw field_error(field, "expected integer entries");
    out.push_back(e.get<int>());
  }
  return out;
}

Eigen::MatrixXcd parse_matrix(const json& jre, const json& jim, const std::string& field) {
  if (!jre.is_array() || jre.empty() || !jre[0].is_array())
    throw field_error(field, "expected a matrix as array of rows");
  const std::size_t n = jre.size();
  Eigen::MatrixXcd m(n, jre[0].size());
  for (std::size_t i = 0; i < n; ++i) {
    if (jre[i].size() != static_cast<std::size_t>(m.cols()))
      throw field_error(field, "ragged matrix rows");
    for (std::size_t k = 0; k < jre[i].size(); ++k) {
      double re = jre[i][k].get<double>();
      double im = jim.is_null() ? 0.0 : jim[i][k].get<double>();
      m(i, k) = {re, im};
    }
  }
  return m;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != "gapprox/1")
    throw ConfigParseError("missing or unsupported schema (expected \"gapprox/1\")");

  ExperimentConfig c;
  if (!j.contains("lattice") || !j["lattice"].is_object())
    throw field_error("lattice", "required object missing");
  const json& jl = j["lattice"];
  if (jl.contains("distance_csv")) {
    c.distance_csv = jl["distance_csv"].get<std::string>();
    if (jl.contains("local_dims")) c.lattice.local_dims = int_list(jl["local_dims"], "lattice.local_dims");
  } else {
    c.lattice.dims = int_list(jl.at("dims"), "lattice.dims");
    const std::string metric = jl.value("metric", "graph_path");
    if (metric == "graph_path") c.lattice.metric = MetricKind::graph_path;
    else if (metric == "euclidean") c.lattice.metric = MetricKind::euclidean;
    else throw field_error("lattice.metric", "expected \"graph_path\" or \"euclidean\"");
    if (jl.contains("local_dims")) c.lattice.local_dims = int_list(jl["local_dims"], "lattice.local_dims");
    c.lattice.site_cap = jl.value("site_cap", c.lattice.site_cap);
  }

  if (!j.contains("model") || !j["model"].is_object())
    throw field_error("model", "required object missing");
  const json& jm = j["model"];
  c.model.type = jm.value("type", "");
  const json params = jm.value("params", json::object());
  if (c.model.type == "tfi") {
    c.model.J = params.value("J", 1.0);
    c.model.h = params.value("h", 1.0);
    c.model.range_R = 1;
  } else if (c.model.type == "xxz") {
    c.model.Jxy = params.value("Jxy", 1.0);
    c.model.Jz = params.value("Jz", 1.0);
    c.model.hx = params.value("hx", 0.0);
    c.model.hz = params.value("hz", 0.0);
    c.model.range_R = 1;
  } else if (c.model.type == "custom") {
    c.model.range_R = jm.value("range_R", 1.0);
    if (!jm.contains("terms")) throw field_error("model.terms", "custom model requires terms");
    for (const auto& jt : jm["terms"]) {
      TermSpec t;
      t.sites = int_list(jt.at("sites"), "model.terms[].sites");
      t.label = jt.value("label", "");
      if (jt.contains("pauli")) {
        t.pauli = jt["pauli"].get<std::string>();
        t.coeff = jt.value("coeff", 1.0);
      } else if (jt.contains("re")) {
        t.matrix = parse_matrix(jt["re"], jt.value("im", json()), "model.terms[]");
      } else {
        throw field_error("model.terms[]", "term needs either 'pauli' or 're'/'im'");
      }
      c.model.terms.push_back(std::move(t));
    }
  } else {
    throw field_error("model.type", "expected \"tfi\", \"xxz\" or \"custom\"");
  }

  c.region_X = int_list(j.at("region_X"), "region_X");
  if (c.region_X.empty()) throw field_error("region_X", "must be non-empty");
  if (!std::is_sorted(c.region_X.begin(), c.region_X.end()))
    throw field_error("region_X", "sites must be ascending");

  c.ell_values = real_list(j.at("ell_values"), "ell_values");
  for (std::size_t i = 0; i < c.ell_values.size(); ++i) {
    if (c.ell_values[i] <= c.model.range_R)
      throw field_error("ell_values", "every ell must exceed the interaction range");
    if (i > 0 && c.ell_values[i] <= c.ell_values[i - 1])
      throw field_error("ell_values", "must be strictly increasing");
  }

  c.mu0 = j.value("mu0", 1.0);
  if (j.contains("mu")) {
    if (j["mu"].is_string() && j["mu"] == "auto") c.mu_auto = true;
    else if (j["mu"].is_number()) {
      c.mu = j["mu"].get<double>();
      c.mu_auto = false;
    } else throw field_error("mu", "expected a number or \"auto\"");
  }
  if (j.contains("v")) {
    if (j["v"].is_string() && j["v"] == "fit") c.v_fit = true;
    else if (j["v"].is_number()) {
      c.v = j["v"].get<double>();
      c.v_fit = false;
    } else throw field_error("v", "expected a number or \"fit\"");
  }
  if (j.contains("lr")) {
    const json& jlr = j["lr"];
    if (jlr.contains("times")) c.lr_times = real_list(jlr["times"], "lr.times");
    c.lr_mu = jlr.value("mu", 0.0);
  }
  if (j.contains("quadrature")) {
    c.quadrature.initial_nodes = j["quadrature"].value("initial_nodes", c.quadrature.initial_nodes);
    c.quadrature.tol = j["quadrature"].value("tol", c.quadrature.tol);
  }
  if (j.contains("tolerances")) {
    c.tolerances.gap_degeneracy =
        j["tolerances"].value("gap_degeneracy", c.tolerances.gap_degeneracy);
    c.tolerances.identity_check =
        j["tolerances"].value("identity_check", c.tolerances.identity_check);
  }
  if (j.contains("output")) {
    c.output.dir = j["output"].value("dir", c.output.dir);
    if (j["output"].contains("formats"))
      c.output.formats = j["output"]["formats"].get<std::vector<std::string>>();
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Eigen::MatrixXd load_distance_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open distance CSV: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigParseError("empty distance CSV");
  Eigen::MatrixXd d(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ConfigParseError("distance CSV must be square");
    for (std::size_t k = 0; k < rows[i].size(); ++k) d(i, k) = rows[i][k];
  }
  return d;
}

Lattice build_lattice(const ExperimentConfig& config) {
  if (!config.distance_csv.empty()) {
    Eigen::MatrixXd d = load_distance_csv(config.distance_csv);
    std::vector<int> dims = config.lattice.local_dims;
    if (dims.empty()) dims.assign(d.rows(), 2);
    return Lattice::from_distance_matrix(d, std::move(dims));
  }
  return Lattice::build(config.lattice);
}

Interaction build_model(const ExperimentConfig& config, const Lattice& lattice) {
  const ModelSpec& m = config.model;
  if (m.type == "tfi") return tfi_model(lattice, m.J, m.h);
  if (m.type == "xxz") return xxz_model(lattice, m.Jxy, m.Jz, m.hx, m.hz);
  return custom_model(lattice, m.terms, m.range_R);
}

}  // namespace gapprox

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gapprox/config.hpp"
#include "gapprox/pipeline.hpp"
#include "gapprox/report_io.hpp"

using namespace gapprox;

namespace {

const char* kGoodConfig = R"({
  "schema": "gapprox/1",
  "lattice": { "dims": [10], "metric": "graph_path" },
  "model": { "type": "tfi", "params": { "J": 1.0, "h": 2.0 } },
  "region_X": [0, 1, 2, 3, 4],
  "ell_values": [2, 3, 4],
  "mu": "auto",
  "v": 1.0,
  "quadrature": { "initial_nodes": 32, "tol": 1e-7 },
  "tolerances": { "gap_degeneracy": 1e-9, "identity_check": 1e-11 },
  "output": { "dir": "/tmp/gapprox-test", "formats": ["csv"] }
})";

ApproximationReport tiny_report() {
  LatticeSpec ls;
  ls.dims = {6};
  static Lattice lat = Lattice::build(ls);
  static Interaction I = tfi_model(lat, 1.0, 2.0);
  PipelineOptions opt;
  return run_pipeline(I, lat, {0, 1, 2}, 2.0, opt);
}

}  // namespace

TEST_CASE("config parsing") {
  ExperimentConfig c = parse_config(kGoodConfig);
  CHECK(c.lattice.dims == std::vector<int>{10});
  CHECK(c.model.type == "tfi");
  CHECK(c.model.h == doctest::Approx(2.0));
  CHECK(c.region_X == SiteSet{0, 1, 2, 3, 4});
  CHECK(c.ell_values == std::vector<double>{2, 3, 4});
  CHECK(c.mu_auto);
  CHECK_FALSE(c.v_fit);
  CHECK(c.v == doctest::Approx(1.0));
  CHECK(c.quadrature.initial_nodes == 32);
  CHECK(c.tolerances.identity_check == doctest::Approx(1e-11));

  CHECK_THROWS_AS(parse_config("{ not json"), ConfigParseError);
  CHECK_THROWS_AS(parse_config("{\"schema\": \"other/9\"}"), ConfigParseError);

  std::string bad_ladder = kGoodConfig;
  bad_ladder.replace(bad_ladder.find("[2, 3, 4]"), 9, "[3, 2, 4]");
  CHECK_THROWS_AS(parse_config(bad_ladder), ConfigParseError);

  std::string low_ell = kGoodConfig;
  low_ell.replace(low_ell.find("[2, 3, 4]"), 9, "[1, 2, 3]");
  CHECK_THROWS_AS(parse_config(low_ell), ConfigParseError);
}

TEST_CASE("custom model config") {
  const char* text = R"({
    "schema": "gapprox/1",
    "lattice": { "dims": [4] },
    "model": { "type": "custom", "range_R": 1,
      "terms": [
        { "sites": [0, 1], "pauli": "ZZ", "coeff": -1.0 },
        { "sites": [2], "re": [[0.5, 0], [0, -0.5]] }
      ] },
    "region_X": [0, 1],
    "ell_values": [2]
  })";
  ExperimentConfig c = parse_config(text);
  Lattice lat = build_lattice(c);
  Interaction I = build_model(c, lat);
  CHECK(I.terms.size() == 2);
  CHECK(I.terms[1].op(0, 0) == std::complex<double>(0.5));
}

TEST_CASE("report json round-trips every csv column") {
  ApproximationReport r = tiny_report();
  std::string js = report_to_json(r);
  std::ostringstream csv;
  write_sweep_csv({r}, csv);
  std::stringstream ss(csv.str());
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);

  // parse both back and compare field by field
  std::vector<std::string> names, cells;
  for (std::stringstream hs(header); std::getline(hs, names.emplace_back(), ',');) {}
  names.pop_back();
  for (std::stringstream rs(row); std::getline(rs, cells.emplace_back(), ',');) {}
  cells.pop_back();
  REQUIRE(names.size() == 18);
  REQUIRE(cells.size() == 18);
  for (std::size_t k = 0; k < names.size(); ++k) {
    const std::string needle = "\"" + names[k] + "\": ";
    auto pos = js.find(needle);
    REQUIRE(pos != std::string::npos);
    double from_json = std::stod(js.substr(pos + needle.size()));
    CHECK(from_json == std::stod(cells[k]));  // bitwise round trip
  }
  CHECK(csv.str().find("\r") == std::string::npos);  // LF endings
}

TEST_CASE("format_real round trip") {
  for (double x : {1.0 / 3.0, 2.1333071927175453, -21.0, 1e-300, 0.0}) {
    CHECK(std::stod(format_real(x)) == x);
  }
}

TEST_CASE("sweep summary regression") {
  ApproximationReport a, b, c, d;
  a.param.ell = 2;
  a.param.xi = 1.5;
  a.err_theorem = 1e-1;
  b = a;
  b.param.ell = 3;
  b.err_theorem = 1e-2;
  c = a;
  c.param.ell = 4;
  c.err_theorem = 1e-3;
  d = a;
  d.param.ell = 5;
  d.err_theorem = 1e-4;
  d.degenerate_geometry = true;
  SweepSummary s = summarize_sweep({a, b, c, d});
  CHECK(s.used_points == 3);
  CHECK(s.excluded_points == 1);
  CHECK(s.slope == doctest::Approx(-std::log(10.0)));
  CHECK(s.predicted_rate == doctest::Approx(1 / 3.0));

  CHECK_THROWS_AS(summarize_sweep({a, b}), InsufficientLadder);

  // commuting-style runs: all errors tiny, slope not applicable
  a.err_theorem = b.err_theorem = c.err_theorem = 1e-12;
  SweepSummary tiny = summarize_sweep({a, b, c});
  CHECK_FALSE(tiny.slope_applicable);
  std::string js = sweep_summary_to_json(tiny);
  CHECK(js.find("not-applicable") != std::string::npos);
}

TEST_CASE("operator dump format") {
  LatticeSpec ls;
  ls.dims = {2};
  Lattice lat = Lattice::build(ls);
  DenseOperator zz = pauli_string(lat, {0, 1}, "ZZ", -1.0);
  const std::string path = "/tmp/gapprox_dump_test.op";
  dump_operator(zz, path);

  std::ifstream in(path, std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("\"support\":[0,1]") != std::string::npos);
  CHECK(header.find("\"rows\":4") != std::string::npos);
  CHECK(header.find("\"hermitian\":true") != std::string::npos);
  std::vector<double> payload(32);
  in.read(reinterpret_cast<char*>(payload.data()), 32 * sizeof(double));
  CHECK(in.gcount() == 32 * static_cast<int>(sizeof(double)));
  // row-major interleaved: first entry is (-1, 0), second (0, 0)
  CHECK(payload[0] == -1.0);
  CHECK(payload[1] == 0.0);
  CHECK(payload[2] == 0.0);
  // diagonal (1,1) element lives at flat index 5 -> doubles 10, 11
  CHECK(payload[10] == 1.0);
  std::remove(path.c_str());
}

TEST_CASE("distance csv loader") {
  const std::string path = "/tmp/gapprox_dist_test.csv";
  {
    std::ofstream out(path);
    out << "0,1,2\n1,0,1\n2,1,0\n";
  }
  Eigen::MatrixXd d = load_distance_csv(path);
  CHECK(d.rows() == 3);
  CHECK(d(0, 2) == doctest::Approx(2));
  Lattice lat = Lattice::from_distance_matrix(d, {2, 2, 2});
  CHECK(lat.distance(0, 2) == doctest::Approx(2));
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_distance_csv("/tmp/does_not_exist_gapprox.csv"), ConfigParseError);
}

TEST_CASE("profile and fit serialization") {
  LightConeProfile p;
  p.mu = 2;
  p.times = Eigen::VectorXd::LinSpaced(3, 0.5, 1.5);
  LightConeProfile::Pair pr;
  pr.distance = 4;
  p.probe_pairs.push_back(pr);
  p.norms.resize(1, 3);
  p.norms << 0.1, 0.2, 0.3;
  std::ostringstream out;
  write_profile_csv(p, out);
  CHECK(out.str() == "pair_id,distance,t,norm\n"
                     "0,4,0.5,0.10000000000000001\n"
                     "0,4,1,0.20000000000000001\n"
                     "0,4,1.5,0.29999999999999999\n");

  VelocityFit f;
  f.c = 0.5;
  f.v = 2;
  std::string js = fit_to_json(f, 2.0);
  CHECK(js.find("\"v\": 2") != std::string::npos);
  CHECK(js.find("\"c\": 0.5") != std::string::npos);
}

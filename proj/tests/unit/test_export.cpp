#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbundle/export.hpp"
#include "qbundle/rng.hpp"
#include "qbundle/triple.hpp"

using namespace qbundle;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ConfigGraphPair small_pair() {
  LatticeBox b;
  b.dim = 2;
  b.sides = {2, 2};
  return build_config_pair(b, 2);
}

}  // namespace

TEST_CASE("complex payloads are re-im pairs") {
  const auto j = json_complex({1.5, -2.25});
  CHECK(j.is_array());
  CHECK(j[0].get<double>() == 1.5);
  CHECK(j[1].get<double>() == -2.25);

  Eigen::MatrixXcd m(1, 2);
  m << cplx(0, 1), cplx(3, 0);
  const auto jm = json_matrix(m);
  CHECK(jm[0][0][1].get<double>() == 1.0);
  CHECK(jm[0][1][0].get<double>() == 3.0);
}

TEST_CASE("graph and pair payloads carry vertices, edges, projection") {
  const auto pair = small_pair();
  const auto jg = graph_json(pair.quotient);
  CHECK(jg["vertices"].size() == 6);
  CHECK(jg["edges"].size() == pair.quotient.edges.size());

  const auto jp = pair_json(pair);
  CHECK(jp["vertices"].size() == 12);
  CHECK(jp["projection"].size() == 12);
  CHECK(jp["quotient_vertices"].size() == 6);
  CHECK(jp["vertices"][0].is_array());
}

TEST_CASE("bundle payload stores row-major unitaries with provenance hash") {
  const auto pair = small_pair();
  const auto b = bundle_from_character(pair, SnCharacter::alternating);
  const auto jb = bundle_json(b);
  CHECK(jb["rank"].get<int>() == 1);
  CHECK(jb["graph_hash"].get<std::uint64_t>() == pair.quotient.content_hash());
  REQUIRE(jb["edge_unitaries"].size() == b.unitaries.size());
  const auto& first = jb["edge_unitaries"][0];
  CHECK(first["unitary"].size() == 1);
  CHECK(std::abs(first["unitary"][0][0].get<double>()) == doctest::Approx(1.0));
}

TEST_CASE("triple and equivalence payloads") {
  const auto pair = small_pair();
  const auto b = bundle_from_character(pair, SnCharacter::alternating);
  const auto t = make_bundle_triple(b, Eigen::VectorXd::Zero(6), PhysicalParams{});
  const auto jt = triple_json(t);
  CHECK(jt["dim"].get<int>() == 6);
  CHECK(jt["hamiltonian"].size() == 6);
  CHECK(jt["pvm"].size() == 6);
  CHECK(jt["pvm"][2]["indices"].size() == 1);

  const auto check = verify_equivalence(t, t, Eigen::MatrixXcd::Identity(6, 6), 1e-12);
  const auto jc = equivalence_json(check);
  CHECK(jc["status"] == "Witness");
  CHECK(jc.contains("witness"));
  CHECK(jc["residuals"]["hamiltonian"].get<double>() < 1e-13);

  const auto report = solve_equivalence(t, t, 1e-10);
  const auto jr = equivalence_json(report);
  CHECK(jr["status"] == "Witness");
  CHECK(jr["components"].get<int>() >= 1);
}

TEST_CASE("csv writers freeze text output") {
  const auto dir = std::filesystem::temp_directory_path() / "qbundle_export_test";
  std::filesystem::create_directories(dir);

  Eigen::VectorXd evals(3);
  evals << -1.5, 0.0, 0.25;
  write_spectrum_csv(dir / "spec.csv", evals);
  CHECK(slurp(dir / "spec.csv") == "index,eigenvalue\n0,-1.5\n1,0\n2,0.25\n");

  Trajectory tr;
  tr.times = {0.0, 0.5};
  Eigen::VectorXd p0(2), p1(2);
  p0 << 1, 2;
  p1 << 3, 4.5;
  tr.points = {p0, p1};
  write_trajectory_csv(dir / "traj.csv", tr);
  CHECK(slurp(dir / "traj.csv") == "t,x1,x2\n0,1,2\n0.5,3,4.5\n");

  // doubles survive a round trip at full precision
  Eigen::VectorXd tricky(1);
  tricky << 0.1 + 0.2;
  write_spectrum_csv(dir / "tricky.csv", tricky);
  const std::string text = slurp(dir / "tricky.csv");
  const double parsed = std::stod(text.substr(text.rfind(',') + 1));
  CHECK(parsed == tricky[0]);

  std::filesystem::remove_all(dir);
}

TEST_CASE("json writes are deterministic and parseable") {
  const auto pair = small_pair();
  const auto payload = pair_json(pair);
  const auto dir = std::filesystem::temp_directory_path() / "qbundle_export_test2";
  std::filesystem::create_directories(dir);
  write_json(dir / "a.json", payload);
  write_json(dir / "b.json", payload);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  const auto parsed = ordered_json::parse(slurp(dir / "a.json"));
  CHECK(parsed["projection"] == payload["projection"]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("ensemble and sector payloads") {
  EnsembleReport r;
  r.samples = 100;
  r.failures = 1;
  r.ks_statistic = 0.05;
  r.p_value = 0.7;
  const auto j = ensemble_json(r);
  CHECK(j["samples"].get<int>() == 100);
  CHECK(j["p_value"].get<double>() == 0.7);

  Eigen::VectorXcd vals(2);
  vals << cplx(1, 2), cplx(-3, 0);
  const auto js = sector_state_json(2, vals);
  CHECK(js["sector"].get<int>() == 2);
  CHECK(js["values"][0][1].get<double>() == 2.0);
}

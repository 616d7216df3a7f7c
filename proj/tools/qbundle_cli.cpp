// Batch experiment runner: every subcommand builds a scene from a flat
// key-value config, runs one reproducible experiment, and writes a JSON
// report (plus CSV tables for bulk numbers) into the output directory.
// Exit codes: 0 success, 1 invariant violation or failed run, 2 usage error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "qbundle/bohm.hpp"
#include "qbundle/bundle.hpp"
#include "qbundle/confspace.hpp"
#include "qbundle/errors.hpp"
#include "qbundle/export.hpp"
#include "qbundle/fock.hpp"
#include "qbundle/graph.hpp"
#include "qbundle/iso.hpp"
#include "qbundle/loops.hpp"
#include "qbundle/params.hpp"
#include "qbundle/perm.hpp"
#include "qbundle/rng.hpp"
#include "qbundle/triple.hpp"

#ifndef QBUNDLE_VERSION
#define QBUNDLE_VERSION "unknown"
#endif

namespace {

using namespace qbundle;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// Config handling: a flat key-value file ("key = value", '#' comments),
// overridable by the --seed/--tol flags. The resolved map is echoed into the
// report so a run is reproducible from its own artifacts.

struct RunConfig {
  std::map<std::string, std::string> values;
  std::uint64_t seed = 1;
  std::optional<double> tol;

  bool has(const std::string& key) const { return values.count(key) != 0; }

  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    std::size_t pos = 0;
    const double x = std::stod(it->second, &pos);
    if (pos != it->second.size())
      throw DomainError("config value for '" + key + "' is not a number: " + it->second);
    return x;
  }

  long get_long(const std::string& key, long fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    std::size_t pos = 0;
    const long x = std::stol(it->second, &pos);
    if (pos != it->second.size())
      throw DomainError("config value for '" + key + "' is not an integer: " + it->second);
    return x;
  }

  double tolerance(double fallback) const { return tol.value_or(get_double("tol", fallback)); }
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::map<std::string, std::string> parse_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file " + path.string());
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw DomainError("config line " + std::to_string(lineno) + " has no key");
    values[key] = value;
  }
  return values;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

LatticeBox box_from_config(const RunConfig& cfg, const std::string& fallback) {
  const std::string text = cfg.get("box", fallback);
  LatticeBox box;
  box.sides.clear();
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) box.sides.push_back(std::stoi(trim(part)));
  box.dim = static_cast<int>(box.sides.size());
  box.spacing = cfg.get_double("spacing", 1.0);
  if (cfg.get_long("periodic", 0) != 0) box.periodic.assign(box.dim, true);
  box.validate();
  return box;
}

PhysicalParams params_from_config(const RunConfig& cfg) {
  PhysicalParams p;
  p.hbar = cfg.get_double("hbar", 1.0);
  p.mass = cfg.get_double("mass", 1.0);
  p.spacing = cfg.get_double("spacing", 1.0);
  return p;
}

PotentialKind potential_kind(const RunConfig& cfg) {
  const std::string name = cfg.get("potential", "zero");
  if (name == "zero") return PotentialKind::zero;
  if (name == "onsite_random") return PotentialKind::onsite_random;
  if (name == "pairwise") return PotentialKind::pairwise;
  throw DomainError("unknown potential kind: " + name);
}

Symmetry statistics_from_config(const RunConfig& cfg) {
  const std::string name = cfg.get("statistics", "anti");
  if (name == "anti") return Symmetry::anti;
  if (name == "sym") return Symmetry::sym;
  throw DomainError("unknown statistics: " + name + " (want anti or sym)");
}

// ---------------------------------------------------------------------------
// Report plumbing.

struct Reporter {
  fs::path out_dir;
  ordered_json report;
  clock_type::time_point started = clock_type::now();

  Reporter(const std::string& experiment, const fs::path& dir, const RunConfig& cfg)
      : out_dir(dir) {
    fs::create_directories(out_dir);
    report["experiment"] = experiment;
    report["library_version"] = QBUNDLE_VERSION;
    ordered_json echo = ordered_json::object();
    echo["seed"] = cfg.seed;
    if (cfg.tol) echo["tol"] = *cfg.tol;
    for (const auto& [k, v] : cfg.values) echo[k] = v;
    report["config"] = echo;
    report["artifacts"] = ordered_json::object();
  }

  void attach(const std::string& name, const std::string& filename) {
    report["artifacts"][name] = filename;
  }

  // Timing lives under one key so determinism checks can drop it wholesale.
  int finish(bool ok, const std::string& failure = "") {
    report["status"] = ok ? "ok" : "invariant-violation";
    if (!ok && !failure.empty()) report["failure"] = failure;
    report["timing"] = {{"wall_seconds",
                         std::chrono::duration<double>(clock_type::now() - started).count()}};
    write_json(out_dir / "report.json", report);
    return ok ? 0 : 1;
  }
};

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << header << "\n";
  for (const auto& row : rows) out << row << "\n";
}

std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// holonomy-audit: random loops against the loop-permutation sign.

int run_holonomy_audit(const RunConfig& cfg, Reporter& rep) {
  const auto box = box_from_config(cfg, "3x3");
  const int n = static_cast<int>(cfg.get_long("particles", 2));
  const int loops = static_cast<int>(cfg.get_long("loops", 100));
  const int walk = static_cast<int>(cfg.get_long("walk_steps", 24));
  const double tol = cfg.tolerance(1e-12);

  const auto pair = build_config_pair(box, n);
  const auto bundle = bundle_from_character(pair, SnCharacter::alternating);
  Rng rng(cfg.seed);

  int matches = 0;
  double max_residual = 0.0;
  std::vector<std::string> rows;
  for (int i = 0; i < loops; ++i) {
    const int base = rng.index(pair.quotient.num_vertices);
    const auto loop = random_loop(pair, base, walk, rng);
    const auto sigma = loop_permutation(pair, loop, pair.canonical_rep(base));
    const cplx h = holonomy(bundle, loop)(0, 0);
    const double residual = std::abs(h - cplx(static_cast<double>(sigma.sign()), 0.0));
    max_residual = std::max(max_residual, residual);
    if (residual <= tol) ++matches;
    rows.push_back(std::to_string(i) + "," + std::to_string(base) + "," +
                   std::to_string(loop.size() - 1) + "," + std::to_string(sigma.sign()) + "," +
                   csv_num(h.real()) + "," + csv_num(h.imag()) + "," + csv_num(residual));
  }
  write_csv(rep.out_dir / "loops.csv", "loop,base,length,expected_sign,holonomy_re,holonomy_im,residual",
            rows);
  rep.attach("loops_csv", "loops.csv");
  rep.report["results"] = {{"loops", loops},
                           {"matches", matches},
                           {"max_residual", max_residual},
                           {"quotient_vertices", pair.quotient.num_vertices}};
  return rep.finish(matches == loops,
                    matches == loops ? "" : "holonomy mismatch beyond tolerance");
}

// ---------------------------------------------------------------------------
// constructions-compare: pairwise gauge equivalence of the rank-1 builds.

int run_constructions_compare(const RunConfig& cfg, Reporter& rep) {
  const auto box = box_from_config(cfg, "3x3");
  const int n = static_cast<int>(cfg.get_long("particles", 2));
  const double tol = cfg.tolerance(1e-12);

  const auto pair = build_config_pair(box, n);
  std::vector<std::pair<std::string, DiscreteBundle>> cons;
  cons.emplace_back("character", bundle_from_character(pair, SnCharacter::alternating));
  cons.emplace_back("exterior_power", exterior_power_bundle(pair, n));
  cons.emplace_back("directsum_antisym", directsum_antisym_bundle(pair));
  if (box.dim % 2 == 1) cons.emplace_back("pseudoscalar", pseudoscalar_bundle(pair));

  bool all_equivalent = true;
  ordered_json pairs = ordered_json::array();
  std::vector<std::string> rows;
  for (std::size_t a = 0; a < cons.size(); ++a) {
    for (std::size_t b = a + 1; b < cons.size(); ++b) {
      const auto eq = is_gauge_equivalent(cons[a].second, cons[b].second, tol);
      all_equivalent = all_equivalent && eq.equivalent;
      pairs.push_back({{"first", cons[a].first},
                       {"second", cons[b].first},
                       {"equivalent", eq.equivalent},
                       {"max_residual", eq.max_residual}});
      rows.push_back(cons[a].first + "," + cons[b].first + "," +
                     (eq.equivalent ? "1" : "0") + "," + csv_num(eq.max_residual));
    }
  }
  write_csv(rep.out_dir / "constructions.csv", "first,second,equivalent,max_residual", rows);
  rep.attach("constructions_csv", "constructions.csv");
  rep.report["results"] = {{"constructions", static_cast<int>(cons.size())}, {"pairs", pairs}};
  return rep.finish(all_equivalent, all_equivalent ? "" : "a construction pair is not equivalent");
}

// ---------------------------------------------------------------------------
// equivalence: bundle triple vs subspace triple, lift witness + solver.

int run_equivalence(const RunConfig& cfg, Reporter& rep) {
  const auto box = box_from_config(cfg, "4x4");
  const int n = static_cast<int>(cfg.get_long("particles", 2));
  const Symmetry kind = statistics_from_config(cfg);
  const double tol = cfg.tolerance(1e-10);
  const auto params = params_from_config(cfg);
  const auto vkind = potential_kind(cfg);
  const double strength = cfg.get_double("potential_strength", 0.5);
  const std::uint64_t vseed =
      static_cast<std::uint64_t>(cfg.get_long("potential_seed", static_cast<long>(cfg.seed)));

  const auto pair = build_config_pair(box, n);
  const auto bundle = (kind == Symmetry::anti)
                          ? bundle_from_character(pair, SnCharacter::alternating)
                          : trivial_bundle(pair.quotient);
  const auto t_bundle =
      make_bundle_triple(bundle, potential_on_quotient(pair, vkind, vseed, strength), params);
  const auto t_sub = make_subspace_triple(
      pair, potential_on_ordered(pair, vkind, vseed, strength), params, kind);

  const auto pf = canonical_pullback_frame(bundle, pair);
  const auto basis = symmetric_subspace_basis(pair, kind);
  const auto witness = triple_unitary(basis.B, lift_matrix(pf.bundle, pf.frame, pair));
  const auto check = verify_equivalence(t_bundle, t_sub, witness, tol);
  const auto solved = solve_equivalence(t_bundle, t_sub, tol);

  const auto spec_bundle = spectrum(t_bundle.H);
  const auto spec_sub = spectrum(t_sub.H);
  write_spectrum_csv(rep.out_dir / "spectrum_bundle.csv", spec_bundle);
  write_spectrum_csv(rep.out_dir / "spectrum_subspace.csv", spec_sub);
  rep.attach("spectrum_bundle_csv", "spectrum_bundle.csv");
  rep.attach("spectrum_subspace_csv", "spectrum_subspace.csv");

  rep.report["results"] = {
      {"dim", t_bundle.dim},
      {"lift_witness", equivalence_json(check)},
      {"solver", equivalence_json(solved)},
      {"spectral_deviation", (spec_bundle - spec_sub).cwiseAbs().maxCoeff()}};
  const bool ok = check.equivalent && solved.status == SolveStatus::Witness;
  return rep.finish(ok, ok ? "" : "triples failed the equivalence checks");
}

// ---------------------------------------------------------------------------
// anyon-sweep: exchange phase and spectra across a beta grid.

int run_anyon_sweep(const RunConfig& cfg, Reporter& rep) {
  const auto box = box_from_config(cfg, "3x3");
  const int n = static_cast<int>(cfg.get_long("particles", 2));
  const int steps = static_cast<int>(cfg.get_long("beta_steps", 9));
  const double beta_max = cfg.get_double("beta_max", M_PI);
  const double tol = cfg.tolerance(1e-12);
  const auto params = params_from_config(cfg);
  const auto vkind = potential_kind(cfg);
  const double strength = cfg.get_double("potential_strength", 0.5);
  const std::uint64_t vseed =
      static_cast<std::uint64_t>(cfg.get_long("potential_seed", static_cast<long>(cfg.seed)));
  if (steps < 2) throw DomainError("beta_steps must be at least 2");

  const auto pair = build_config_pair(box, n);
  const auto xl = exchange_loop(pair);
  const auto potential = potential_on_quotient(pair, vkind, vseed, strength);

  double max_residual = 0.0;
  std::vector<std::string> exchange_rows;
  std::vector<std::string> spectra_rows;
  std::vector<Eigen::VectorXd> spectra;
  for (int k = 0; k < steps; ++k) {
    const double beta = beta_max * k / (steps - 1);
    const auto bundle = anyon_bundle(pair, beta);
    const cplx h = holonomy(bundle, xl.loop)(0, 0);
    const double residual = std::abs(h - std::exp(cplx(0.0, beta)));
    max_residual = std::max(max_residual, residual);
    exchange_rows.push_back(csv_num(beta) + "," + csv_num(h.real()) + "," + csv_num(h.imag()) +
                            "," + csv_num(residual));
    spectra.push_back(spectrum(connection_laplacian(bundle, potential, params)));
    for (int i = 0; i < spectra.back().size(); ++i)
      spectra_rows.push_back(csv_num(beta) + "," + std::to_string(i) + "," +
                             csv_num(spectra.back()[i]));
  }
  write_csv(rep.out_dir / "exchange.csv", "beta,holonomy_re,holonomy_im,residual", exchange_rows);
  write_csv(rep.out_dir / "spectra.csv", "beta,index,eigenvalue", spectra_rows);
  rep.attach("exchange_csv", "exchange.csv");
  rep.attach("spectra_csv", "spectra.csv");

  const bool trivial_at_zero = trivialize(anyon_bundle(pair, 0.0)).ok();
  double max_gap = 0.0;
  for (int k = 0; k + 1 < steps; ++k)
    max_gap = std::max(max_gap, (spectra[k + 1] - spectra[k]).cwiseAbs().maxCoeff());
  const double dbeta = beta_max / (steps - 1);

  ordered_json results = {{"beta_steps", steps},
                          {"max_exchange_residual", max_residual},
                          {"trivializable_at_zero", trivial_at_zero},
                          {"max_adjacent_spectral_gap", max_gap},
                          {"spectral_slope", max_gap / dbeta}};
  bool endpoint_ok = trivial_at_zero;
  if (std::abs(beta_max - M_PI) < 1e-15) {
    const auto fermionic = bundle_from_character(pair, SnCharacter::alternating);
    const auto eq = is_gauge_equivalent(anyon_bundle(pair, M_PI), fermionic, 1e-10);
    results["pi_equals_fermionic"] = eq.equivalent;
    results["pi_residual"] = eq.max_residual;
    endpoint_ok = endpoint_ok && eq.equivalent;
  }
  rep.report["results"] = results;
  const bool ok = max_residual <= tol && endpoint_ok;
  return rep.finish(ok, ok ? "" : "exchange holonomy or endpoint identification failed");
}

// ---------------------------------------------------------------------------
// d1-boundary: hard-core pair on a line vs the two reference matrices.

int run_d1_boundary(const RunConfig& cfg, Reporter& rep) {
  const auto box = box_from_config(cfg, "6");
  if (box.dim != 1) throw DomainError("d1-boundary wants a one-dimensional box");
  const double tol = cfg.tolerance(1e-10);
  const auto params = params_from_config(cfg);

  Eigen::VectorXd site_potential = Eigen::VectorXd::Zero(box.site_count());
  if (cfg.has("site_potential")) {
    const auto values = parse_number_list(cfg.get("site_potential", ""));
    if (static_cast<int>(values.size()) != box.site_count())
      throw ShapeError("site_potential needs one value per site");
    for (int i = 0; i < site_potential.size(); ++i) site_potential[i] = values[i];
  }

  const auto demo = d1_boundary_demo(box, site_potential, params);
  write_spectrum_csv(rep.out_dir / "spectrum_anti.csv", demo.anti_spectrum);
  write_spectrum_csv(rep.out_dir / "spectrum_open.csv", demo.open_spectrum);
  write_spectrum_csv(rep.out_dir / "spectrum_sym.csv", demo.sym_spectrum);
  write_spectrum_csv(rep.out_dir / "spectrum_closed.csv", demo.closed_spectrum);
  rep.attach("spectrum_anti_csv", "spectrum_anti.csv");
  rep.attach("spectrum_open_csv", "spectrum_open.csv");
  rep.attach("spectrum_sym_csv", "spectrum_sym.csv");
  rep.attach("spectrum_closed_csv", "spectrum_closed.csv");

  rep.report["results"] = {{"sites", box.site_count()},
                           {"anti_dim", static_cast<int>(demo.anti_spectrum.size())},
                           {"sym_dim", static_cast<int>(demo.sym_spectrum.size())},
                           {"anti_deviation", demo.anti_deviation},
                           {"sym_deviation", demo.sym_deviation}};
  const bool ok = demo.anti_deviation <= tol && demo.sym_deviation <= tol;
  return rep.finish(ok, ok ? "" : "boundary spectra deviate beyond tolerance");
}

// ---------------------------------------------------------------------------
// Shared Bohmian state construction for bohm-run and bohm-ensemble.

SlaterState state_from_config(const RunConfig& cfg, const PhysicalParams& params) {
  const std::string kind = cfg.get("orbital_kind", "free");
  const auto centers = parse_number_list(cfg.get("centers", "-1.2,1.0"));
  const auto momenta = parse_number_list(cfg.get("momenta", "0.5,-0.4"));
  if (centers.size() != momenta.size())
    throw ShapeError("centers and momenta need the same length");
  if (centers.empty()) throw ShapeError("at least one orbital is required");
  const double width = cfg.get_double("width", 0.8);
  const double omega = cfg.get_double("omega", 1.0);

  std::vector<Orbital> orbitals;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    Eigen::VectorXd c(1), p(1);
    c << centers[i];
    p << momenta[i];
    if (kind == "free")
      orbitals.push_back(Orbital::free_packet(c, p, width));
    else if (kind == "harmonic")
      orbitals.push_back(Orbital::coherent(c, p, omega, params));
    else
      throw DomainError("unknown orbital_kind: " + kind);
  }
  return SlaterState(std::move(orbitals), params);
}

// bohm-run: integrate one trajectory, optionally inside a gauge pair.

int run_bohm_run(const RunConfig& cfg, Reporter& rep) {
  const auto params = params_from_config(cfg);
  const auto state = state_from_config(cfg, params);
  const double t_end = cfg.get_double("t_end", 1.0);
  const int samples = static_cast<int>(cfg.get_long("samples", 101));
  const double tol = cfg.tolerance(1e-9);

  Eigen::VectorXd start(state.dim_config());
  {
    const auto values = parse_number_list(
        cfg.get("start", cfg.get("centers", "-1.2,1.0")));
    if (static_cast<int>(values.size()) != state.dim_config())
      throw ShapeError("start needs one coordinate per particle");
    for (int i = 0; i < start.size(); ++i) start[i] = values[i];
  }

  std::optional<GaugeDemo> gauge;
  if (cfg.get_long("gauge", 0) != 0) {
    GaugeDemo demo;
    demo.f.constant = cfg.get_double("gauge_constant", 0.0);
    demo.f.lin = Eigen::VectorXd::Constant(1, cfg.get_double("gauge_lin", 0.5));
    demo.f.amp = cfg.get_double("gauge_amp", 0.3);
    demo.f.k = Eigen::VectorXd::Constant(1, cfg.get_double("gauge_k", 1.0));
    demo.f.shift = cfg.get_double("gauge_shift", 0.0);
    demo.transformed = cfg.get_long("gauge_transformed", 0) != 0;
    gauge = demo;
  }

  const auto tr = integrate(state, start, t_end, tol, samples, gauge ? &*gauge : nullptr);
  write_trajectory_csv(rep.out_dir / "trajectory.csv", tr);
  rep.attach("trajectory_csv", "trajectory.csv");

  ordered_json final_point = ordered_json::array();
  for (int i = 0; i < tr.points.back().size(); ++i) final_point.push_back(tr.points.back()[i]);
  rep.report["results"] = {{"completed", tr.completed},
                           {"samples", static_cast<int>(tr.times.size())},
                           {"step_rejections", tr.step_rejections},
                           {"node_events", tr.node_events},
                           {"final_time", tr.times.back()},
                           {"final_point", final_point},
                           {"diagnostic", tr.diagnostic}};
  return rep.finish(tr.completed, tr.completed ? "" : tr.diagnostic);
}

// bohm-ensemble: transported Born samples vs the exact marginal.

int run_bohm_ensemble(const RunConfig& cfg, Reporter& rep) {
  const auto params = params_from_config(cfg);
  const auto state = state_from_config(cfg, params);
  const int samples = static_cast<int>(cfg.get_long("samples", 10000));
  const double t = cfg.get_double("time", 0.4);

  const auto ensemble = equivariance_test(state, samples, t, cfg.seed);
  rep.report["results"] = ensemble_json(ensemble);
  const bool ok = ensemble.p_value > 0.01 && !ensemble.degraded;
  return rep.finish(ok, ok ? "" : "transported ensemble repudiates the Born marginal");
}

// ---------------------------------------------------------------------------
// fock-demo: sector assembly, norm additivity, phase independence.

int run_fock_demo(const RunConfig& cfg, Reporter& rep) {
  const auto box = box_from_config(cfg, "3x3");
  const int n_max = static_cast<int>(cfg.get_long("n_max", 3));
  const Symmetry kind = statistics_from_config(cfg);
  const double tol = cfg.tolerance(1e-12);

  const auto gamma = build_gamma(box, n_max);
  Rng rng(cfg.seed);
  SectorState state;
  state.component.resize(n_max + 1);
  state.theta.assign(n_max + 1, 0.0);
  state.component[0] = Eigen::VectorXcd(1);
  state.component[0][0] = cplx(rng.gaussian(), rng.gaussian());
  for (int n = 1; n <= n_max; ++n) {
    Eigen::VectorXcd c(gamma.sector_size(n));
    for (int i = 0; i < c.size(); ++i) c[i] = cplx(rng.gaussian(), rng.gaussian());
    state.component[n] = c;
  }
  SectorState rephased = state;
  for (int n = 0; n <= n_max; ++n) rephased.theta[n] = 0.6 * (n + 1);

  const auto a = assemble_fock(gamma, state, kind);
  const auto b = assemble_fock(gamma, rephased, kind);

  double total = std::norm(a.sectors[0][0]);
  ordered_json sector_norms = ordered_json::array();
  sector_norms.push_back(std::norm(a.sectors[0][0]));
  double density_residual = 0.0;
  ordered_json sectors = ordered_json::array();
  sectors.push_back(sector_state_json(0, a.sectors[0]));
  for (int n = 1; n <= n_max; ++n) {
    total += a.sectors[n].squaredNorm();
    sector_norms.push_back(a.sectors[n].squaredNorm());
    const auto da = sector_born_density(gamma, a.sectors[n], n);
    const auto db = sector_born_density(gamma, b.sectors[n], n);
    density_residual = std::max(density_residual, (da - db).cwiseAbs().maxCoeff());
    sectors.push_back(sector_state_json(n, a.sectors[n]));
  }
  const double norm_residual = std::abs(total - state.total_norm_squared());
  write_json(rep.out_dir / "sectors.json", sectors);
  rep.attach("sectors_json", "sectors.json");

  rep.report["results"] = {{"n_max", n_max},
                           {"total_measure", gamma.total_measure()},
                           {"sector_norms", sector_norms},
                           {"norm_additivity_residual", norm_residual},
                           {"density_phase_residual", density_residual}};
  const bool ok = norm_residual <= tol && density_residual <= tol;
  return rep.finish(ok, ok ? "" : "sector norms or densities broke the direct-sum laws");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reproducible experiments on discrete configuration bundles"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  double tol_flag = std::numeric_limits<double>::quiet_NaN();
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--out", out_dir, "output directory (default: ./<experiment>)");
  app.add_option("--seed", seed, "random seed for the experiment");
  app.add_option("--tol", tol_flag, "tolerance override for the experiment's checks");

  using Runner = int (*)(const RunConfig&, Reporter&);
  const std::vector<std::pair<std::string, Runner>> experiments = {
      {"holonomy-audit", run_holonomy_audit},
      {"constructions-compare", run_constructions_compare},
      {"equivalence", run_equivalence},
      {"anyon-sweep", run_anyon_sweep},
      {"d1-boundary", run_d1_boundary},
      {"bohm-run", run_bohm_run},
      {"bohm-ensemble", run_bohm_ensemble},
      {"fock-demo", run_fock_demo},
  };
  for (const auto& [name, runner] : experiments) {
    (void)runner;
    app.add_subcommand(name, "run the " + name + " experiment");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string chosen = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg.values = parse_config_file(config_path);
    cfg.seed = seed;
    if (!std::isnan(tol_flag)) cfg.tol = tol_flag;
    const fs::path dir = out_dir.empty() ? fs::path(chosen) : fs::path(out_dir);
    Reporter rep(chosen, dir, cfg);
    for (const auto& [name, runner] : experiments)
      if (name == chosen) return runner(cfg, rep);
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

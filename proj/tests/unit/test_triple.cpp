#include "doctest.h"

#include <cmath>
#include <complex>

#include "qbundle/errors.hpp"
#include "qbundle/rng.hpp"
#include "qbundle/triple.hpp"

using namespace qbundle;

namespace {

LatticeBox box2d(int w, int h) {
  LatticeBox b;
  b.dim = 2;
  b.sides = {w, h};
  return b;
}

LatticeBox chain(int n) {
  LatticeBox b;
  b.dim = 1;
  b.sides = {n};
  return b;
}

Eigen::VectorXcd random_state(int dim, Rng& rng) {
  Eigen::VectorXcd psi(dim);
  for (int i = 0; i < dim; ++i) psi[i] = cplx(rng.gaussian(), rng.gaussian());
  psi.normalize();
  return psi;
}

QuantumTriple fermionic_triple(const ConfigGraphPair& pair, std::uint64_t seed) {
  const auto b = bundle_from_character(pair, SnCharacter::alternating);
  const auto v = potential_on_quotient(pair, PotentialKind::onsite_random, seed, 0.7);
  return make_bundle_triple(b, v, PhysicalParams{});
}

}  // namespace

TEST_CASE("pvm axioms and weights") {
  PVM q;
  q.dim = 4;
  q.labels = {"a", "b"};
  q.cells = {{0, 2}, {1, 3}};
  q.validate();
  CHECK(q.outcomes() == 2);
  CHECK(q.cell_of_label("b") == 1);
  CHECK(q.cell_of_label("zz") == -1);

  const Eigen::MatrixXcd p0 = q.projector(0);
  CHECK((p0 * p0 - p0).norm() < 1e-15);
  CHECK((p0 - p0.adjoint()).norm() < 1e-15);
  CHECK((q.projector(0) + q.projector(1) - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-15);

  Rng rng(41);
  const auto psi = random_state(4, rng);
  const Eigen::VectorXd w = q.weights(psi);
  CHECK(w.minCoeff() >= 0.0);
  CHECK(std::abs(w.sum() - 1.0) < 1e-12);

  PVM overlapping = q;
  overlapping.cells = {{0, 2}, {2, 3}};
  CHECK_THROWS_AS(overlapping.validate(), ShapeError);
  PVM incomplete = q;
  incomplete.cells = {{0}, {1}};
  CHECK_THROWS_AS(incomplete.validate(), ShapeError);

  const PVM byv = pvm_by_quotient_vertex(3, 2);
  byv.validate();
  CHECK(byv.dim == 6);
  CHECK(byv.cells[1] == std::vector<int>{2, 3});
}

TEST_CASE("verify accepts the identity conjugation and rejects mismatches") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  const auto t = fermionic_triple(pair, 5);
  t.validate();

  const int n = t.dim;
  const auto check = verify_equivalence(t, t, Eigen::MatrixXcd::Identity(n, n), 1e-12);
  CHECK(check.equivalent);
  CHECK(check.witness.unitarity_residual < 1e-14);
  CHECK(check.witness.h_residual < 1e-14);
  CHECK(check.witness.max_q_residual() < 1e-14);

  // conjugating by diagonal phases preserves both H spectrum and the PVM
  Rng rng(42);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) u(i, i) = std::exp(cplx(0, rng.uniform(0, 2 * M_PI)));
  QuantumTriple t2 = t;
  t2.H = u * t.H * u.adjoint();
  CHECK(verify_equivalence(t, t2, u, 1e-12).equivalent);
  CHECK_FALSE(verify_equivalence(t, t2, Eigen::MatrixXcd::Identity(n, n), 1e-12).equivalent);

  QuantumTriple shrunk = t;
  shrunk.dim = n - 1;
  shrunk.H = t.H.topLeftCorner(n - 1, n - 1);
  CHECK_THROWS_AS(verify_equivalence(t, shrunk, u, 1e-12), ShapeError);
}

TEST_CASE("solver recovers diagonal conjugations up to a global phase") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  const auto t = fermionic_triple(pair, 6);
  const int n = t.dim;

  Rng rng(43);
  Eigen::MatrixXcd u0 = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) u0(i, i) = std::exp(cplx(0, rng.uniform(0, 2 * M_PI)));
  QuantumTriple t2 = t;
  t2.H = u0 * t.H * u0.adjoint();

  const auto report = solve_equivalence(t, t2, 1e-10);
  REQUIRE(report.status == SolveStatus::Witness);
  REQUIRE(report.witness.has_value());
  CHECK(report.components == 1);
  CHECK_FALSE(report.ambiguous);
  CHECK(report.witness->h_residual < 1e-10);

  const cplx phase = report.witness->U(0, 0) / u0(0, 0);
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-10);
  CHECK((report.witness->U - phase * u0).norm() < 1e-8);
}

TEST_CASE("solver certifies diagonal and magnitude obstructions") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  const auto t = fermionic_triple(pair, 7);

  QuantumTriple bad_diag = t;
  bad_diag.H(0, 0) += 0.5;
  const auto r1 = solve_equivalence(t, bad_diag, 1e-10);
  CHECK(r1.status == SolveStatus::NoEquivalence);
  CHECK(!r1.obstruction.empty());

  QuantumTriple bad_mag = t;
  // scale one coupling, keeping hermiticity
  bool scaled = false;
  for (int i = 0; i < t.dim && !scaled; ++i)
    for (int j = i + 1; j < t.dim && !scaled; ++j)
      if (std::abs(t.H(i, j)) > 1e-6) {
        bad_mag.H(i, j) *= 2.0;
        bad_mag.H(j, i) = std::conj(bad_mag.H(i, j));
        scaled = true;
      }
  REQUIRE(scaled);
  const auto r2 = solve_equivalence(t, bad_mag, 1e-10);
  CHECK(r2.status == SolveStatus::NoEquivalence);
  CHECK(!r2.obstruction.empty());
}

TEST_CASE("solver declines PVM cells of rank above one") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  const auto wide = exterior_power_bundle(pair, 3);  // rank 3 fibers
  REQUIRE(wide.rank == 3);
  const Eigen::VectorXd v = Eigen::VectorXd::Zero(pair.quotient.num_vertices);
  const auto t = make_bundle_triple(wide, v, PhysicalParams{});
  const auto report = solve_equivalence(t, t, 1e-10);
  CHECK(report.status == SolveStatus::Unsupported);
}

TEST_CASE("subspace bases are orthonormal and carry the exchange symmetry") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  const auto perms = Permutation::all(2);
  for (Symmetry kind : {Symmetry::anti, Symmetry::sym}) {
    const auto basis = symmetric_subspace_basis(pair, kind);
    CHECK(basis.B.cols() == pair.quotient.num_vertices);
    CHECK((basis.B.adjoint() * basis.B -
           Eigen::MatrixXcd::Identity(basis.B.cols(), basis.B.cols()))
              .norm() < 1e-12);
    for (int c = 0; c < basis.B.cols(); ++c)
      for (int v : pair.fibers[basis.column_orbit[c]])
        for (const auto& s : perms) {
          const double chi = kind == Symmetry::anti ? s.sign() : 1.0;
          const int moved = pair.ordered.permuted_vertex(v, s);
          CHECK(std::abs(basis.B(moved, c) - chi * basis.B(v, c)) < 1e-13);
        }
  }
}

TEST_CASE("subspace triples demand symmetric potentials") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  const auto v = potential_on_ordered(pair, PotentialKind::onsite_random, 9, 0.5);
  const auto t = make_subspace_triple(pair, v, PhysicalParams{}, Symmetry::anti);
  t.validate();
  CHECK((t.H - t.H.adjoint()).norm() < 1e-12);

  Eigen::VectorXd skew = v;
  skew[1] += 1.0;  // breaks exchange symmetry at one ordered vertex
  CHECK_THROWS_AS(make_subspace_triple(pair, skew, PhysicalParams{}, Symmetry::anti),
                  SymmetryError);
}

TEST_CASE("named potentials are exchange symmetric and compatible across levels") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  for (PotentialKind kind : {PotentialKind::zero, PotentialKind::onsite_random,
                             PotentialKind::pairwise}) {
    const auto vo = potential_on_ordered(pair, kind, 17, 0.8);
    const auto vq = potential_on_quotient(pair, kind, 17, 0.8);
    const auto swap = Permutation::transposition(2, 1, 2);
    for (int v = 0; v < pair.ordered.graph.num_vertices; ++v)
      CHECK(vo[v] == doctest::Approx(vo[pair.ordered.permuted_vertex(v, swap)]).epsilon(1e-14));
    for (int q = 0; q < pair.quotient.num_vertices; ++q)
      CHECK(vq[q] == doctest::Approx(vo[pair.canonical_rep(q)]).epsilon(1e-14));
  }
  // frozen pairwise value: neighboring particles at distance spacing = 1
  const auto vq = potential_on_quotient(pair, PotentialKind::pairwise, 17, 0.8);
  const int q01 = pair.quotient_vertex_of({0, 1});
  REQUIRE(q01 >= 0);
  CHECK(vq[q01] == doctest::Approx(0.8 / 2.0).epsilon(1e-14));
}

TEST_CASE("evolution: dense and krylov propagators agree and conserve norm") {
  Rng rng(44);
  const int n = 40;
  const Eigen::MatrixXcd u = rng.haar_unitary(n);
  Eigen::VectorXd evals(n);
  for (int i = 0; i < n; ++i) evals[i] = rng.uniform(-2, 2);
  const Eigen::MatrixXcd h = u * evals.asDiagonal() * u.adjoint();

  QuantumTriple t;
  t.dim = n;
  t.H = 0.5 * (h + h.adjoint());
  t.Q = pvm_by_quotient_vertex(n, 1);

  const auto psi = random_state(n, rng);
  const PhysicalParams pp;
  const auto dense = evolve(t, psi, 1.3, pp);
  CHECK(std::abs(dense.norm() - 1.0) < 1e-12);

  const auto krylov = evolve_krylov(t.H, psi, 1.3, pp.hbar, 1e-12);
  CHECK((dense - krylov).norm() < 1e-8);

  // semigroup property of the cached propagator
  const Propagator prop(t, pp);
  const auto two_step = prop.apply(prop.apply(psi, 0.6), 0.7);
  CHECK((dense - two_step).norm() < 1e-11);
  CHECK((prop.apply(psi, 1.3) - dense).norm() < 1e-13);
}

TEST_CASE("born weights follow the evolved state") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  const auto t = fermionic_triple(pair, 10);
  Rng rng(45);
  const auto psi = random_state(t.dim, rng);
  const auto rho = born_distribution(t, psi, 0.9, PhysicalParams{});
  CHECK(rho.minCoeff() >= 0.0);
  CHECK(std::abs(rho.sum() - 1.0) < 1e-10);
  const auto direct = t.Q.weights(evolve(t, psi, 0.9, PhysicalParams{}));
  CHECK((rho - direct).norm() < 1e-12);
}

TEST_CASE("velocity form telescopes to the observable drift") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  const auto t = fermionic_triple(pair, 11);
  Rng rng(46);
  const auto psi = random_state(t.dim, rng);
  Eigen::VectorXd f(t.Q.outcomes());
  for (int c = 0; c < f.size(); ++c) f[c] = rng.uniform(-1, 1);

  const auto form = velocity_form(t, psi, f, PhysicalParams{});
  double telescoped = 0.0;
  const auto weights = t.Q.weights(psi);
  // sum of weight * cell-average equals d<f>/dt by the Ehrenfest identity
  for (int c = 0; c < f.size(); ++c) {
    REQUIRE(form.defined[c]);
    telescoped += weights[c] * form.values[c];
  }

  const double h = 1e-5;
  const auto plus = t.Q.weights(evolve(t, psi, h, PhysicalParams{}));
  const auto minus = t.Q.weights(evolve(t, psi, -h, PhysicalParams{}));
  double drift = 0.0;
  for (int c = 0; c < f.size(); ++c) drift += f[c] * (plus[c] - minus[c]) / (2 * h);
  CHECK(std::abs(telescoped - drift) < 1e-6);

  // a state supported on one cell leaves the others undefined
  Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(t.dim);
  delta[0] = 1.0;
  const auto sparse = velocity_form(t, delta, f, PhysicalParams{});
  CHECK(sparse.defined[0]);
  bool any_undefined = false;
  for (int c = 1; c < f.size(); ++c) any_undefined = any_undefined || !sparse.defined[c];
  CHECK(any_undefined);
}

TEST_CASE("hard-core chain: frozen three-site matrices") {
  const auto report = d1_boundary_demo(chain(3), Eigen::VectorXd::Zero(3), PhysicalParams{});
  // quotient configs in lexicographic order:
  // (0,0),(0,1),(0,2),(1,1),(1,2),(2,2); kinetic prefactor 1/2
  const double r2 = std::sqrt(2.0) / 2.0;
  Eigen::MatrixXcd closed(6, 6);
  closed << 1, -r2, 0, 0, 0, 0,
      -r2, 1.5, -0.5, -r2, 0, 0,
      0, -0.5, 1, 0, -0.5, 0,
      0, -r2, 0, 2, -r2, 0,
      0, 0, -0.5, -r2, 1.5, -r2,
      0, 0, 0, 0, -r2, 1;
  CHECK((report.closed_domain - closed).norm() < 1e-13);

  Eigen::MatrixXcd open(3, 3);
  open << 1.5, -0.5, 0, -0.5, 1, -0.5, 0, -0.5, 1.5;
  CHECK((report.open_domain - open).norm() < 1e-13);

  CHECK(report.anti_deviation < 1e-12);
  CHECK(report.sym_deviation < 1e-12);
}

TEST_CASE("hard-core chain: six sites with a potential") {
  Eigen::VectorXd site_v(6);
  site_v << 0.3, -0.1, 0.7, 0.0, -0.4, 0.2;
  const auto report = d1_boundary_demo(chain(6), site_v, PhysicalParams{});
  CHECK(report.anti_deviation < 1e-10);
  CHECK(report.sym_deviation < 1e-10);
  CHECK(report.anti_spectrum.size() == 15);
  CHECK(report.sym_spectrum.size() == 21);
  for (int i = 1; i < report.anti_spectrum.size(); ++i)
    CHECK(report.anti_spectrum[i] >= report.anti_spectrum[i - 1]);
}

TEST_CASE("spectrum is sorted and matches a frozen two-level case") {
  Eigen::MatrixXcd h(2, 2);
  h << 0, 1, 1, 0;
  const auto s = spectrum(h);
  CHECK(s[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-14));
}

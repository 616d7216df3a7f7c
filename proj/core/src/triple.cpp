#include "qbundle/triple.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <unordered_map>

#include "qbundle/errors.hpp"
#include "qbundle/rng.hpp"

namespace qbundle {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

long factorial_of(int n) {
  long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

Eigen::MatrixXcd PVM::projector(int cell) const {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j : cells.at(cell)) p(j, j) = 1.0;
  return p;
}

void PVM::validate() const {
  if (labels.size() != cells.size()) throw ShapeError("PVM label/cell count mismatch");
  std::vector<int> seen(dim, 0);
  for (const auto& cell : cells) {
    if (cell.empty()) throw ShapeError("PVM cell is empty");
    for (int j : cell) {
      if (j < 0 || j >= dim) throw ShapeError("PVM index out of range");
      if (seen[j]++) throw ShapeError("PVM cells overlap");
    }
  }
  for (int j = 0; j < dim; ++j)
    if (!seen[j]) throw ShapeError("PVM cells do not cover every index");
}

Eigen::VectorXd PVM::weights(const Eigen::VectorXcd& psi) const {
  if (psi.size() != dim) throw ShapeError("state size differs from PVM dimension");
  Eigen::VectorXd w(outcomes());
  for (int c = 0; c < outcomes(); ++c) {
    double acc = 0;
    for (int j : cells[c]) acc += std::norm(psi[j]);
    w[c] = acc;
  }
  return w;
}

int PVM::cell_of_label(const std::string& label) const {
  for (int c = 0; c < outcomes(); ++c)
    if (labels[c] == label) return c;
  return -1;
}

PVM pvm_by_quotient_vertex(int num_vertices, int rank) {
  PVM q;
  q.dim = num_vertices * rank;
  q.labels.reserve(num_vertices);
  q.cells.reserve(num_vertices);
  for (int v = 0; v < num_vertices; ++v) {
    q.labels.push_back(std::to_string(v));
    std::vector<int> cell(rank);
    for (int s = 0; s < rank; ++s) cell[s] = v * rank + s;
    q.cells.push_back(std::move(cell));
  }
  return q;
}

void QuantumTriple::validate(double tol) const {
  if (H.rows() != dim || H.cols() != dim) throw ShapeError("Hamiltonian shape mismatch");
  if (Q.dim != dim) throw ShapeError("PVM dimension differs from triple dimension");
  Q.validate();
  const double herm = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) throw ShapeError("Hamiltonian is not Hermitian within tolerance");
}

namespace {

// U P1 U^-1 - P2 for coordinate projectors, computed from the relevant
// columns of U so the check stays at dim^2 per cell.
double cell_residual(const Eigen::MatrixXcd& U, const std::vector<int>& cell1,
                     const std::vector<int>& cell2) {
  const auto dim = U.rows();
  Eigen::MatrixXcd a(dim, static_cast<Eigen::Index>(cell1.size()));
  for (Eigen::Index k = 0; k < a.cols(); ++k) a.col(k) = U.col(cell1[k]);
  Eigen::MatrixXcd m = a * a.adjoint();
  for (int j : cell2) m(j, j) -= 1.0;
  return m.norm();
}

}  // namespace

EquivalenceCheck verify_equivalence(const QuantumTriple& t1, const QuantumTriple& t2,
                                    const Eigen::MatrixXcd& U, double tol) {
  if (t1.dim != t2.dim) throw ShapeError("triples have different dimensions");
  if (U.rows() != t1.dim || U.cols() != t1.dim) throw ShapeError("witness shape mismatch");
  if (t1.Q.outcomes() != t2.Q.outcomes()) throw ShapeError("PVMs have different cell counts");

  EquivalenceCheck out;
  auto& w = out.witness;
  w.U = U;
  w.unitarity_residual =
      (U.adjoint() * U - Eigen::MatrixXcd::Identity(t1.dim, t1.dim)).norm();
  w.h_residual = (U * t1.H * U.adjoint() - t2.H).norm();
  w.q_residuals.resize(t1.Q.outcomes());
  for (int c = 0; c < t1.Q.outcomes(); ++c) {
    const int c2 = t2.Q.cell_of_label(t1.Q.labels[c]);
    if (c2 < 0) throw ShapeError("cell label missing from second triple: " + t1.Q.labels[c]);
    w.q_residuals[c] = cell_residual(U, t1.Q.cells[c], t2.Q.cells[c2]);
  }
  out.equivalent = w.unitarity_residual <= tol && w.h_residual <= tol &&
                   w.max_q_residual() <= tol;
  return out;
}

SolveReport solve_equivalence(const QuantumTriple& t1, const QuantumTriple& t2, double tol) {
  SolveReport report;
  if (t1.Q.outcomes() != t2.Q.outcomes() || t1.dim != t2.dim) {
    report.obstruction = "cell count or dimension mismatch";
    return report;
  }

  const int cells = t1.Q.outcomes();
  std::vector<int> idx1(cells), idx2(cells);
  for (int c = 0; c < cells; ++c) {
    const int c2 = t2.Q.cell_of_label(t1.Q.labels[c]);
    if (c2 < 0) {
      report.obstruction = "cell label missing from second triple: " + t1.Q.labels[c];
      return report;
    }
    if (t1.Q.cells[c].size() != t2.Q.cells[c2].size()) {
      report.obstruction = "cell rank mismatch at label " + t1.Q.labels[c];
      return report;
    }
    if (t1.Q.cells[c].size() != 1) {
      report.status = SolveStatus::Unsupported;
      report.obstruction = "cells of rank above 1 are not handled by the phase solver";
      return report;
    }
    idx1[c] = t1.Q.cells[c][0];
    idx2[c] = t2.Q.cells[c2][0];
  }

  // Couplings in the shared cell order.
  Eigen::MatrixXcd h1(cells, cells), h2(cells, cells);
  for (int a = 0; a < cells; ++a)
    for (int b = 0; b < cells; ++b) {
      h1(a, b) = t1.H(idx1[a], idx1[b]);
      h2(a, b) = t2.H(idx2[a], idx2[b]);
    }

  const double scale = std::max({1.0, h1.cwiseAbs().maxCoeff(), h2.cwiseAbs().maxCoeff()});
  const double eq_tol = tol * scale;
  // Couplings far above the equality tolerance carry usable phase
  // information; anything below is treated as zero on both sides.
  const double floor = std::max(1e3 * tol, 1e-8) * scale;

  for (int a = 0; a < cells; ++a) {
    if (std::abs(h1(a, a) - h2(a, a)) > eq_tol) {
      report.obstruction = "diagonal mismatch at cell " + t1.Q.labels[a];
      return report;
    }
    for (int b = a + 1; b < cells; ++b)
      if (std::abs(std::abs(h1(a, b)) - std::abs(h2(a, b))) > eq_tol) {
        report.obstruction = "coupling magnitude mismatch between cells " + t1.Q.labels[a] +
                             " and " + t1.Q.labels[b];
        return report;
      }
  }

  // Spanning forest of the coupling graph; one free phase per component.
  std::vector<std::complex<double>> phase(cells, 0.0);
  std::vector<int> order;
  order.reserve(cells);
  report.components = 0;
  for (int root = 0; root < cells; ++root) {
    if (phase[root] != 0.0) continue;
    ++report.components;
    phase[root] = 1.0;
    order.clear();
    order.push_back(root);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const int a = order[head];
      for (int b = 0; b < cells; ++b) {
        if (phase[b] != 0.0 || std::abs(h1(a, b)) <= floor) continue;
        // want phase_b * h1(b,a) * conj(phase_a) = h2(b,a)
        std::complex<double> p = h2(b, a) * phase[a] / h1(b, a);
        phase[b] = p / std::abs(p);
        order.push_back(b);
      }
    }
  }
  report.ambiguous = report.components > 1;

  for (int a = 0; a < cells; ++a)
    for (int b = 0; b < cells; ++b) {
      if (a == b || std::abs(h1(a, b)) <= floor) continue;
      if (std::abs(phase[a] * h1(a, b) * std::conj(phase[b]) - h2(a, b)) > eq_tol) {
        report.obstruction = "cycle phase cannot be matched on the coupling between cells " +
                             t1.Q.labels[a] + " and " + t1.Q.labels[b];
        return report;
      }
    }

  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(t1.dim, t1.dim);
  for (int c = 0; c < cells; ++c) U(idx2[c], idx1[c]) = phase[c];

  auto check = verify_equivalence(t1, t2, U, tol);
  if (!check.equivalent) {
    report.obstruction = "phase propagation succeeded but the residual check failed";
    return report;
  }
  report.status = SolveStatus::Witness;
  report.witness = std::move(check.witness);
  return report;
}

QuantumTriple make_bundle_triple(const DiscreteBundle& b, const Eigen::VectorXd& potential,
                                 const PhysicalParams& params) {
  QuantumTriple t;
  t.H = connection_laplacian(b, potential, params);
  t.dim = static_cast<int>(t.H.rows());
  t.Q = pvm_by_quotient_vertex(b.graph->num_vertices, b.rank);
  return t;
}

SubspaceBasis symmetric_subspace_basis(const ConfigGraphPair& pair, Symmetry kind) {
  const int n = pair.particles();
  const long full = factorial_of(n);
  const int ordered_dim = pair.ordered.graph.num_vertices;

  std::vector<std::pair<int, std::vector<std::complex<double>>>> columns;
  for (std::size_t qv = 0; qv < pair.fibers.size(); ++qv) {
    const auto& fiber = pair.fibers[qv];
    if (kind == Symmetry::anti && static_cast<long>(fiber.size()) != full)
      continue;  // antisymmetrization kills orbits with repeated sites
    std::vector<std::complex<double>> col(fiber.size());
    const double norm = 1.0 / std::sqrt(static_cast<double>(fiber.size()));
    for (std::size_t i = 0; i < fiber.size(); ++i) {
      const double chi = kind == Symmetry::anti ? pair.alignment(fiber[i]).sign() : 1.0;
      col[i] = chi * norm;
    }
    columns.emplace_back(static_cast<int>(qv), std::move(col));
  }

  SubspaceBasis basis;
  basis.B = Eigen::MatrixXcd::Zero(ordered_dim, static_cast<Eigen::Index>(columns.size()));
  basis.column_orbit.reserve(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& fiber = pair.fibers[columns[c].first];
    for (std::size_t i = 0; i < fiber.size(); ++i)
      basis.B(fiber[i], static_cast<Eigen::Index>(c)) = columns[c].second[i];
    basis.column_orbit.push_back(columns[c].first);
  }
  return basis;
}

namespace {

void require_symmetric_potential(const ConfigGraphPair& pair, const Eigen::VectorXd& v) {
  const int n = pair.particles();
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  for (int i = 1; i < n; ++i) {
    const Permutation tau = Permutation::transposition(n, i, i + 1);
    for (int vid = 0; vid < pair.ordered.graph.num_vertices; ++vid) {
      const int wid = pair.ordered.permuted_vertex(vid, tau);
      if (wid < 0) throw SymmetryError("permuted configuration missing from the graph");
      if (std::abs(v[vid] - v[wid]) > 1e-12 * scale)
        throw SymmetryError("potential is not permutation-symmetric");
    }
  }
}

}  // namespace

QuantumTriple make_subspace_triple(const ConfigGraphPair& pair, const Eigen::VectorXd& potential,
                                   const PhysicalParams& params, Symmetry kind) {
  if (potential.size() != pair.ordered.graph.num_vertices)
    throw ShapeError("potential size differs from the ordered vertex count");
  require_symmetric_potential(pair, potential);

  const DiscreteBundle flat = trivial_bundle(pair.ordered.graph, 1);
  const Eigen::MatrixXcd h_ord = connection_laplacian(flat, potential, params);
  const SubspaceBasis basis = symmetric_subspace_basis(pair, kind);

  QuantumTriple t;
  t.dim = static_cast<int>(basis.B.cols());
  Eigen::MatrixXcd h = basis.B.adjoint() * h_ord * basis.B;
  t.H = 0.5 * (h + h.adjoint().eval());
  t.Q.dim = t.dim;
  for (int c = 0; c < t.dim; ++c) {
    t.Q.labels.push_back(std::to_string(basis.column_orbit[c]));
    t.Q.cells.push_back({c});
  }
  return t;
}

Eigen::VectorXcd evolve(const QuantumTriple& t, const Eigen::VectorXcd& psi, double time,
                        const PhysicalParams& params) {
  if (psi.size() != t.dim) throw ShapeError("state size differs from triple dimension");
  if (std::abs(psi.norm() - 1.0) > 1e-9)
    std::cerr << "evolve: state is not normalized (norm " << psi.norm() << ")\n";
  if (time == 0.0) return psi;
  if (t.dim <= 3000) {
    Propagator p(t, params);
    return p.apply(psi, time);
  }
  return evolve_krylov(t.H, psi, time, params.hbar);
}

Propagator::Propagator(const QuantumTriple& t, const PhysicalParams& params)
    : hbar_(params.hbar) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t.H);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

Eigen::VectorXcd Propagator::apply(const Eigen::VectorXcd& psi, double time) const {
  Eigen::VectorXcd coeff = evecs_.adjoint() * psi;
  for (Eigen::Index k = 0; k < coeff.size(); ++k)
    coeff[k] *= std::exp(-kI * evals_[k] * time / hbar_);
  return evecs_ * coeff;
}

namespace {

// Propagate beta*e1 through exp(-i T dt / hbar) for a real symmetric
// tridiagonal T given by its diagonal and subdiagonal.
Eigen::VectorXcd tridiag_exp_e1(const std::vector<double>& alpha, const std::vector<double>& beta,
                                int m, double dt, double hbar, double scale) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(m);
  const Eigen::VectorXd first = es.eigenvectors().row(0);
  for (int k = 0; k < m; ++k) {
    const std::complex<double> w = std::exp(-kI * es.eigenvalues()[k] * dt / hbar);
    u += w * first[k] * es.eigenvectors().col(k).cast<std::complex<double>>();
  }
  return scale * u;
}

}  // namespace

Eigen::VectorXcd evolve_krylov(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& psi,
                               double time, double hbar, double tol) {
  if (time == 0.0 || psi.norm() == 0.0) return psi;
  const int dim = static_cast<int>(H.rows());
  const int m_max = std::min(60, dim);

  Eigen::VectorXcd current = psi;
  double remaining = time;
  const double direction = time > 0 ? 1.0 : -1.0;

  while (std::abs(remaining) > 0.0) {
    const double beta0 = current.norm();
    // Lanczos with full reorthogonalization.
    std::vector<Eigen::VectorXcd> v;
    std::vector<double> alpha, beta;
    v.push_back(current / beta0);
    int m = 0;
    bool happy = false;
    while (m < m_max) {
      Eigen::VectorXcd w = H * v[m];
      const double a = std::real(v[m].dot(w));
      alpha.push_back(a);
      w -= a * v[m];
      if (m > 0) w -= beta[m - 1] * v[m - 1];
      for (const auto& prev : v) w -= prev.dot(w) * prev;
      const double b = w.norm();
      ++m;
      if (b < 1e-14 * std::max(1.0, std::abs(a))) {
        happy = true;  // invariant subspace reached; the small problem is exact
        break;
      }
      if (m < m_max) {
        beta.push_back(b);
        v.push_back(w / b);
      }
    }

    double dt = remaining;
    Eigen::VectorXcd u;
    for (int attempt = 0;; ++attempt) {
      u = tridiag_exp_e1(alpha, beta, m, dt, hbar, beta0);
      if (happy || m <= 8) break;
      // Error gauge: difference against the propagation truncated 6 steps
      // earlier in the same Krylov basis.
      Eigen::VectorXcd u_low = tridiag_exp_e1(alpha, beta, m - 6, dt, hbar, beta0);
      double err = 0;
      for (int i = 0; i < m; ++i) {
        const std::complex<double> low = i < m - 6 ? u_low[i] : 0.0;
        err += std::norm(u[i] - low);
      }
      err = std::sqrt(err);
      if (err <= tol * std::max(1.0, beta0) || attempt > 60) break;
      dt *= 0.5;
    }

    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(dim);
    for (int i = 0; i < m; ++i) next += u[i] * v[i];
    current = next;
    remaining -= dt;
    if (direction * remaining <= 0.0) break;
  }
  return current;
}

Eigen::VectorXd born_distribution(const QuantumTriple& t, const Eigen::VectorXcd& psi,
                                  double time, const PhysicalParams& params) {
  const Eigen::VectorXcd at_time = time == 0.0 ? psi : evolve(t, psi, time, params);
  return t.Q.weights(at_time);
}

VelocityForm velocity_form(const QuantumTriple& t, const Eigen::VectorXcd& psi,
                           const Eigen::VectorXd& f, const PhysicalParams& params) {
  if (psi.size() != t.dim) throw ShapeError("state size differs from triple dimension");
  if (f.size() != t.Q.outcomes()) throw ShapeError("test function size differs from cell count");

  Eigen::VectorXd f_index(t.dim);
  for (int c = 0; c < t.Q.outcomes(); ++c)
    for (int j : t.Q.cells[c]) f_index[j] = f[c];

  const Eigen::VectorXcd fc = f_index.cast<std::complex<double>>();
  const Eigen::VectorXcd fpsi = fc.cwiseProduct(psi);
  const Eigen::VectorXcd hpsi = t.H * psi;
  const Eigen::VectorXcd comm = t.H * fpsi - fc.cwiseProduct(hpsi);

  VelocityForm out;
  out.values = Eigen::VectorXd::Zero(t.Q.outcomes());
  out.defined.assign(t.Q.outcomes(), true);
  for (int c = 0; c < t.Q.outcomes(); ++c) {
    double den = 0;
    std::complex<double> num = 0;
    for (int j : t.Q.cells[c]) {
      den += std::norm(psi[j]);
      num += std::conj(psi[j]) * comm[j];
    }
    if (den < 1e-14) {
      out.defined[c] = false;
      continue;
    }
    out.values[c] = std::real(kI / params.hbar * num) / den;
  }
  return out;
}

Eigen::VectorXd spectrum(const Eigen::MatrixXcd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return es.eigenvalues();
}

D1BoundaryReport d1_boundary_demo(const LatticeBox& box, const Eigen::VectorXd& site_potential,
                                  const PhysicalParams& params) {
  if (box.dim != 1) throw DimensionError("the boundary demo needs a 1-dimensional box");
  if (site_potential.size() != box.site_count())
    throw ShapeError("site potential size differs from the site count");

  ConfigGraphPair pair = build_config_pair(box, 2, /*allow_collisions=*/true);
  const int ordered_dim = pair.ordered.graph.num_vertices;
  Eigen::VectorXd v_ord(ordered_dim);
  for (int vid = 0; vid < ordered_dim; ++vid) {
    double acc = 0;
    for (int site : pair.ordered.configs[vid]) acc += site_potential[site];
    v_ord[vid] = acc;
  }

  D1BoundaryReport report;
  report.anti = make_subspace_triple(pair, v_ord, params, Symmetry::anti);
  report.sym = make_subspace_triple(pair, v_ord, params, Symmetry::sym);

  const DiscreteBundle flat = trivial_bundle(pair.ordered.graph, 1);
  const Eigen::MatrixXcd h_ord = connection_laplacian(flat, v_ord, params);

  // Fundamental-domain matrices assembled from canonical representatives, in
  // quotient vertex order to mirror the subspace cell order.
  std::vector<int> closed_reps, open_reps;
  std::vector<bool> diagonal_orbit;
  for (std::size_t qv = 0; qv < pair.fibers.size(); ++qv) {
    const int rep = pair.canonical_rep(static_cast<int>(qv));
    const auto& cfg = pair.ordered.configs[rep];
    const bool diag = cfg[0] == cfg[1];
    closed_reps.push_back(rep);
    diagonal_orbit.push_back(diag);
    if (!diag) open_reps.push_back(rep);
  }

  const auto open_n = static_cast<Eigen::Index>(open_reps.size());
  report.open_domain.resize(open_n, open_n);
  for (Eigen::Index a = 0; a < open_n; ++a)
    for (Eigen::Index b = 0; b < open_n; ++b)
      report.open_domain(a, b) = h_ord(open_reps[a], open_reps[b]);

  const auto closed_n = static_cast<Eigen::Index>(closed_reps.size());
  report.closed_domain.resize(closed_n, closed_n);
  for (Eigen::Index a = 0; a < closed_n; ++a)
    for (Eigen::Index b = 0; b < closed_n; ++b) {
      const bool boundary_coupling = diagonal_orbit[a] != diagonal_orbit[b];
      report.closed_domain(a, b) =
          h_ord(closed_reps[a], closed_reps[b]) * (boundary_coupling ? std::sqrt(2.0) : 1.0);
    }

  report.anti_spectrum = spectrum(report.anti.H);
  report.open_spectrum = spectrum(report.open_domain);
  report.sym_spectrum = spectrum(report.sym.H);
  report.closed_spectrum = spectrum(report.closed_domain);
  report.anti_deviation = (report.anti_spectrum - report.open_spectrum).cwiseAbs().maxCoeff();
  report.sym_deviation = (report.sym_spectrum - report.closed_spectrum).cwiseAbs().maxCoeff();
  return report;
}

namespace {

double config_potential(const LatticeBox& box, const std::vector<int>& config,
                        PotentialKind kind, const std::vector<double>& site_values,
                        double strength) {
  switch (kind) {
    case PotentialKind::zero:
      return 0.0;
    case PotentialKind::onsite_random: {
      double acc = 0;
      for (int site : config) acc += site_values[site];
      return acc;
    }
    case PotentialKind::pairwise: {
      double acc = 0;
      for (std::size_t j = 0; j < config.size(); ++j)
        for (std::size_t k = j + 1; k < config.size(); ++k) {
          const auto cj = box.site_coords(config[j]);
          const auto ck = box.site_coords(config[k]);
          double r2 = 0;
          for (int axis = 0; axis < box.dim; ++axis) {
            int delta = std::abs(cj[axis] - ck[axis]);
            if (!box.periodic.empty() && box.periodic[axis])
              delta = std::min(delta, box.sides[axis] - delta);
            r2 += static_cast<double>(delta) * delta * box.spacing * box.spacing;
          }
          acc += strength / (1.0 + r2);
        }
      return acc;
    }
  }
  return 0.0;
}

std::vector<double> draw_site_values(const LatticeBox& box, PotentialKind kind,
                                     std::uint64_t seed, double strength) {
  std::vector<double> values;
  if (kind == PotentialKind::onsite_random) {
    Rng rng(seed);
    values.resize(static_cast<std::size_t>(box.site_count()));
    for (auto& x : values) x = strength * rng.uniform(-1.0, 1.0);
  }
  return values;
}

}  // namespace

Eigen::VectorXd potential_on_ordered(const ConfigGraphPair& pair, PotentialKind kind,
                                     std::uint64_t seed, double strength) {
  const auto site_values = draw_site_values(pair.box(), kind, seed, strength);
  Eigen::VectorXd v(pair.ordered.graph.num_vertices);
  for (int vid = 0; vid < pair.ordered.graph.num_vertices; ++vid)
    v[vid] = config_potential(pair.box(), pair.ordered.configs[vid], kind, site_values, strength);
  return v;
}

Eigen::VectorXd potential_on_quotient(const ConfigGraphPair& pair, PotentialKind kind,
                                      std::uint64_t seed, double strength) {
  const auto site_values = draw_site_values(pair.box(), kind, seed, strength);
  Eigen::VectorXd v(pair.quotient.num_vertices);
  for (int qv = 0; qv < pair.quotient.num_vertices; ++qv)
    v[qv] = config_potential(pair.box(), pair.quotient_configs[qv], kind, site_values, strength);
  return v;
}

}  // namespace qbundle

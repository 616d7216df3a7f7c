#pragma once
// Quantum triples: a finite state space, a Hermitian Hamiltonian, and a
// position observable given as a projection-valued measure over configuration
// cells. Builders produce the bundle triple (sections over the quotient
// graph) and the (anti)symmetric-subspace triple (functions on the ordered
// graph); the verifier and solver decide unitary equivalence of two triples.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbundle/bundle.hpp"
#include "qbundle/confspace.hpp"
#include "qbundle/params.hpp"

namespace qbundle {

// Projection-valued measure stored as a labeled partition of coordinate
// indices. Every observable built here projects onto coordinate subspaces,
// so cells are index lists; projector() materializes the dense matrix when a
// basis-free identity has to be checked.
struct PVM {
  int dim = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> cells;

  int outcomes() const { return static_cast<int>(cells.size()); }
  Eigen::MatrixXcd projector(int cell) const;
  // Throws ShapeError unless the cells partition 0..dim-1 and labels align.
  void validate() const;
  // <psi|Q(cell)|psi> for every cell; real and nonnegative by construction.
  Eigen::VectorXd weights(const Eigen::VectorXcd& psi) const;
  int cell_of_label(const std::string& label) const;  // -1 when absent
};

// One cell per quotient vertex, covering the vertex-major block layout used
// by connection_laplacian (indices v*rank .. v*rank+rank-1).
PVM pvm_by_quotient_vertex(int num_vertices, int rank);

struct QuantumTriple {
  int dim = 0;
  Eigen::MatrixXcd H;
  PVM Q;

  // H Hermitian and PVM axioms, both at the given tolerance.
  void validate(double tol = 1e-12) const;
};

// Residuals of a candidate conjugation between two triples.
struct EquivalenceWitness {
  Eigen::MatrixXcd U;
  double unitarity_residual = 0.0;
  double h_residual = 0.0;
  Eigen::VectorXd q_residuals;

  double max_q_residual() const {
    return q_residuals.size() ? q_residuals.maxCoeff() : 0.0;
  }
};

struct EquivalenceCheck {
  bool equivalent = false;
  EquivalenceWitness witness;
};

// Checks U H1 U^-1 = H2 and U Q1(cell) U^-1 = Q2(cell) for every cell,
// matching cells by label. Throws ShapeError on dimension or label-set
// mismatch; otherwise reports residuals and compares them against tol.
EquivalenceCheck verify_equivalence(const QuantumTriple& t1, const QuantumTriple& t2,
                                    const Eigen::MatrixXcd& U, double tol);

enum class SolveStatus { Witness, NoEquivalence, Unsupported };

// Outcome of the constructive equivalence search. On success the witness is
// populated; on failure the obstruction string names a concrete certificate
// (a magnitude mismatch, a diagonal mismatch, or a cycle whose phase cannot
// be matched). When the coupling graph is disconnected the per-component
// phase freedom is reported through `components` and `ambiguous`.
struct SolveReport {
  SolveStatus status = SolveStatus::NoEquivalence;
  std::optional<EquivalenceWitness> witness;
  std::string obstruction;
  int components = 1;
  bool ambiguous = false;
};

// Searches for a unitary conjugating t1 into t2 under the assumption that
// every PVM cell has rank 1: the unitary is then one phase per cell, fixed by
// propagating phases along a spanning tree of the graph whose edges are the
// nonzero off-diagonal couplings of H. Non-tree couplings are verified and a
// failed one is returned as a certified obstruction. Cells of rank above 1
// yield an Unsupported report rather than a heuristic.
SolveReport solve_equivalence(const QuantumTriple& t1, const QuantumTriple& t2, double tol);

// H = connection Laplacian of the bundle plus the on-vertex potential;
// Q(cell for quotient vertex v) = projection onto the fiber block over v.
QuantumTriple make_bundle_triple(const DiscreteBundle& b, const Eigen::VectorXd& potential,
                                 const PhysicalParams& params);

// Orthonormal basis of the (anti)symmetric subspace of functions on the
// ordered graph: one column per S_N-orbit, the (anti)symmetrized delta
// normalized by the square root of the orbit size. Orbits killed by
// antisymmetrization (repeated sites) contribute no column.
struct SubspaceBasis {
  Eigen::MatrixXcd B;             // ordered_dim x columns, orthonormal
  std::vector<int> column_orbit;  // quotient vertex of each column
};
SubspaceBasis symmetric_subspace_basis(const ConfigGraphPair& pair, Symmetry kind);

// Projects the ordered-graph Hamiltonian (hopping Laplacian + potential) onto
// the (anti)symmetric subspace. The potential is given per ordered vertex and
// must be permutation-symmetric (SymmetryError otherwise). Q(cell for
// quotient vertex v) = projection onto the basis column of v's orbit.
QuantumTriple make_subspace_triple(const ConfigGraphPair& pair, const Eigen::VectorXd& potential,
                                   const PhysicalParams& params, Symmetry kind);

// e^{-iHt/hbar} psi by dense spectral decomposition up to dimension 3000 and
// Krylov propagation beyond. Warns on stderr when psi is not normalized.
Eigen::VectorXcd evolve(const QuantumTriple& t, const Eigen::VectorXcd& psi, double time,
                        const PhysicalParams& params);

// Krylov (Lanczos) propagator with adaptive substepping; exposed separately
// so the two evolution paths can be compared directly.
Eigen::VectorXcd evolve_krylov(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& psi,
                               double time, double hbar, double tol = 1e-10);

// Caches the spectral decomposition for repeated propagation of one triple.
class Propagator {
 public:
  Propagator(const QuantumTriple& t, const PhysicalParams& params);
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double time) const;

 private:
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
  double hbar_;
};

// rho(cell) = <psi_t|Q(cell)|psi_t> after evolving psi to the given time.
Eigen::VectorXd born_distribution(const QuantumTriple& t, const Eigen::VectorXcd& psi,
                                  double time, const PhysicalParams& params);

// Cell-wise value of Re<psi|Q(cell)(i/hbar)[H, f]|psi> / <psi|Q(cell)|psi>
// where f acts as multiplication by f(cell) on each cell. Cells whose weight
// falls below 1e-14 are flagged undefined instead of divided.
struct VelocityForm {
  Eigen::VectorXd values;
  std::vector<bool> defined;
};
VelocityForm velocity_form(const QuantumTriple& t, const Eigen::VectorXcd& psi,
                           const Eigen::VectorXd& f, const PhysicalParams& params);

// Two hard-core particles on a 1-dimensional chain, collision vertices kept
// in the ordered graph. The antisymmetric subspace reproduces the spectrum of
// the fundamental-domain (a<b) matrix with the diagonal deleted; the
// symmetric subspace reproduces the closed-domain (a<=b) matrix whose
// diagonal-to-offdiagonal couplings carry weight sqrt(2). The site potential
// enters as V(config) = sum of per-site values.
struct D1BoundaryReport {
  QuantumTriple anti;
  QuantumTriple sym;
  Eigen::MatrixXcd open_domain;    // strict a<b matrix, full-grid degrees
  Eigen::MatrixXcd closed_domain;  // a<=b matrix with boundary weights
  Eigen::VectorXd anti_spectrum;
  Eigen::VectorXd open_spectrum;
  Eigen::VectorXd sym_spectrum;
  Eigen::VectorXd closed_spectrum;
  double anti_deviation = 0.0;
  double sym_deviation = 0.0;
};
D1BoundaryReport d1_boundary_demo(const LatticeBox& box, const Eigen::VectorXd& site_potential,
                                  const PhysicalParams& params);

// Sorted eigenvalues of a Hermitian matrix.
Eigen::VectorXd spectrum(const Eigen::MatrixXcd& H);

// Named closed-form potentials for experiments. `onsite_random` draws one
// value per lattice site from the seed; `pairwise` sums strength/(1+r^2) over
// particle pairs with minimal-image distances on periodic boxes. Both are
// permutation-symmetric by construction.
enum class PotentialKind { zero, onsite_random, pairwise };
Eigen::VectorXd potential_on_ordered(const ConfigGraphPair& pair, PotentialKind kind,
                                     std::uint64_t seed, double strength);
Eigen::VectorXd potential_on_quotient(const ConfigGraphPair& pair, PotentialKind kind,
                                      std::uint64_t seed, double strength);

}  // namespace qbundle

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbundle/confspace.hpp"
#include "qbundle/graph.hpp"
#include "qbundle/params.hpp"
#include "qbundle/perm.hpp"
#include "qbundle/rng.hpp"

namespace qbundle {

using cplx = std::complex<double>;

// Flat Hermitian vector bundle over a graph, discretized as one unitary per
// edge. Only the canonical orientation (tail < head) is stored; the reverse
// transport is the adjoint, so direction reversal is consistent by
// construction. The graph is referenced, not owned: it must outlive the
// bundle, and the stored content hash guards against mixing graphs.
struct DiscreteBundle {
  const Graph* graph = nullptr;
  std::uint64_t graph_hash = 0;
  int rank = 1;
  std::vector<Eigen::MatrixXcd> unitaries;  // per edge id, tail -> head

  // fiber transport along an edge in the requested direction
  Eigen::MatrixXcd transport(int edge, bool forward) const;
  cplx phase(int edge, bool forward) const;  // rank-1 shortcut

  void check_unitary(double tol = 1e-12) const;
};

DiscreteBundle trivial_bundle(const Graph& g, int rank = 1);

enum class SnCharacter { trivial, alternating };

// Rank-1 bundle whose edge phases are chi applied to the permutation aligning
// the lifted hop with the canonical representative of the head vertex; loop
// holonomy is then chi of the loop permutation. alternating realizes exchange
// statistics with holonomy (-1)^sigma.
DiscreteBundle bundle_from_character(const ConfigGraphPair& pair, SnCharacter chi);

// Same edge rule with an arbitrary unitary representation of S_N. The
// representation is validated as a homomorphism before use.
DiscreteBundle bundle_from_representation(
    const ConfigGraphPair& pair, int rep_dim,
    const std::function<Eigen::MatrixXcd(const Permutation&)>& rep);

// Antisymmetric tensor powers of a w_dim-dimensional auxiliary space, one
// slot per particle; transport permutes slots and re-sorts wedge monomial
// indices with the alignment permutation's swap parity. Rank is
// binomial(w_dim, N); w_dim = N gives a rank-1 bundle with fermionic
// holonomy.
DiscreteBundle exterior_power_bundle(const ConfigGraphPair& pair, int w_dim);

// Top exterior power of the configuration tangent slots: each hop transports
// the N*d coordinate axes by the blocked alignment permutation, so the edge
// sign is block_sign(sigma, d). Odd d only (even d is inert and rejected).
DiscreteBundle pseudoscalar_bundle(const ConfigGraphPair& pair);

// Ambient rank-N! bundle whose fiber coordinates are indexed by the ordered
// representatives of each quotient vertex; transport is the permutation
// matrix induced by hop lifting.
DiscreteBundle directsum_ambient_bundle(const ConfigGraphPair& pair);

// Rank-1 subbundle of the ambient bundle spanned by the alternating vectors
// w[rep] = sign(alignment(rep))/sqrt(N!); verified parallel during
// extraction.
DiscreteBundle directsum_antisym_bundle(const ConfigGraphPair& pair);

// Abelian anyon bundle in two dimensions (open boundaries): each hop picks up
// exp(i*(beta/pi) * sum of principal-value increments of the angle from every
// bystander to the moving particle). Every increment is strictly inside
// (-pi, pi), which is asserted during construction.
DiscreteBundle anyon_bundle(const ConfigGraphPair& pair, double beta);

// Bundle on the ordered graph induced by the projection: the fiber over an
// ordered vertex is the fiber over its image, and each ordered edge copies
// the transport of its projected edge.
DiscreteBundle pullback_bundle(const DiscreteBundle& on_quotient, const ConfigGraphPair& pair);

// Vertex-wise change of fiber coordinates: U'_e = g_head * U_e * g_tail^-1.
DiscreteBundle regauge(const DiscreteBundle& b, const std::vector<Eigen::MatrixXcd>& gauge);
std::vector<Eigen::MatrixXcd> random_gauge(const DiscreteBundle& b, Rng& rng);

// Ordered product of edge transports along a closed vertex loop.
Eigen::MatrixXcd holonomy(const DiscreteBundle& b, const DiscretePath& loop);

// Per-vertex fiber frame: at[v] maps reference coordinates into the fiber
// over v. A parallel frame satisfies at[head] = U_e * at[tail] on every edge.
struct Frame {
  int rank = 1;
  std::vector<Eigen::MatrixXcd> at;
};

struct HolonomyObstruction {
  DiscretePath loop;            // fundamental cycle with non-identity holonomy
  Eigen::MatrixXcd holonomy;
  double deviation = 0.0;
};

struct TrivializationResult {
  std::optional<Frame> frame;
  std::optional<HolonomyObstruction> obstruction;
  bool ok() const { return frame.has_value(); }
};

// Parallel transport along a BFS spanning tree from the base vertex. Returns
// the global parallel frame when every fundamental cycle is trivial (within
// tol), otherwise the first offending cycle. Disconnected graphs get
// independent frames per component.
TrivializationResult trivialize(const DiscreteBundle& b, int base_vertex = 0,
                                double tol = 1e-12);

struct GaugeEquivalence {
  bool equivalent = false;
  // per-vertex isomorphism mapping fibers of a into fibers of b
  std::optional<std::vector<Eigen::MatrixXcd>> witness;
  double max_residual = 0.0;
  std::string detail;
};

// Spanning-tree gauge fixing plus fundamental-cycle comparison: the bundles
// are equivalent iff the cycle holonomy families agree under one common
// conjugation per component (for rank 1: phase equality). The returned
// witness is checked edge by edge against tol.
GaugeEquivalence is_gauge_equivalent(const DiscreteBundle& a, const DiscreteBundle& b,
                                     double tol = 1e-12);

// Magnetic/covariant graph Laplacian Hamiltonian
//   H = -(hbar^2 / 2m) * Lap + V,
//   (Lap psi)(q) = spacing^-2 * sum over edges q~r of (U_{r->q} psi(r) - psi(q)).
// V holds one value per vertex (already symmetric for quotient graphs by
// construction). The result is Hermitian by the reverse-transport convention.
Eigen::MatrixXcd connection_laplacian(const DiscreteBundle& b, const Eigen::VectorXd& potential,
                                      const PhysicalParams& params);

}

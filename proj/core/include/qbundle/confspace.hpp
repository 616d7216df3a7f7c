#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "qbundle/graph.hpp"
#include "qbundle/perm.hpp"

namespace qbundle {

// Finite rectangular lattice. Sites are flattened indices; the flattening is
// chosen so that index order equals lexicographic order on coordinate tuples.
struct LatticeBox {
  int dim = 1;
  std::vector<int> sides;
  std::vector<bool> periodic;  // per axis; empty means open everywhere
  double spacing = 1.0;

  void validate() const;
  int site_count() const;
  std::vector<int> site_coords(int site) const;
  int site_index(const std::vector<int>& coords) const;
  // neighbor along an axis (dir = +1/-1); empty at an open boundary
  std::optional<int> neighbor(int site, int axis, int dir) const;
};

// N-tuple of lattice sites (flattened indices). Ordered configurations keep
// the particle order; unordered ones are sorted ascending, which equals
// lexicographic order on coordinate tuples under this flattening.
using OrderedConfig = std::vector<int>;
using UnorderedConfig = std::vector<int>;

// Exchange symmetry type selecting between antisymmetrized and symmetrized
// objects wherever both variants exist.
enum class Symmetry { anti, sym };

// sort to the canonical representative; throws InvalidConfigError on
// collisions unless allow_collisions
UnorderedConfig project_config(const OrderedConfig& q, bool allow_collisions = false);

struct ConfigHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int x : v) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(x));
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};
using ConfigIndex = std::unordered_map<std::vector<int>, int, ConfigHash>;

// Graph of ordered N-particle configurations: vertices are N-tuples of sites
// (distinct sites unless collisions_allowed), edges move one particle by one
// lattice step. With collisions_allowed the move may also enter an occupied
// site, giving the plain product-lattice adjacency.
struct OrderedGraph {
  LatticeBox box;
  int particles = 0;
  bool collisions_allowed = false;
  Graph graph;
  std::vector<OrderedConfig> configs;

  int vertex_of(const OrderedConfig& q) const;  // -1 when absent
  // vertex reached by acting with p on the tuple of vertex v
  int permuted_vertex(int v, const Permutation& p) const;

  ConfigIndex index;
};

OrderedGraph build_ordered_graph(const LatticeBox& box, int particles,
                                 bool allow_collisions = false);

// Ordered graph together with its quotient by particle relabeling.
// fibers[q] lists the ordered vertices over quotient vertex q, canonical
// (sorted) representative first. For collision-free graphs the projection is
// an N!-to-one covering, which build_quotient verifies.
struct ConfigGraphPair {
  OrderedGraph ordered;
  Graph quotient;
  std::vector<UnorderedConfig> quotient_configs;
  std::vector<int> projection;            // ordered vid -> quotient vid
  std::vector<std::vector<int>> fibers;   // quotient vid -> ordered vids

  int particles() const { return ordered.particles; }
  const LatticeBox& box() const { return ordered.box; }
  int quotient_vertex_of(const UnorderedConfig& q) const;  // -1 when absent
  int canonical_rep(int quotient_vid) const { return fibers[quotient_vid][0]; }

  // permutation relating an ordered vertex to its canonical representative:
  // tuple(v) = apply(alignment(v), tuple(canonical))
  Permutation alignment(int ordered_vid) const;

  // the single-site hop (from, to) realized by a quotient edge, oriented
  // tail -> head when forward
  std::pair<int, int> quotient_hop(int edge_id, bool forward) const;

  // unique lift of a quotient edge starting at an ordered vertex over its
  // tail; collision-free only
  int lift_edge(int edge_id, bool forward, int ordered_from) const;

  ConfigIndex quotient_index;
};

ConfigGraphPair build_quotient(OrderedGraph ordered);

// convenience: build_ordered_graph + build_quotient
ConfigGraphPair build_config_pair(const LatticeBox& box, int particles,
                                  bool allow_collisions = false);

// Lift a quotient path edge by edge, starting from an ordered vertex over
// path.front(). Collision-free pairs only (lifts are unique there).
DiscretePath lift_path(const ConfigGraphPair& pair, const DiscretePath& quotient_path,
                       int ordered_start);

// Permutation induced by a closed quotient loop relative to a chosen starting
// representative: lifting the loop from base_rep ends at apply(sigma, tuple).
// Concatenating loops a then b gives compose(sigma_b, sigma_a).
Permutation loop_permutation(const ConfigGraphPair& pair, const DiscretePath& loop,
                             int base_rep);

}

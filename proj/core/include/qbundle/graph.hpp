#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace qbundle {

// Path as a vertex sequence; consecutive vertices must be adjacent.
using DiscretePath = std::vector<int>;

// Undirected simple graph with stable edge ids. Build with add_edge, then
// finalize() once; the adjacency structure and content hash are immutable
// afterwards.
struct Graph {
  int num_vertices = 0;
  std::vector<std::array<int, 2>> edges;  // canonical orientation tail < head

  struct Halfedge {
    int neighbor;
    int edge;
    bool forward;  // true when this vertex is the canonical tail
  };

  int add_edge(int u, int v);
  void finalize();

  int num_edges() const { return static_cast<int>(edges.size()); }
  int degree(int v) const { return adj_offsets_[v + 1] - adj_offsets_[v]; }
  std::span<const Halfedge> neighbors(int v) const;
  int find_edge(int u, int v) const;  // -1 when absent
  bool adjacent(int u, int v) const { return find_edge(u, v) >= 0; }

  // edge ids + directions for a vertex path; throws ShapeError on a bad step
  std::vector<std::pair<int, bool>> edge_sequence(const DiscretePath& path) const;

  // component label per vertex, labels are 0..k-1 in BFS discovery order
  std::vector<int> components() const;
  bool is_connected() const;

  // BFS shortest path between two vertices (empty when unreachable)
  DiscretePath shortest_path(int from, int to) const;

  // BFS spanning forest; parent_edge[v] = -1 for roots
  struct SpanningForest {
    std::vector<int> parent_vertex;
    std::vector<int> parent_edge;
    std::vector<bool> parent_forward;   // orientation of parent_edge as (parent -> v)
    std::vector<int> bfs_order;         // roots first within each component
    std::vector<bool> edge_in_tree;
    std::vector<int> root_of;           // root vertex of each vertex's component
  };
  SpanningForest bfs_forest(int preferred_root = 0) const;

  std::uint64_t content_hash() const { return hash_; }
  bool finalized() const { return finalized_; }

 private:
  std::vector<int> adj_offsets_;
  std::vector<Halfedge> adj_;
  std::unordered_map<std::uint64_t, int> edge_lookup_;
  std::uint64_t hash_ = 0;
  bool finalized_ = false;
};

}

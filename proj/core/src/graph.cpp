#include "qbundle/graph.hpp"

#include <algorithm>
#include <queue>

#include "qbundle/errors.hpp"

namespace qbundle {

namespace {

std::uint64_t edge_key(int u, int v) {
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}

int Graph::add_edge(int u, int v) {
  if (finalized_) throw ShapeError("graph is finalized");
  if (u == v) throw ShapeError("self loops are not allowed");
  if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices)
    throw ShapeError("edge endpoint out of range");
  if (u > v) std::swap(u, v);
  const auto key = edge_key(u, v);
  if (edge_lookup_.count(key)) throw ShapeError("duplicate edge");
  const int id = num_edges();
  edges.push_back({u, v});
  edge_lookup_.emplace(key, id);
  return id;
}

void Graph::finalize() {
  if (finalized_) return;
  adj_offsets_.assign(num_vertices + 1, 0);
  for (const auto& e : edges) {
    ++adj_offsets_[e[0] + 1];
    ++adj_offsets_[e[1] + 1];
  }
  for (int v = 0; v < num_vertices; ++v) adj_offsets_[v + 1] += adj_offsets_[v];
  adj_.resize(2 * edges.size());
  std::vector<int> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (int id = 0; id < num_edges(); ++id) {
    const auto [u, v] = edges[id];
    adj_[cursor[u]++] = {v, id, true};
    adj_[cursor[v]++] = {u, id, false};
  }
  hash_ = 0xcbf29ce484222325ULL;
  hash_ = fnv1a(hash_, static_cast<std::uint64_t>(num_vertices));
  for (const auto& e : edges) hash_ = fnv1a(hash_, edge_key(e[0], e[1]));
  finalized_ = true;
}

std::span<const Graph::Halfedge> Graph::neighbors(int v) const {
  return {adj_.data() + adj_offsets_[v], adj_.data() + adj_offsets_[v + 1]};
}

int Graph::find_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  const auto it = edge_lookup_.find(edge_key(u, v));
  return it == edge_lookup_.end() ? -1 : it->second;
}

std::vector<std::pair<int, bool>> Graph::edge_sequence(const DiscretePath& path) const {
  if (path.empty()) throw ShapeError("empty path");
  std::vector<std::pair<int, bool>> out;
  out.reserve(path.size() - 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const int id = find_edge(path[i], path[i + 1]);
    if (id < 0) throw ShapeError("path steps across a non-edge");
    out.emplace_back(id, edges[id][0] == path[i]);
  }
  return out;
}

std::vector<int> Graph::components() const {
  std::vector<int> comp(num_vertices, -1);
  int label = 0;
  for (int s = 0; s < num_vertices; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[s] = label;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const auto& h : neighbors(v))
        if (comp[h.neighbor] < 0) {
          comp[h.neighbor] = label;
          q.push(h.neighbor);
        }
    }
    ++label;
  }
  return comp;
}

bool Graph::is_connected() const {
  if (num_vertices == 0) return true;
  const auto comp = components();
  return *std::max_element(comp.begin(), comp.end()) == 0;
}

DiscretePath Graph::shortest_path(int from, int to) const {
  std::vector<int> prev(num_vertices, -2);
  std::queue<int> q;
  q.push(from);
  prev[from] = -1;
  while (!q.empty() && prev[to] == -2) {
    const int v = q.front();
    q.pop();
    for (const auto& h : neighbors(v))
      if (prev[h.neighbor] == -2) {
        prev[h.neighbor] = v;
        q.push(h.neighbor);
      }
  }
  if (prev[to] == -2) return {};
  DiscretePath path;
  for (int v = to; v != -1; v = prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

Graph::SpanningForest Graph::bfs_forest(int preferred_root) const {
  SpanningForest f;
  f.parent_vertex.assign(num_vertices, -1);
  f.parent_edge.assign(num_vertices, -1);
  f.parent_forward.assign(num_vertices, false);
  f.edge_in_tree.assign(num_edges(), false);
  f.root_of.assign(num_vertices, -1);
  f.bfs_order.reserve(num_vertices);

  std::vector<bool> seen(num_vertices, false);
  auto run = [&](int root) {
    if (seen[root]) return;
    std::queue<int> q;
    q.push(root);
    seen[root] = true;
    f.root_of[root] = root;
    f.bfs_order.push_back(root);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const auto& h : neighbors(v)) {
        if (seen[h.neighbor]) continue;
        seen[h.neighbor] = true;
        f.parent_vertex[h.neighbor] = v;
        f.parent_edge[h.neighbor] = h.edge;
        f.parent_forward[h.neighbor] = h.forward;
        f.edge_in_tree[h.edge] = true;
        f.root_of[h.neighbor] = root;
        f.bfs_order.push_back(h.neighbor);
        q.push(h.neighbor);
      }
    }
  };
  if (num_vertices > 0) run(preferred_root);
  for (int v = 0; v < num_vertices; ++v) run(v);
  return f;
}

}

#include "qbundle/confspace.hpp"

#include <algorithm>
#include <numeric>

#include "qbundle/errors.hpp"

namespace qbundle {

void LatticeBox::validate() const {
  if (dim < 1) throw DomainError("box dimension must be at least 1");
  if (static_cast<int>(sides.size()) != dim) throw DomainError("box needs one side length per axis");
  for (int s : sides)
    if (s < 1) throw DomainError("box side lengths must be positive");
  if (!periodic.empty() && static_cast<int>(periodic.size()) != dim)
    throw DomainError("periodic flags must be empty or one per axis");
  if (!(spacing > 0.0)) throw DomainError("lattice spacing must be positive");
}

int LatticeBox::site_count() const {
  int n = 1;
  for (int s : sides) n *= s;
  return n;
}

std::vector<int> LatticeBox::site_coords(int site) const {
  // strides decrease along the axis list, so site order is lexicographic in
  // the coordinate tuple
  std::vector<int> c(dim);
  for (int a = dim - 1; a >= 0; --a) {
    c[a] = site % sides[a];
    site /= sides[a];
  }
  return c;
}

int LatticeBox::site_index(const std::vector<int>& coords) const {
  int idx = 0;
  for (int a = 0; a < dim; ++a) {
    if (coords[a] < 0 || coords[a] >= sides[a]) throw InvalidConfigError("site coordinate out of range");
    idx = idx * sides[a] + coords[a];
  }
  return idx;
}

std::optional<int> LatticeBox::neighbor(int site, int axis, int dir) const {
  // stride of `axis` under the lexicographic flattening
  int stride = 1;
  for (int a = dim - 1; a > axis; --a) stride *= sides[a];
  const int coord = (site / stride) % sides[axis];
  int next = coord + dir;
  const bool wrap = !periodic.empty() && periodic[axis];
  if (next < 0 || next >= sides[axis]) {
    if (!wrap || sides[axis] < 3) return std::nullopt;  // no wrap edges on tiny rings
    next = (next + sides[axis]) % sides[axis];
  }
  return site + (next - coord) * stride;
}

UnorderedConfig project_config(const OrderedConfig& q, bool allow_collisions) {
  UnorderedConfig s = q;
  std::sort(s.begin(), s.end());
  if (!allow_collisions)
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      if (s[i] == s[i + 1]) throw InvalidConfigError("configuration has two particles on one site");
  return s;
}

int OrderedGraph::vertex_of(const OrderedConfig& q) const {
  const auto it = index.find(q);
  return it == index.end() ? -1 : it->second;
}

int OrderedGraph::permuted_vertex(int v, const Permutation& p) const {
  if (p.size() != particles) throw SizeError("permutation size does not match particle count");
  const int w = vertex_of(p.apply(configs[v]));
  if (w < 0) throw InvalidConfigError("permuted configuration missing from the graph");
  return w;
}

OrderedGraph build_ordered_graph(const LatticeBox& box, int particles, bool allow_collisions) {
  box.validate();
  if (particles < 1) throw DomainError("need at least one particle");
  const int sites = box.site_count();
  if (!allow_collisions && particles > sites)
    throw CapacityError("more particles than lattice sites");

  OrderedGraph og;
  og.box = box;
  og.particles = particles;
  og.collisions_allowed = allow_collisions;

  // enumerate tuples in lexicographic order; the sorted tuple of any
  // collision-free configuration is then the first of its orbit
  OrderedConfig tuple(particles, 0);
  std::vector<bool> used(sites, false);
  auto recurse = [&](auto&& self, int k) -> void {
    if (k == particles) {
      og.index.emplace(tuple, static_cast<int>(og.configs.size()));
      og.configs.push_back(tuple);
      return;
    }
    for (int s = 0; s < sites; ++s) {
      if (!allow_collisions && used[s]) continue;
      tuple[k] = s;
      used[s] = true;
      self(self, k + 1);
      used[s] = false;
    }
  };
  recurse(recurse, 0);

  og.graph.num_vertices = static_cast<int>(og.configs.size());
  for (int v = 0; v < og.graph.num_vertices; ++v) {
    OrderedConfig q = og.configs[v];
    for (int k = 0; k < particles; ++k) {
      const int from = q[k];
      for (int axis = 0; axis < box.dim; ++axis) {
        for (int dir : {-1, +1}) {
          const auto to = box.neighbor(from, axis, dir);
          if (!to) continue;
          if (!allow_collisions &&
              std::find(q.begin(), q.end(), *to) != q.end())
            continue;  // destination occupied
          q[k] = *to;
          const int w = og.vertex_of(q);
          q[k] = from;
          if (w > v) og.graph.add_edge(v, w);
        }
      }
    }
  }
  og.graph.finalize();
  return og;
}

int ConfigGraphPair::quotient_vertex_of(const UnorderedConfig& q) const {
  const auto it = quotient_index.find(q);
  return it == quotient_index.end() ? -1 : it->second;
}

Permutation ConfigGraphPair::alignment(int ordered_vid) const {
  const OrderedConfig& tuple = ordered.configs[ordered_vid];
  const UnorderedConfig& canon = quotient_configs[projection[ordered_vid]];
  const int n = particles();
  std::vector<int> images(n);
  for (int k = 0; k < n; ++k) {
    const auto it = std::lower_bound(canon.begin(), canon.end(), tuple[k]);
    images[k] = static_cast<int>(it - canon.begin()) + 1;
  }
  return Permutation(images);
}

std::pair<int, int> ConfigGraphPair::quotient_hop(int edge_id, bool forward) const {
  const auto [u, v] = quotient.edges[edge_id];
  const UnorderedConfig& a = quotient_configs[forward ? u : v];
  const UnorderedConfig& b = quotient_configs[forward ? v : u];
  // multiset difference of two sorted tuples differing in exactly one entry
  int from = -1, to = -1;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && a[i] == b[j]) {
      ++i, ++j;
    } else if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      if (from >= 0) throw ShapeError("quotient edge is not a single hop");
      from = a[i++];
    } else {
      if (to >= 0) throw ShapeError("quotient edge is not a single hop");
      to = b[j++];
    }
  }
  if (from < 0 || to < 0) throw ShapeError("quotient edge is not a single hop");
  return {from, to};
}

int ConfigGraphPair::lift_edge(int edge_id, bool forward, int ordered_from) const {
  if (ordered.collisions_allowed)
    throw LiftError("lifts are not unique when collisions are allowed");
  const auto [u, v] = quotient.edges[edge_id];
  if (projection[ordered_from] != (forward ? u : v))
    throw LiftError("starting vertex does not lie over the edge tail");
  const auto [site_from, site_to] = quotient_hop(edge_id, forward);
  OrderedConfig q = ordered.configs[ordered_from];
  const auto it = std::find(q.begin(), q.end(), site_from);
  if (it == q.end()) throw LiftError("hop source missing from the representative");
  *it = site_to;
  const int w = ordered.vertex_of(q);
  if (w < 0) throw LiftError("lifted endpoint missing from the ordered graph");
  return w;
}

ConfigGraphPair build_quotient(OrderedGraph og) {
  ConfigGraphPair pair;
  pair.ordered = std::move(og);
  const OrderedGraph& ord = pair.ordered;
  const int n = ord.particles;

  long factorial = 1;
  for (int k = 2; k <= n; ++k) factorial *= k;

  pair.projection.resize(ord.graph.num_vertices);
  for (int v = 0; v < ord.graph.num_vertices; ++v) {
    UnorderedConfig s = project_config(ord.configs[v], ord.collisions_allowed);
    auto it = pair.quotient_index.find(s);
    int qv;
    if (it == pair.quotient_index.end()) {
      qv = static_cast<int>(pair.quotient_configs.size());
      pair.quotient_index.emplace(s, qv);
      pair.quotient_configs.push_back(std::move(s));
      pair.fibers.emplace_back();
    } else {
      qv = it->second;
    }
    pair.projection[v] = qv;
    pair.fibers[qv].push_back(v);
  }

  // lexicographic vertex enumeration puts the sorted representative first in
  // every fiber; the covering is n!-to-one exactly when collisions are absent
  for (std::size_t qv = 0; qv < pair.fibers.size(); ++qv) {
    const auto& fiber = pair.fibers[qv];
    if (!ord.collisions_allowed && static_cast<long>(fiber.size()) != factorial)
      throw ShapeError("fiber size differs from N!");
    if (ord.configs[fiber.front()] != pair.quotient_configs[qv])
      throw ShapeError("canonical representative is not first in its fiber");
  }

  pair.quotient.num_vertices = static_cast<int>(pair.quotient_configs.size());
  std::unordered_map<std::uint64_t, long> preimage_count;
  for (const auto& e : pair.ordered.graph.edges) {
    int qu = pair.projection[e[0]];
    int qv = pair.projection[e[1]];
    if (qu == qv) throw ShapeError("ordered edge projects to a quotient self loop");
    if (qu > qv) std::swap(qu, qv);
    const std::uint64_t key = (static_cast<std::uint64_t>(qu) << 32) | static_cast<std::uint32_t>(qv);
    if (++preimage_count[key] == 1) pair.quotient.add_edge(qu, qv);
  }
  pair.quotient.finalize();
  if (!ord.collisions_allowed)
    for (const auto& [key, count] : preimage_count)
      if (count != factorial) throw ShapeError("quotient edge preimage count differs from N!");

  return pair;
}

ConfigGraphPair build_config_pair(const LatticeBox& box, int particles, bool allow_collisions) {
  return build_quotient(build_ordered_graph(box, particles, allow_collisions));
}

DiscretePath lift_path(const ConfigGraphPair& pair, const DiscretePath& quotient_path,
                       int ordered_start) {
  if (quotient_path.empty()) throw ShapeError("empty path");
  if (pair.projection[ordered_start] != quotient_path.front())
    throw LiftError("starting vertex does not lie over the path start");
  const auto steps = pair.quotient.edge_sequence(quotient_path);
  DiscretePath lifted{ordered_start};
  lifted.reserve(quotient_path.size());
  for (const auto& [edge, forward] : steps)
    lifted.push_back(pair.lift_edge(edge, forward, lifted.back()));
  return lifted;
}

Permutation loop_permutation(const ConfigGraphPair& pair, const DiscretePath& loop,
                             int base_rep) {
  if (loop.size() < 1 || loop.front() != loop.back())
    throw NotALoopError("loop must start and end at the same quotient vertex");
  const DiscretePath lifted = lift_path(pair, loop, base_rep);
  const OrderedConfig& start = pair.ordered.configs[base_rep];
  const OrderedConfig& end = pair.ordered.configs[lifted.back()];
  // end = apply(sigma, start), i.e. end[k] = start[sigma(k)]
  const int n = pair.particles();
  std::vector<int> images(n);
  for (int k = 0; k < n; ++k) {
    const auto it = std::find(start.begin(), start.end(), end[k]);
    if (it == start.end()) throw LiftError("loop lift ended outside the starting fiber");
    images[k] = static_cast<int>(it - start.begin()) + 1;
  }
  return Permutation(images);
}

}

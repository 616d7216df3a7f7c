#include "qbundle/loops.hpp"

#include <algorithm>

#include "qbundle/errors.hpp"

namespace qbundle {

namespace {

DiscretePath random_walk(const Graph& g, int base, int steps, Rng& rng) {
  DiscretePath path{base};
  for (int i = 0; i < steps; ++i) {
    const auto nb = g.neighbors(path.back());
    if (nb.empty()) break;
    path.push_back(nb[rng.index(static_cast<int>(nb.size()))].neighbor);
  }
  return path;
}

}

DiscretePath random_loop(const ConfigGraphPair& pair, int base, int walk_steps, Rng& rng) {
  DiscretePath loop = random_walk(pair.quotient, base, walk_steps, rng);
  if (loop.back() != base) {
    const DiscretePath back = pair.quotient.shortest_path(loop.back(), base);
    if (back.empty()) throw ShapeError("quotient graph is disconnected at the chosen base");
    loop.insert(loop.end(), back.begin() + 1, back.end());
  }
  return loop;
}

DiscretePath backtrack_loop(const ConfigGraphPair& pair, int base, int walk_steps, Rng& rng) {
  DiscretePath loop = random_walk(pair.quotient, base, walk_steps, rng);
  for (int i = static_cast<int>(loop.size()) - 2; i >= 0; --i) loop.push_back(loop[i]);
  return loop;
}

DiscretePath square_cell_loop(const ConfigGraphPair& pair, Rng& rng) {
  const LatticeBox& box = pair.box();
  if (box.dim < 2) return {};
  for (int attempt = 0; attempt < 256; ++attempt) {
    const int qv = rng.index(pair.quotient.num_vertices);
    const UnorderedConfig& sites = pair.quotient_configs[qv];
    const int k = rng.index(static_cast<int>(sites.size()));
    int ax1 = rng.index(box.dim);
    int ax2 = rng.index(box.dim - 1);
    if (ax2 >= ax1) ++ax2;
    const int d1 = rng.index(2) ? 1 : -1;
    const int d2 = rng.index(2) ? 1 : -1;

    const int a = sites[k];
    const auto b = box.neighbor(a, ax1, d1);
    if (!b) continue;
    const auto c = box.neighbor(*b, ax2, d2);
    if (!c) continue;
    const auto d = box.neighbor(a, ax2, d2);
    if (!d) continue;
    auto occupied = [&](int s) {
      return s != a && std::find(sites.begin(), sites.end(), s) != sites.end();
    };
    if (occupied(*b) || occupied(*c) || occupied(*d)) continue;

    auto vertex_with = [&](int replacement) {
      UnorderedConfig q = sites;
      q[k] = replacement;
      std::sort(q.begin(), q.end());
      return pair.quotient_vertex_of(q);
    };
    const int v1 = vertex_with(*b), v2 = vertex_with(*c), v3 = vertex_with(*d);
    if (v1 < 0 || v2 < 0 || v3 < 0) continue;
    return {qv, v1, v2, v3, qv};
  }
  return {};
}

ExchangeLoop exchange_loop(const ConfigGraphPair& pair) {
  const LatticeBox& box = pair.box();
  const int n = pair.particles();
  if (box.dim < 2 || box.sides[0] < 3 || box.sides[1] < 3)
    throw DimensionError("exchange loops need two axes of extent >= 3");

  // counterclockwise ring around the cell (1,1,0,...) in the first two axes
  static constexpr int kRing[8][2] = {{0, 0}, {1, 0}, {2, 0}, {2, 1},
                                      {2, 2}, {1, 2}, {0, 2}, {0, 1}};
  std::vector<int> ring(8);
  for (int i = 0; i < 8; ++i) {
    std::vector<int> c(box.dim, 0);
    c[0] = kRing[i][0];
    c[1] = kRing[i][1];
    ring[i] = box.site_index(c);
  }

  // park the remaining particles off the ring, preferring sites outside the
  // 3x3 block so they stay away from the exchange region
  std::vector<int> bystanders;
  if (n > 2) {
    std::vector<int> outside, inside;
    for (int s = 0; s < box.site_count(); ++s) {
      if (std::find(ring.begin(), ring.end(), s) != ring.end()) continue;
      const auto c = box.site_coords(s);
      bool in_block = c[0] < 3 && c[1] < 3;
      for (int a = 2; a < box.dim; ++a) in_block = in_block && c[a] == 0;
      (in_block ? inside : outside).push_back(s);
    }
    for (int s : outside) bystanders.push_back(s);
    for (int s : inside) bystanders.push_back(s);
    if (static_cast<int>(bystanders.size()) < n - 2)
      throw CapacityError("box too small to park the spectator particles");
    bystanders.resize(n - 2);
  }

  OrderedConfig tuple;
  tuple.push_back(ring[0]);
  tuple.push_back(ring[4]);
  tuple.insert(tuple.end(), bystanders.begin(), bystanders.end());
  const int base_rep = pair.ordered.vertex_of(tuple);
  if (base_rep < 0) throw InvalidConfigError("exchange base configuration missing from the graph");

  ExchangeLoop out;
  out.base_rep = base_rep;
  out.loop.push_back(pair.projection[base_rep]);
  auto push = [&](const OrderedConfig& q) {
    const int v = pair.ordered.vertex_of(q);
    if (v < 0) throw InvalidConfigError("exchange step left the graph");
    out.loop.push_back(pair.projection[v]);
  };
  int pos_a = 0, pos_b = 4;
  OrderedConfig current = tuple;
  for (int step = 0; step < 4; ++step) {
    current[0] = ring[++pos_a % 8];
    push(current);
    current[1] = ring[++pos_b % 8];
    push(current);
  }
  if (out.loop.front() != out.loop.back()) throw ShapeError("exchange loop failed to close");
  return out;
}

}

#include "doctest.h"

#include <algorithm>
#include <cstdlib>

#include "qbundle/confspace.hpp"
#include "qbundle/errors.hpp"
#include "qbundle/loops.hpp"
#include "qbundle/rng.hpp"

using namespace qbundle;

namespace {

LatticeBox box2d(int w, int h) {
  LatticeBox b;
  b.dim = 2;
  b.sides = {w, h};
  return b;
}

// adjacency oracle: exactly one slot differs, and by one lattice step
bool one_step_apart(const LatticeBox& box, const OrderedConfig& a, const OrderedConfig& b) {
  int moved = -1;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == b[k]) continue;
    if (moved >= 0) return false;
    moved = static_cast<int>(k);
  }
  if (moved < 0) return false;
  for (int axis = 0; axis < box.dim; ++axis)
    for (int dir : {-1, 1}) {
      const auto n = box.neighbor(a[moved], axis, dir);
      if (n && *n == b[moved]) return true;
    }
  return false;
}

}  // namespace

TEST_CASE("lattice box flattening is lexicographic") {
  LatticeBox b = box2d(3, 4);
  b.validate();
  CHECK(b.site_count() == 12);
  int prev = -1;
  for (int s = 0; s < 12; ++s) {
    const auto c = b.site_coords(s);
    CHECK(b.site_index(c) == s);
    const int lex = c[0] * 4 + c[1];
    CHECK(lex > prev);
    prev = lex;
  }
  // open boundary versus periodic wrap
  CHECK_FALSE(b.neighbor(0, 0, -1).has_value());
  LatticeBox ring = b;
  ring.periodic = {true, true};
  const auto w = ring.neighbor(0, 0, -1);
  REQUIRE(w.has_value());
  CHECK(*w == b.site_index({2, 0}));
}

TEST_CASE("ordered graph counts and brute-force adjacency") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  CHECK(pair.ordered.graph.num_vertices == 72);
  CHECK(pair.quotient.num_vertices == 36);

  const auto small = build_ordered_graph(box2d(2, 2), 2);
  REQUIRE(small.graph.num_vertices == 12);
  for (int u = 0; u < 12; ++u)
    for (int v = u + 1; v < 12; ++v)
      CHECK(small.graph.adjacent(u, v) ==
            one_step_apart(small.box, small.configs[u], small.configs[v]));

  LatticeBox line;
  line.dim = 1;
  line.sides = {2};
  const auto padded = build_ordered_graph(line, 2, true);
  CHECK(padded.graph.num_vertices == 4);  // collisions retained
}

TEST_CASE("fibers, canonical representatives, and alignment") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  for (int q = 0; q < pair.quotient.num_vertices; ++q) {
    REQUIRE(pair.fibers[q].size() == 2);
    const auto canon = pair.ordered.configs[pair.canonical_rep(q)];
    CHECK(std::is_sorted(canon.begin(), canon.end()));
    for (int v : pair.fibers[q]) {
      CHECK(pair.projection[v] == q);
      CHECK(pair.alignment(v).apply(canon) == pair.ordered.configs[v]);
    }
  }
}

TEST_CASE("permuted vertex acts like apply") {
  const auto pair = build_config_pair(box2d(3, 3), 3);
  Rng rng(21);
  const auto perms = Permutation::all(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int v = rng.index(pair.ordered.graph.num_vertices);
    const Permutation& s = perms[rng.index(6)];
    const Permutation& t = perms[rng.index(6)];
    const int moved = pair.ordered.permuted_vertex(v, s);
    CHECK(pair.ordered.configs[moved] == s.apply(pair.ordered.configs[v]));
    CHECK(pair.ordered.permuted_vertex(moved, t) ==
          pair.ordered.permuted_vertex(v, compose(s, t)));
    // alignment of a permuted vertex composes on the right
    const int c = pair.canonical_rep(pair.projection[v]);
    const int w = pair.ordered.permuted_vertex(c, s);
    CHECK(pair.alignment(w) == s);
  }
}

TEST_CASE("quotient hops lift uniquely") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  for (int e = 0; e < pair.quotient.num_edges(); ++e) {
    const int tail = pair.quotient.edges[e][0];
    const auto hop = pair.quotient_hop(e, true);
    for (int rep : pair.fibers[tail]) {
      const int lifted = pair.lift_edge(e, true, rep);
      CHECK(pair.projection[lifted] == pair.quotient.edges[e][1]);
      // the lift moves exactly the particle sitting at the hop source
      const auto& from = pair.ordered.configs[rep];
      const auto& to = pair.ordered.configs[lifted];
      int changed = 0;
      for (std::size_t k = 0; k < from.size(); ++k)
        if (from[k] != to[k]) {
          ++changed;
          CHECK(from[k] == hop.first);
          CHECK(to[k] == hop.second);
        }
      CHECK(changed == 1);
      CHECK(pair.ordered.graph.adjacent(rep, lifted));
    }
  }
}

TEST_CASE("path lifting and loop permutations") {
  const auto pair = build_config_pair(box2d(3, 3), 2);
  const auto ex = exchange_loop(pair);
  REQUIRE(!ex.loop.empty());
  CHECK(ex.loop.front() == ex.loop.back());

  const auto lifted = lift_path(pair, ex.loop, ex.base_rep);
  REQUIRE(lifted.size() == ex.loop.size());
  for (std::size_t i = 0; i < lifted.size(); ++i)
    CHECK(pair.projection[lifted[i]] == ex.loop[i]);

  const Permutation sigma = loop_permutation(pair, ex.loop, ex.base_rep);
  CHECK(sigma == Permutation::transposition(2, 1, 2));

  Rng rng(22);
  const auto back = backtrack_loop(pair, ex.loop.front(), 6, rng);
  CHECK(loop_permutation(pair, back, ex.base_rep).is_identity());

  DiscretePath open_path(ex.loop.begin(), ex.loop.end() - 1);
  CHECK_THROWS_AS(loop_permutation(pair, open_path, ex.base_rep), NotALoopError);
}

TEST_CASE("config projection rejects collisions unless allowed") {
  CHECK(project_config({5, 2, 7}) == UnorderedConfig{2, 5, 7});
  CHECK_THROWS_AS(project_config({4, 4}), InvalidConfigError);
  CHECK(project_config({4, 4}, true) == UnorderedConfig{4, 4});
}

#include "qbundle/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "qbundle/errors.hpp"

namespace qbundle {

namespace {

long factorial(int n) {
  long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

void require_same_shape(const DiscreteBundle& a, const DiscreteBundle& b) {
  if (a.graph_hash != b.graph_hash) throw ShapeError("bundles live on different graphs");
  if (a.rank != b.rank) throw ShapeError("bundles have different ranks");
}

// alignment permutation of the hop lifted from the canonical representative
// of the edge tail; the edge unitary of every alignment-based construction is
// a function of this permutation, and loop holonomies telescope to the same
// function of the loop permutation taken at the canonical base representative
Permutation edge_alignment(const ConfigGraphPair& pair, int edge_id) {
  const int tail = pair.quotient.edges[edge_id][0];
  const int lifted = pair.lift_edge(edge_id, true, pair.canonical_rep(tail));
  return pair.alignment(lifted);
}

DiscreteBundle alignment_bundle(const ConfigGraphPair& pair, int rank,
                                const std::function<Eigen::MatrixXcd(const Permutation&)>& rep) {
  DiscreteBundle b;
  b.graph = &pair.quotient;
  b.graph_hash = pair.quotient.content_hash();
  b.rank = rank;
  b.unitaries.reserve(pair.quotient.num_edges());
  for (int e = 0; e < pair.quotient.num_edges(); ++e)
    b.unitaries.push_back(rep(edge_alignment(pair, e)));
  return b;
}

}

Eigen::MatrixXcd DiscreteBundle::transport(int edge, bool forward) const {
  return forward ? unitaries[edge] : unitaries[edge].adjoint();
}

cplx DiscreteBundle::phase(int edge, bool forward) const {
  if (rank != 1) throw ShapeError("phase() needs a rank-1 bundle");
  const cplx u = unitaries[edge](0, 0);
  return forward ? u : std::conj(u);
}

void DiscreteBundle::check_unitary(double tol) const {
  for (std::size_t e = 0; e < unitaries.size(); ++e) {
    const auto& u = unitaries[e];
    if (u.rows() != rank || u.cols() != rank) throw ShapeError("edge matrix has wrong shape");
    const double dev = (u.adjoint() * u - Eigen::MatrixXcd::Identity(rank, rank)).norm();
    if (dev > tol * std::sqrt(static_cast<double>(rank)))
      throw ShapeError("edge matrix is not unitary");
  }
}

DiscreteBundle trivial_bundle(const Graph& g, int rank) {
  DiscreteBundle b;
  b.graph = &g;
  b.graph_hash = g.content_hash();
  b.rank = rank;
  b.unitaries.assign(g.num_edges(), Eigen::MatrixXcd::Identity(rank, rank));
  return b;
}

DiscreteBundle bundle_from_character(const ConfigGraphPair& pair, SnCharacter chi) {
  return alignment_bundle(pair, 1, [&](const Permutation& p) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = (chi == SnCharacter::alternating) ? static_cast<double>(p.sign()) : 1.0;
    return m;
  });
}

DiscreteBundle bundle_from_representation(
    const ConfigGraphPair& pair, int rep_dim,
    const std::function<Eigen::MatrixXcd(const Permutation&)>& rep) {
  const int n = pair.particles();
  // validate: unitarity, identity, and the homomorphism law (all pairs for
  // small groups, generator products otherwise)
  const auto id = Permutation::identity(n);
  if ((rep(id) - Eigen::MatrixXcd::Identity(rep_dim, rep_dim)).norm() > 1e-10)
    throw InvalidRepresentationError("representation does not map identity to identity");
  std::vector<Permutation> probe;
  if (n <= 4) {
    probe = Permutation::all(n);
  } else {
    for (int i = 1; i < n; ++i) probe.push_back(Permutation::transposition(n, i, i + 1));
  }
  for (const auto& p : probe) {
    const Eigen::MatrixXcd mp = rep(p);
    if (mp.rows() != rep_dim || mp.cols() != rep_dim)
      throw InvalidRepresentationError("representation value has wrong shape");
    if ((mp.adjoint() * mp - Eigen::MatrixXcd::Identity(rep_dim, rep_dim)).norm() > 1e-10)
      throw InvalidRepresentationError("representation value is not unitary");
    for (const auto& q : probe)
      if ((rep(compose(p, q)) - mp * rep(q)).norm() > 1e-10)
        throw InvalidRepresentationError("representation is not a homomorphism");
  }
  return alignment_bundle(pair, rep_dim, rep);
}

DiscreteBundle exterior_power_bundle(const ConfigGraphPair& pair, int w_dim) {
  const int n = pair.particles();
  if (w_dim < n) throw ShapeError("auxiliary space must have dimension >= particle count");
  const int rank = static_cast<int>(binomial(w_dim, n));

  // wedge monomials: ascending n-subsets of {0..w_dim-1} in lexicographic order
  std::vector<std::vector<int>> monomials;
  std::vector<int> subset(n);
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    monomials.push_back(subset);
    int i = n - 1;
    while (i >= 0 && subset[i] == w_dim - n + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < n; ++j) subset[j] = subset[j - 1] + 1;
  }
  ConfigIndex monomial_index;
  for (int i = 0; i < rank; ++i) monomial_index.emplace(monomials[i], i);

  return alignment_bundle(pair, rank, [&](const Permutation& sigma) {
    // transport sends slot i to slot sigma(i); re-sorting the permuted slot
    // contents counts the swap parity of the wedge
    const Permutation inv = sigma.inverse();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rank, rank);
    std::vector<int> t(n);
    for (int src = 0; src < rank; ++src) {
      for (int j = 0; j < n; ++j) t[j] = monomials[src][inv.image0(j)];
      int swaps = 0;
      for (int i = 1; i < n; ++i)  // insertion sort, counting inversions
        for (int j = i; j > 0 && t[j - 1] > t[j]; --j) {
          std::swap(t[j - 1], t[j]);
          ++swaps;
        }
      m(monomial_index.at(t), src) = (swaps % 2 == 0) ? 1.0 : -1.0;
    }
    return m;
  });
}

DiscreteBundle pseudoscalar_bundle(const ConfigGraphPair& pair) {
  const int d = pair.box().dim;
  if (d % 2 == 0)
    throw DimensionError("pseudoscalar transport is inert for even dimensions; use odd d");
  return alignment_bundle(pair, 1, [&](const Permutation& p) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = static_cast<double>(block_sign(p, d));
    return m;
  });
}

DiscreteBundle directsum_ambient_bundle(const ConfigGraphPair& pair) {
  const int n = pair.particles();
  const int rank = static_cast<int>(factorial(n));
  DiscreteBundle b;
  b.graph = &pair.quotient;
  b.graph_hash = pair.quotient.content_hash();
  b.rank = rank;
  b.unitaries.reserve(pair.quotient.num_edges());

  auto fiber_position = [&](int quotient_vid, int ordered_vid) {
    const auto& fiber = pair.fibers[quotient_vid];
    const auto it = std::find(fiber.begin(), fiber.end(), ordered_vid);
    return static_cast<int>(it - fiber.begin());
  };

  for (int e = 0; e < pair.quotient.num_edges(); ++e) {
    const auto [u, v] = pair.quotient.edges[e];
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rank, rank);
    for (int iq = 0; iq < rank; ++iq) {
      const int lifted = pair.lift_edge(e, true, pair.fibers[u][iq]);
      m(fiber_position(v, lifted), iq) = 1.0;
    }
    b.unitaries.push_back(std::move(m));
  }
  return b;
}

DiscreteBundle directsum_antisym_bundle(const ConfigGraphPair& pair) {
  const DiscreteBundle ambient = directsum_ambient_bundle(pair);
  const int n = pair.particles();
  const int nf = ambient.rank;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(nf));

  // alternating unit vector in each fiber: component sign(alignment)/sqrt(N!)
  std::vector<Eigen::VectorXcd> span(pair.quotient.num_vertices);
  for (int q = 0; q < pair.quotient.num_vertices; ++q) {
    Eigen::VectorXcd v(nf);
    for (int i = 0; i < nf; ++i)
      v(i) = pair.alignment(pair.fibers[q][i]).sign() * inv_sqrt;
    span[q] = v;
  }

  DiscreteBundle b;
  b.graph = ambient.graph;
  b.graph_hash = ambient.graph_hash;
  b.rank = 1;
  b.unitaries.reserve(pair.quotient.num_edges());
  for (int e = 0; e < pair.quotient.num_edges(); ++e) {
    const auto [u, v] = pair.quotient.edges[e];
    const Eigen::VectorXcd moved = ambient.unitaries[e] * span[u];
    const cplx u_phase = span[v].dot(moved);  // dot conjugates the left factor
    if (std::abs(std::abs(u_phase) - 1.0) > 1e-12 ||
        (moved - u_phase * span[v]).norm() > 1e-12)
      throw ShapeError("alternating vectors are not parallel along an edge");
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = u_phase;
    b.unitaries.push_back(std::move(m));
  }
  return b;
}

DiscreteBundle anyon_bundle(const ConfigGraphPair& pair, double beta) {
  const LatticeBox& box = pair.box();
  if (box.dim != 2) throw DimensionError("anyon transport needs exactly two dimensions");
  for (bool p : box.periodic)
    if (p) throw DimensionError("anyon transport needs open boundaries");

  DiscreteBundle b;
  b.graph = &pair.quotient;
  b.graph_hash = pair.quotient.content_hash();
  b.rank = 1;
  b.unitaries.reserve(pair.quotient.num_edges());
  for (int e = 0; e < pair.quotient.num_edges(); ++e) {
    const auto [site_from, site_to] = pair.quotient_hop(e, true);
    const auto cf = box.site_coords(site_from);
    const auto ct = box.site_coords(site_to);
    const cplx zf(cf[0], cf[1]), zt(ct[0], ct[1]);
    double winding = 0.0;
    for (int site : pair.quotient_configs[pair.quotient.edges[e][0]]) {
      if (site == site_from) continue;  // bystanders only
      const auto cy = box.site_coords(site);
      const cplx zy(cy[0], cy[1]);
      const double dtheta = std::arg((zt - zy) / (zf - zy));
      if (!(std::abs(dtheta) < M_PI * (1.0 - 1e-12)))
        throw DomainError("pair angle increment reached the principal branch cut");
      winding += dtheta;
    }
    const double phase = beta / M_PI * winding;
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = cplx(std::cos(phase), std::sin(phase));
    b.unitaries.push_back(std::move(m));
  }
  return b;
}

DiscreteBundle pullback_bundle(const DiscreteBundle& on_quotient, const ConfigGraphPair& pair) {
  if (on_quotient.graph_hash != pair.quotient.content_hash())
    throw ShapeError("bundle does not live on the quotient of this pair");
  DiscreteBundle b;
  b.graph = &pair.ordered.graph;
  b.graph_hash = pair.ordered.graph.content_hash();
  b.rank = on_quotient.rank;
  b.unitaries.reserve(pair.ordered.graph.num_edges());
  for (const auto& e : pair.ordered.graph.edges) {
    const int qu = pair.projection[e[0]];
    const int qv = pair.projection[e[1]];
    const int qe = pair.quotient.find_edge(qu, qv);
    if (qe < 0) throw ShapeError("ordered edge projects outside the quotient graph");
    b.unitaries.push_back(on_quotient.transport(qe, pair.quotient.edges[qe][0] == qu));
  }
  return b;
}

DiscreteBundle regauge(const DiscreteBundle& b, const std::vector<Eigen::MatrixXcd>& gauge) {
  if (static_cast<int>(gauge.size()) != b.graph->num_vertices)
    throw ShapeError("need one gauge matrix per vertex");
  DiscreteBundle out = b;
  for (int e = 0; e < b.graph->num_edges(); ++e) {
    const auto [u, v] = b.graph->edges[e];
    out.unitaries[e] = gauge[v] * b.unitaries[e] * gauge[u].adjoint();
  }
  return out;
}

std::vector<Eigen::MatrixXcd> random_gauge(const DiscreteBundle& b, Rng& rng) {
  std::vector<Eigen::MatrixXcd> g;
  g.reserve(b.graph->num_vertices);
  for (int v = 0; v < b.graph->num_vertices; ++v) g.push_back(rng.haar_unitary(b.rank));
  return g;
}

Eigen::MatrixXcd holonomy(const DiscreteBundle& b, const DiscretePath& loop) {
  if (loop.size() < 1 || loop.front() != loop.back())
    throw NotALoopError("holonomy needs a closed loop");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(b.rank, b.rank);
  for (const auto& [edge, forward] : b.graph->edge_sequence(loop))
    h = b.transport(edge, forward) * h;
  return h;
}

TrivializationResult trivialize(const DiscreteBundle& b, int base_vertex, double tol) {
  const Graph& g = *b.graph;
  const auto forest = g.bfs_forest(base_vertex);

  Frame frame;
  frame.rank = b.rank;
  frame.at.resize(g.num_vertices);
  for (int v : forest.bfs_order) {
    if (forest.parent_edge[v] < 0)
      frame.at[v] = Eigen::MatrixXcd::Identity(b.rank, b.rank);
    else
      frame.at[v] = b.transport(forest.parent_edge[v], forest.parent_forward[v]) *
                    frame.at[forest.parent_vertex[v]];
  }

  const double bound = tol * std::sqrt(static_cast<double>(b.rank));
  for (int e = 0; e < g.num_edges(); ++e) {
    if (forest.edge_in_tree[e]) continue;
    const auto [u, v] = g.edges[e];
    const Eigen::MatrixXcd cycle = frame.at[v].adjoint() * b.unitaries[e] * frame.at[u];
    const double dev = (cycle - Eigen::MatrixXcd::Identity(b.rank, b.rank)).norm();
    if (dev > bound) {
      // fundamental cycle: tree path root -> u, the edge, tree path v -> root
      HolonomyObstruction ob;
      DiscretePath up;
      for (int w = u; w >= 0; w = forest.parent_vertex[w]) up.push_back(w);
      std::reverse(up.begin(), up.end());
      ob.loop = std::move(up);
      for (int w = v; w >= 0; w = forest.parent_vertex[w]) ob.loop.push_back(w);
      ob.holonomy = cycle;
      ob.deviation = dev;
      return {std::nullopt, std::move(ob)};
    }
  }
  return {std::move(frame), std::nullopt};
}

GaugeEquivalence is_gauge_equivalent(const DiscreteBundle& a, const DiscreteBundle& b,
                                     double tol) {
  require_same_shape(a, b);
  const Graph& g = *a.graph;
  const int n = a.rank;
  const auto forest = g.bfs_forest(0);

  auto tree_frames = [&](const DiscreteBundle& bd) {
    std::vector<Eigen::MatrixXcd> t(g.num_vertices);
    for (int v : forest.bfs_order)
      t[v] = (forest.parent_edge[v] < 0)
                 ? Eigen::MatrixXcd::Identity(n, n)
                 : (bd.transport(forest.parent_edge[v], forest.parent_forward[v]) *
                    t[forest.parent_vertex[v]]).eval();
    return t;
  };
  const auto t1 = tree_frames(a);
  const auto t2 = tree_frames(b);

  // fundamental-cycle holonomies per component, pulled to the component root
  std::unordered_map<int, std::vector<std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>>> cycles;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (forest.edge_in_tree[e]) continue;
    const auto [u, v] = g.edges[e];
    cycles[forest.root_of[u]].emplace_back(t1[v].adjoint() * a.unitaries[e] * t1[u],
                                           t2[v].adjoint() * b.unitaries[e] * t2[u]);
  }

  // one common conjugation per component: solve C h1 = h2 C over the stacked
  // Sylvester system, then extract a unitary via the polar decomposition
  std::unordered_map<int, Eigen::MatrixXcd> conj_by_root;
  Rng rng(0x9b1eaf);
  for (int v = 0; v < g.num_vertices; ++v) {
    const int root = forest.root_of[v];
    if (conj_by_root.count(root)) continue;
    const auto it = cycles.find(root);
    if (it == cycles.end() || it->second.empty()) {
      conj_by_root[root] = Eigen::MatrixXcd::Identity(n, n);  // tree component
      continue;
    }
    const auto& pairs = it->second;
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd stacked(static_cast<int>(pairs.size()) * n * n, n * n);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      // vec(h2 C - C h1) = (I (x) h2 - h1^T (x) I) vec(C), column-major vec
      Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(n * n, n * n);
      for (int p = 0; p < n; ++p) {
        block.block(p * n, p * n, n, n) += pairs[i].second;
        for (int q = 0; q < n; ++q)
          block.block(p * n, q * n, n, n) -= pairs[i].first.transpose()(p, q) * eye;
      }
      stacked.block(static_cast<int>(i) * n * n, 0, n * n, n * n) = block;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = std::max(1e-8, 1e-8 * sv(0));
    std::vector<Eigen::MatrixXcd> kernel;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) < cutoff) {
        Eigen::MatrixXcd k(n, n);
        for (int c = 0; c < n; ++c) k.col(c) = svd.matrixV().col(i).segment(c * n, n);
        kernel.push_back(std::move(k));
      }
    if (kernel.empty())
      return {false, std::nullopt, sv(sv.size() - 1),
              "cycle holonomies admit no common intertwiner"};

    Eigen::MatrixXcd chosen;
    bool found = false;
    for (int attempt = 0; attempt < 8 && !found; ++attempt) {
      Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
      for (const auto& k : kernel) x += cplx(rng.gaussian(), rng.gaussian()) * k;
      Eigen::JacobiSVD<Eigen::MatrixXcd> xs(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (xs.singularValues()(n - 1) > 1e-6 * xs.singularValues()(0)) {
        chosen = xs.matrixU() * xs.matrixV().adjoint();  // polar factor
        found = true;
      }
    }
    if (!found)
      return {false, std::nullopt, 0.0,
              "intertwiner space contains no invertible element"};
    conj_by_root[root] = std::move(chosen);
  }

  std::vector<Eigen::MatrixXcd> witness(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v)
    witness[v] = t2[v] * conj_by_root[forest.root_of[v]] * t1[v].adjoint();

  double max_residual = 0.0;
  int worst_edge = -1;
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edges[e];
    const double r = (witness[v] * a.unitaries[e] - b.unitaries[e] * witness[u]).norm();
    if (r > max_residual) {
      max_residual = r;
      worst_edge = e;
    }
  }
  if (max_residual > tol * std::sqrt(static_cast<double>(n))) {
    std::ostringstream os;
    os << "witness fails on edge " << worst_edge << " with residual " << max_residual;
    return {false, std::nullopt, max_residual, os.str()};
  }
  return {true, std::move(witness), max_residual, ""};
}

Eigen::MatrixXcd connection_laplacian(const DiscreteBundle& b, const Eigen::VectorXd& potential,
                                      const PhysicalParams& params) {
  const Graph& g = *b.graph;
  if (static_cast<int>(potential.size()) != g.num_vertices)
    throw ShapeError("need one potential value per vertex");
  const int n = g.num_vertices * b.rank;
  const double kappa =
      params.hbar * params.hbar / (2.0 * params.mass * params.spacing * params.spacing);

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int v = 0; v < g.num_vertices; ++v)
    h.block(v * b.rank, v * b.rank, b.rank, b.rank) =
        (kappa * g.degree(v) + potential[v]) * Eigen::MatrixXcd::Identity(b.rank, b.rank);
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edges[e];
    // H[u,v] couples psi(v) transported into the fiber over u
    h.block(u * b.rank, v * b.rank, b.rank, b.rank) = -kappa * b.transport(e, false);
    h.block(v * b.rank, u * b.rank, b.rank, b.rank) = -kappa * b.transport(e, true);
  }
  return h;
}

}

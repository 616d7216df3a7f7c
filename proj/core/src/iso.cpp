#include "qbundle/iso.hpp"

#include <cmath>
#include <vector>

#include "qbundle/errors.hpp"
#include "qbundle/perm.hpp"

namespace qbundle {

namespace {

double sqrt_factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return std::sqrt(f);
}

void require_line_frame(const DiscreteBundle& pullback, const Frame& frame,
                        const ConfigGraphPair& pair) {
  if (pullback.rank != 1 || frame.rank != 1)
    throw DimensionError("the correspondence is defined for line bundles");
  const int ordered_dim = pair.ordered.graph.num_vertices;
  if (pullback.graph->num_vertices != ordered_dim)
    throw ShapeError("pullback does not live on the ordered graph");
  if (static_cast<int>(frame.at.size()) != ordered_dim)
    throw ShapeError("frame size differs from the ordered vertex count");
  for (std::size_t e = 0; e < pullback.graph->edges.size(); ++e) {
    const auto [u, v] = pullback.graph->edges[e];
    const std::complex<double> moved =
        pullback.transport(static_cast<int>(e), true)(0, 0) * frame.at[u](0, 0);
    if (std::abs(frame.at[v](0, 0) - moved) > 1e-10)
      throw FrameError("frame is not parallel on every edge");
  }
}

}  // namespace

Eigen::VectorXcd symmetrize(const ConfigGraphPair& pair, const Eigen::VectorXcd& f,
                            Symmetry kind) {
  const int ordered_dim = pair.ordered.graph.num_vertices;
  if (f.size() != ordered_dim) throw ShapeError("function size differs from vertex count");
  const int n = pair.particles();
  const auto perms = Permutation::all(n);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ordered_dim);
  for (const auto& sigma : perms) {
    const double chi = kind == Symmetry::anti ? sigma.sign() : 1.0;
    for (int v = 0; v < ordered_dim; ++v) {
      const int w = pair.ordered.permuted_vertex(v, sigma);
      if (w < 0) throw InvalidConfigError("permuted configuration missing from the graph");
      out[v] += chi * f[w];
    }
  }
  return out / static_cast<double>(perms.size());
}

PullbackFrame canonical_pullback_frame(const DiscreteBundle& on_quotient,
                                       const ConfigGraphPair& pair, double tol) {
  PullbackFrame out{pullback_bundle(on_quotient, pair), Frame{}};
  TrivializationResult tr = trivialize(out.bundle, 0, tol);
  if (!tr.ok())
    throw FrameError("pullback is not trivializable: loop holonomy deviates by " +
                     std::to_string(tr.obstruction ? tr.obstruction->deviation : 0.0));
  out.frame = std::move(*tr.frame);
  return out;
}

Eigen::VectorXcd lift_to_ordered(const Eigen::VectorXcd& section, const DiscreteBundle& pullback,
                                 const Frame& frame, const ConfigGraphPair& pair) {
  require_line_frame(pullback, frame, pair);
  if (section.size() != pair.quotient.num_vertices)
    throw ShapeError("section size differs from the quotient vertex count");
  const int ordered_dim = pair.ordered.graph.num_vertices;
  const double w = 1.0 / sqrt_factorial(pair.particles());
  Eigen::VectorXcd out(ordered_dim);
  for (int v = 0; v < ordered_dim; ++v)
    out[v] = w * std::conj(frame.at[v](0, 0)) * section[pair.projection[v]];
  return out;
}

Eigen::VectorXcd restrict_to_section(const Eigen::VectorXcd& f, const DiscreteBundle& pullback,
                                     const Frame& frame, const ConfigGraphPair& pair) {
  if (f.size() != pair.ordered.graph.num_vertices)
    throw ShapeError("function size differs from the ordered vertex count");
  require_line_frame(pullback, frame, pair);
  const double w = sqrt_factorial(pair.particles());
  const double scale = std::max(1.0, w * f.cwiseAbs().maxCoeff());
  Eigen::VectorXcd out(pair.quotient.num_vertices);
  for (int qv = 0; qv < pair.quotient.num_vertices; ++qv) {
    const auto& fiber = pair.fibers[qv];
    std::complex<double> value = 0;
    for (std::size_t i = 0; i < fiber.size(); ++i) {
      const std::complex<double> candidate = w * frame.at[fiber[i]](0, 0) * f[fiber[i]];
      if (i == 0) {
        value = candidate;
      } else if (std::abs(candidate - value) > 1e-10 * scale) {
        throw SymmetryError("values disagree across representatives of quotient vertex " +
                            std::to_string(qv));
      }
    }
    out[qv] = value;
  }
  return out;
}

Eigen::SparseMatrix<std::complex<double>> lift_matrix(const DiscreteBundle& pullback,
                                                      const Frame& frame,
                                                      const ConfigGraphPair& pair) {
  require_line_frame(pullback, frame, pair);
  const int ordered_dim = pair.ordered.graph.num_vertices;
  const double w = 1.0 / sqrt_factorial(pair.particles());
  std::vector<Eigen::Triplet<std::complex<double>>> entries;
  entries.reserve(static_cast<std::size_t>(ordered_dim));
  for (int v = 0; v < ordered_dim; ++v)
    entries.emplace_back(v, pair.projection[v], w * std::conj(frame.at[v](0, 0)));
  Eigen::SparseMatrix<std::complex<double>> m(ordered_dim, pair.quotient.num_vertices);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Eigen::MatrixXcd triple_unitary(const Eigen::MatrixXcd& subspace_basis,
                                const Eigen::SparseMatrix<std::complex<double>>& lift) {
  if (subspace_basis.rows() != lift.rows())
    throw ShapeError("basis and lift act on different ordered spaces");
  return subspace_basis.adjoint() * lift;
}

double frame_exchange_residual(const ConfigGraphPair& pair, const Frame& frame, Symmetry kind) {
  if (frame.rank != 1) throw DimensionError("exchange law applies to line-bundle frames");
  double worst = 0;
  for (std::size_t qv = 0; qv < pair.fibers.size(); ++qv) {
    const auto& fiber = pair.fibers[qv];
    const std::complex<double> base = frame.at[fiber.front()](0, 0);
    for (int v : fiber) {
      const double chi = kind == Symmetry::anti ? pair.alignment(v).sign() : 1.0;
      worst = std::max(worst, std::abs(frame.at[v](0, 0) - chi * base));
    }
  }
  return worst;
}

}  // namespace qbundle

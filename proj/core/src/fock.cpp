#include "qbundle/fock.hpp"

#include <cmath>
#include <complex>

#include "qbundle/bundle.hpp"
#include "qbundle/errors.hpp"
#include "qbundle/iso.hpp"

namespace qbundle {

GammaSpace::GammaSpace(LatticeBox box, int n_max) : box_(std::move(box)), n_max_(n_max) {
  box_.validate();
  if (n_max < 0) throw DomainError("sector count must be nonnegative");
  if (n_max > box_.site_count())
    throw CapacityError("more particles than lattice sites in the top sector");
  sectors_.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    sectors_.push_back(build_config_pair(box_, n, /*allow_collisions=*/false));
}

const ConfigGraphPair& GammaSpace::sector(int n) const {
  if (n < 1 || n > n_max_) throw ShapeError("sector index out of range");
  return sectors_[static_cast<std::size_t>(n - 1)];
}

long GammaSpace::sector_size(int n) const {
  if (n == 0) return 1;
  return sector(n).quotient.num_vertices;
}

double GammaSpace::sector_measure(int n) const {
  return std::pow(box_.spacing, static_cast<double>(n) * box_.dim) *
         static_cast<double>(sector_size(n));
}

double GammaSpace::total_measure() const {
  double acc = 0;
  for (int n = 0; n <= n_max_; ++n) acc += sector_measure(n);
  return acc;
}

GammaSpace build_gamma(LatticeBox box, int n_max) { return GammaSpace(std::move(box), n_max); }

double SectorState::total_norm_squared() const {
  double acc = 0;
  for (const auto& c : component) acc += c.squaredNorm();
  return acc;
}

FockAssembly assemble_fock(const GammaSpace& g, const SectorState& state, Symmetry kind) {
  const int top = g.n_max();
  if (static_cast<int>(state.component.size()) != top + 1 ||
      static_cast<int>(state.theta.size()) != top + 1)
    throw ShapeError("state does not provide one component and one phase per sector");

  FockAssembly out;
  out.sectors.resize(state.component.size());
  for (int n = 0; n <= top; ++n) {
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, state.theta[n]));
    if (n == 0) {
      if (state.component[0].size() != 1) throw ShapeError("sector 0 holds a single amplitude");
      out.sectors[0] = phase * state.component[0];
      continue;
    }
    const ConfigGraphPair& pair = g.sector(n);
    if (state.component[n].size() != pair.quotient.num_vertices)
      throw ShapeError("sector " + std::to_string(n) + " component has the wrong size");
    const SnCharacter character =
        kind == Symmetry::anti ? SnCharacter::alternating : SnCharacter::trivial;
    const DiscreteBundle bundle = bundle_from_character(pair, character);
    const PullbackFrame pf = canonical_pullback_frame(bundle, pair);
    out.sectors[n] =
        lift_to_ordered(phase * state.component[n], pf.bundle, pf.frame, pair);
  }
  return out;
}

Eigen::VectorXd sector_born_density(const GammaSpace& g, const Eigen::VectorXcd& ordered_function,
                                    int n) {
  if (n == 0) {
    if (ordered_function.size() != 1) throw ShapeError("sector 0 holds a single amplitude");
    Eigen::VectorXd d(1);
    d[0] = std::norm(ordered_function[0]);
    return d;
  }
  const ConfigGraphPair& pair = g.sector(n);
  if (ordered_function.size() != pair.ordered.graph.num_vertices)
    throw ShapeError("function size differs from the sector's ordered vertex count");
  Eigen::VectorXd density = Eigen::VectorXd::Zero(pair.quotient.num_vertices);
  for (int qv = 0; qv < pair.quotient.num_vertices; ++qv)
    for (int v : pair.fibers[qv]) density[qv] += std::norm(ordered_function[v]);
  return density;
}

}  // namespace qbundle

#pragma once
// Variable-particle-number configuration space over one lattice box: a
// disjoint union of N-particle sectors, each carrying the measure
// spacing^{N*d} per configuration, together with the sector-wise unitary
// onto (anti)symmetric ordered functions, fixed only up to one phase per
// sector.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qbundle/confspace.hpp"

namespace qbundle {

// Sectors N = 1..n_max hold full ordered/quotient configuration pairs;
// sector 0 is a single point of measure 1. Sectors are collision-free, so
// n_max may not exceed the site count.
class GammaSpace {
 public:
  GammaSpace(LatticeBox box, int n_max);

  const LatticeBox& box() const { return box_; }
  int n_max() const { return n_max_; }
  const ConfigGraphPair& sector(int n) const;  // n in 1..n_max
  long sector_size(int n) const;               // unordered configuration count
  double sector_measure(int n) const;          // spacing^{n*dim} * size
  double total_measure() const;

 private:
  LatticeBox box_;
  int n_max_ = 0;
  std::vector<ConfigGraphPair> sectors_;  // index n-1
};

GammaSpace build_gamma(LatticeBox box, int n_max);

// One vector per sector (a quotient function; sector 0 is a single scalar)
// plus the free phase of that sector's identification.
struct SectorState {
  std::vector<Eigen::VectorXcd> component;  // index 0..n_max
  std::vector<double> theta;

  double total_norm_squared() const;
};

// Per-sector ordered-graph functions produced by applying exp(i theta_N)
// times the sector unitary: the canonical-frame lift of the sign-character
// bundle section for Symmetry::anti (fermionic) or the plain 1/sqrt(N!)
// descent for Symmetry::sym (bosonic). Sector 0 passes through as a scalar.
struct FockAssembly {
  std::vector<Eigen::VectorXcd> sectors;
};
FockAssembly assemble_fock(const GammaSpace& g, const SectorState& state, Symmetry kind);

// Probability mass per unordered configuration: the fiber sum of |f|^2 over
// an assembled sector function. Equals the squared magnitudes of the input
// section because the sector unitary preserves fiber mass.
Eigen::VectorXd sector_born_density(const GammaSpace& g, const Eigen::VectorXcd& ordered_function,
                                    int n);

}  // namespace qbundle

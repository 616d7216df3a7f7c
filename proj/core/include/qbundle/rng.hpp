#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace qbundle {

// Deterministic random source. mt19937_64 output is fixed by the standard,
// and all distribution logic lives here (std::uniform_real_distribution and
// friends are implementation-defined), so identical seeds give identical
// streams on any platform. Every randomized routine in the library takes an
// explicit seed or an Rng; nothing reads global entropy.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed), base_seed_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0,1) with 53 random bits
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * real01(); }

  // uniform integer in [0, n)
  int index(int n);

  // standard normal via Box-Muller (explicit formula, no library distribution)
  double gaussian();

  // Haar-distributed unitary from the QR decomposition of a Gaussian matrix,
  // with the R diagonal phases absorbed
  Eigen::MatrixXcd haar_unitary(int n);

  // independent child stream; deterministic function of (construction seed,
  // stream id) only, independent of how much of this stream was consumed
  Rng split(std::uint64_t stream) const;

 private:
  std::mt19937_64 eng_;
  std::uint64_t base_seed_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}

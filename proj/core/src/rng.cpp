#include "qbundle/rng.hpp"

#include <cmath>

#include "qbundle/errors.hpp"

namespace qbundle {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}

int Rng::index(int n) {
  if (n <= 0) throw DomainError("Rng::index needs a positive range");
  // rejection to avoid modulo bias
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(n);
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return static_cast<int>(v % static_cast<std::uint64_t>(n));
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  while (u == 0.0) u = real01();
  const double v = real01();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double theta = 2.0 * M_PI * v;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Eigen::MatrixXcd Rng::haar_unitary(int n) {
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = std::complex<double>(gaussian(), gaussian());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    std::complex<double> d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0) ? d / mag : 1.0;
  }
  return q;
}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(splitmix64(base_seed_ ^ splitmix64(stream + 0x51ed2701)));
}

}

#pragma once
// Continuum guided-trajectory dynamics for closed-form Gaussian wave packets:
// Slater determinants of freely evolving or coherently oscillating orbitals,
// the velocity field v = (hbar/m) Im(grad psi / psi), adaptive trajectory
// integration, and a Born-rule equivariance check by rejection sampling.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbundle/params.hpp"

namespace qbundle {

// Isotropic Gaussian packet with closed-form time evolution. Free packets
// spread; harmonic packets are coherent states of the isotropic oscillator,
// whose width is locked to sqrt(hbar/(2 m omega)) so the profile rigidly
// follows the classical trajectory. Normalized at every time.
class Orbital {
 public:
  enum class Kind { free, harmonic };

  static Orbital free_packet(Eigen::VectorXd center, Eigen::VectorXd momentum, double width);
  static Orbital coherent(Eigen::VectorXd center, Eigen::VectorXd momentum, double omega,
                          const PhysicalParams& params);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(center_.size()); }
  double width() const { return width_; }
  double omega() const { return omega_; }
  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::VectorXd& momentum() const { return momentum_; }

  // Value at one space point; log_gradient is d/dx_mu of log(value), which
  // stays finite wherever the Gaussian itself is nonzero.
  std::complex<double> value(const Eigen::VectorXd& x, double t,
                             const PhysicalParams& params) const;
  Eigen::VectorXcd log_gradient(const Eigen::VectorXd& x, double t,
                                const PhysicalParams& params) const;
  // |value| envelope scale used by node guards: the peak magnitude at time t.
  double peak_magnitude(double t, const PhysicalParams& params) const;

 private:
  Orbital() = default;
  Kind kind_ = Kind::free;
  Eigen::VectorXd center_, momentum_;
  double width_ = 1.0;
  double omega_ = 0.0;
};

struct WaveEval {
  std::complex<double> value;
  Eigen::VectorXcd gradient;  // d/dx of the value, length N*d
};

// Antisymmetric N-particle state det[phi_k(x_j)] / sqrt(N! det S), with S the
// orbital overlap matrix at t=0. The orbitals evolve under one shared
// single-particle Hamiltonian (all free with equal width, or all harmonic
// with equal omega), so S and the normalization are time-invariant.
class SlaterState {
 public:
  SlaterState(std::vector<Orbital> orbitals, PhysicalParams params);

  int particles() const { return static_cast<int>(orbitals_.size()); }
  int dim_space() const { return orbitals_.front().dim(); }
  int dim_config() const { return particles() * dim_space(); }
  const std::vector<Orbital>& orbitals() const { return orbitals_; }
  const PhysicalParams& params() const { return params_; }
  const Eigen::MatrixXcd& overlap() const { return overlap_; }
  double norm_factor() const { return norm_factor_; }

  // Value and full configuration-space gradient at xhat in R^{N*d}.
  WaveEval value(const Eigen::VectorXd& xhat, double t) const;
  // Hadamard envelope for |value| at xhat, the node-guard reference scale.
  double local_scale(const Eigen::VectorXd& xhat, double t) const;

 private:
  std::vector<Orbital> orbitals_;
  PhysicalParams params_;
  Eigen::MatrixXcd overlap_;
  double norm_factor_ = 1.0;
};

// Scalar gauge function f(x) = constant + lin.x + amp*sin(k.x + shift) with
// its closed-form gradient; smooth on all of R^d.
struct GaugeFunction {
  double constant = 0.0;
  Eigen::VectorXd lin;
  double amp = 0.0;
  Eigen::VectorXd k;
  double shift = 0.0;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const;
};

// Single-particle gauge pair: the base member carries vector potential 0 and
// the bare state; the transformed member carries A = grad f and the state
// multiplied by exp(i f / hbar). Both describe the same physics, which the
// trajectory tests verify.
struct GaugeDemo {
  GaugeFunction f;
  bool transformed = false;

  Eigen::VectorXd vector_potential(const Eigen::VectorXd& x) const;
};

// v_j = (hbar/m) Im(grad_j psi / psi); with a gauge demo (N=1 only) the
// minimally-coupled form v = (hbar Im(grad psi'/psi') - A)/m. Throws
// NodeError when |psi| falls below 1e-12 times the local envelope.
Eigen::VectorXd velocity(const SlaterState& state, const Eigen::VectorXd& xhat, double t);
Eigen::VectorXd velocity(const SlaterState& state, const Eigen::VectorXd& xhat, double t,
                         const GaugeDemo& gauge);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> points;
  int step_rejections = 0;
  int node_events = 0;
  bool completed = true;
  std::string diagnostic;
};

// Dormand-Prince 5(4) with adaptive steps between fixed output samples.
// A node encounter rejects and shrinks the step; persistent encounters end
// the run early with the partial trajectory and a diagnostic.
Trajectory integrate(const SlaterState& state, const Eigen::VectorXd& start, double t_end,
                     double tol = 1e-9, int samples = 101, const GaugeDemo* gauge = nullptr);

// Per-time canonical ordering: particle blocks sorted lexicographically.
// Trajectories started from permuted configurations project identically.
Trajectory project_trajectory(const Trajectory& tr, int dim_space);

// Kolmogorov-Smirnov comparison between the empirical distribution of the
// first coordinate after transporting |psi_0|^2 samples along the flow and
// the exact marginal of |psi_t|^2 (one-particle reduced density). d=1 only.
struct EnsembleReport {
  int samples = 0;
  int failures = 0;
  double ks_statistic = 0.0;
  double p_value = 0.0;
  bool degraded = false;  // more than 1% of trajectories hit a node
};
EnsembleReport equivariance_test(const SlaterState& state, int sample_count, double t,
                                 std::uint64_t seed);

// Marginal density of one labeled coordinate, gamma(x,x)/N for the reduced
// density built from the overlap inverse. Exposed for direct quadrature
// checks. d=1 only.
double marginal_density(const SlaterState& state, double x, double t);

// P(D_n <= d) complement for the Kolmogorov-Smirnov statistic with Stephens'
// finite-sample correction; returns the p-value.
double ks_p_value(double statistic, int n);

}  // namespace qbundle

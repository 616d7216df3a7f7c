#include "qbundle/bohm.hpp"

#include <algorithm>
#include <cmath>

#include "qbundle/errors.hpp"
#include "qbundle/rng.hpp"

namespace qbundle {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double factorial_of(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Classical center, momentum, and accumulated action phase of one axis of a
// coherent oscillator state.
struct CoherentAxis {
  double xc, pc, gamma;
};

CoherentAxis coherent_axis(double x0, double p0, double omega, double t,
                           const PhysicalParams& pp) {
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  CoherentAxis ax;
  ax.xc = x0 * c + p0 / (pp.mass * omega) * s;
  ax.pc = p0 * c - pp.mass * omega * x0 * s;
  ax.gamma = -0.5 * pp.hbar * omega * t + 0.5 * (ax.pc * ax.xc - p0 * x0);
  return ax;
}

}  // namespace

Orbital Orbital::free_packet(Eigen::VectorXd center, Eigen::VectorXd momentum, double width) {
  if (center.size() != momentum.size()) throw ShapeError("center/momentum size mismatch");
  if (center.size() == 0) throw ShapeError("orbital needs at least one dimension");
  if (width <= 0) throw DomainError("width must be positive");
  Orbital o;
  o.kind_ = Kind::free;
  o.center_ = std::move(center);
  o.momentum_ = std::move(momentum);
  o.width_ = width;
  return o;
}

Orbital Orbital::coherent(Eigen::VectorXd center, Eigen::VectorXd momentum, double omega,
                          const PhysicalParams& params) {
  if (center.size() != momentum.size()) throw ShapeError("center/momentum size mismatch");
  if (center.size() == 0) throw ShapeError("orbital needs at least one dimension");
  if (omega <= 0) throw DomainError("omega must be positive");
  Orbital o;
  o.kind_ = Kind::harmonic;
  o.center_ = std::move(center);
  o.momentum_ = std::move(momentum);
  o.omega_ = omega;
  o.width_ = std::sqrt(params.hbar / (2.0 * params.mass * omega));
  return o;
}

std::complex<double> Orbital::value(const Eigen::VectorXd& x, double t,
                                    const PhysicalParams& pp) const {
  if (x.size() != center_.size()) throw ShapeError("point dimension mismatch");
  const double a2 = width_ * width_;
  const double prefactor = std::pow(2.0 * M_PI * a2, -0.25);
  std::complex<double> out = 1.0;
  for (Eigen::Index mu = 0; mu < x.size(); ++mu) {
    if (kind_ == Kind::free) {
      const double tau = pp.hbar * t / (2.0 * pp.mass * a2);
      const std::complex<double> spread{1.0, tau};
      const double xc = center_[mu] + momentum_[mu] * t / pp.mass;
      const std::complex<double> exponent =
          -(x[mu] - xc) * (x[mu] - xc) / (4.0 * a2 * spread) +
          kI * (momentum_[mu] * (x[mu] - center_[mu]) -
                momentum_[mu] * momentum_[mu] * t / (2.0 * pp.mass)) /
              pp.hbar;
      out *= prefactor / std::sqrt(spread) * std::exp(exponent);
    } else {
      const auto ax = coherent_axis(center_[mu], momentum_[mu], omega_, t, pp);
      const std::complex<double> exponent =
          -(x[mu] - ax.xc) * (x[mu] - ax.xc) / (4.0 * a2) +
          kI * (ax.pc * (x[mu] - ax.xc) + ax.gamma) / pp.hbar;
      out *= prefactor * std::exp(exponent);
    }
  }
  return out;
}

Eigen::VectorXcd Orbital::log_gradient(const Eigen::VectorXd& x, double t,
                                       const PhysicalParams& pp) const {
  if (x.size() != center_.size()) throw ShapeError("point dimension mismatch");
  const double a2 = width_ * width_;
  Eigen::VectorXcd g(x.size());
  for (Eigen::Index mu = 0; mu < x.size(); ++mu) {
    if (kind_ == Kind::free) {
      const double tau = pp.hbar * t / (2.0 * pp.mass * a2);
      const std::complex<double> spread{1.0, tau};
      const double xc = center_[mu] + momentum_[mu] * t / pp.mass;
      g[mu] = -(x[mu] - xc) / (2.0 * a2 * spread) + kI * momentum_[mu] / pp.hbar;
    } else {
      const auto ax = coherent_axis(center_[mu], momentum_[mu], omega_, t, pp);
      g[mu] = -(x[mu] - ax.xc) / (2.0 * a2) + kI * ax.pc / pp.hbar;
    }
  }
  return g;
}

double Orbital::peak_magnitude(double t, const PhysicalParams& pp) const {
  const double a2 = width_ * width_;
  double axis = std::pow(2.0 * M_PI * a2, -0.25);
  if (kind_ == Kind::free) {
    const double tau = pp.hbar * t / (2.0 * pp.mass * a2);
    axis *= std::pow(1.0 + tau * tau, -0.25);
  }
  return std::pow(axis, static_cast<double>(center_.size()));
}

SlaterState::SlaterState(std::vector<Orbital> orbitals, PhysicalParams params)
    : orbitals_(std::move(orbitals)), params_(params) {
  if (orbitals_.empty()) throw ShapeError("a state needs at least one orbital");
  const auto& first = orbitals_.front();
  for (const auto& o : orbitals_) {
    if (o.dim() != first.dim()) throw InvalidConfigError("orbitals live in different dimensions");
    if (o.kind() != first.kind())
      throw InvalidConfigError("orbitals must share one evolution kind");
    if (std::abs(o.width() - first.width()) > 1e-12)
      throw InvalidConfigError("orbitals must share one width");
    if (o.kind() == Orbital::Kind::harmonic && std::abs(o.omega() - first.omega()) > 1e-12)
      throw InvalidConfigError("harmonic orbitals must share one frequency");
  }

  // Overlap of two equal-width Gaussians, evaluated axis by axis in closed
  // form; time-invariant because all orbitals evolve under one Hamiltonian.
  const int n = particles();
  overlap_.resize(n, n);
  const double a2 = first.width() * first.width();
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      std::complex<double> s = 1.0;
      for (int mu = 0; mu < first.dim(); ++mu) {
        const double ck = orbitals_[k].center()[mu], cl = orbitals_[l].center()[mu];
        const double pk = orbitals_[k].momentum()[mu], pl = orbitals_[l].momentum()[mu];
        const double dq = pl - pk;
        s *= std::exp(-(ck - cl) * (ck - cl) / (8.0 * a2) -
                      a2 * dq * dq / (2.0 * params_.hbar * params_.hbar) +
                      kI * (dq * (ck + cl) / 2.0 + pk * ck - pl * cl) / params_.hbar);
      }
      overlap_(k, l) = s;
    }

  const std::complex<double> det = overlap_.partialPivLu().determinant();
  if (std::abs(det.imag()) > 1e-10 || det.real() < 1e-10)
    throw InvalidConfigError("orbitals are too close to linear dependence");
  norm_factor_ = 1.0 / std::sqrt(factorial_of(n) * det.real());
}

namespace {

std::complex<double> minor_det(const Eigen::MatrixXcd& m, int row, int col) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return 1.0;
  Eigen::MatrixXcd sub(n - 1, n - 1);
  for (int r = 0, rr = 0; r < n; ++r) {
    if (r == row) continue;
    for (int c = 0, cc = 0; c < n; ++c) {
      if (c == col) continue;
      sub(rr, cc++) = m(r, c);
    }
    ++rr;
  }
  if (n - 1 == 1) return sub(0, 0);
  if (n - 1 == 2) return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
  return sub.partialPivLu().determinant();
}

}  // namespace

WaveEval SlaterState::value(const Eigen::VectorXd& xhat, double t) const {
  const int n = particles();
  const int d = dim_space();
  if (xhat.size() != static_cast<Eigen::Index>(n) * d)
    throw ShapeError("configuration size differs from N*d");

  Eigen::MatrixXcd m(n, n);
  std::vector<Eigen::VectorXcd> logg(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd xj = xhat.segment(j * d, d);
    for (int k = 0; k < n; ++k) {
      m(k, j) = orbitals_[k].value(xj, t, params_);
      logg[static_cast<std::size_t>(k) * n + j] = orbitals_[k].log_gradient(xj, t, params_);
    }
  }

  WaveEval out;
  // Cofactors stay finite at nodes, so the gradient is evaluated from minors
  // rather than from the inverse.
  Eigen::MatrixXcd cof(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      cof(k, j) = ((k + j) % 2 ? -1.0 : 1.0) * minor_det(m, k, j);

  std::complex<double> det = 0;
  for (int k = 0; k < n; ++k) det += m(k, 0) * cof(k, 0);
  out.value = norm_factor_ * det;

  out.gradient.resize(static_cast<Eigen::Index>(n) * d);
  for (int j = 0; j < n; ++j)
    for (int mu = 0; mu < d; ++mu) {
      std::complex<double> acc = 0;
      for (int k = 0; k < n; ++k)
        acc += cof(k, j) * m(k, j) * logg[static_cast<std::size_t>(k) * n + j][mu];
      out.gradient[j * d + mu] = norm_factor_ * acc;
    }
  return out;
}

double SlaterState::local_scale(const Eigen::VectorXd& xhat, double t) const {
  const int n = particles();
  const int d = dim_space();
  double bound = norm_factor_;
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd xj = xhat.segment(j * d, d);
    double col = 0;
    for (int k = 0; k < n; ++k) col += std::norm(orbitals_[k].value(xj, t, params_));
    bound *= std::sqrt(col);
  }
  return bound;
}

double GaugeFunction::value(const Eigen::VectorXd& x) const {
  double v = constant;
  if (lin.size()) v += lin.dot(x);
  if (amp != 0.0 && k.size()) v += amp * std::sin(k.dot(x) + shift);
  return v;
}

Eigen::VectorXd GaugeFunction::grad(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  if (lin.size()) g += lin;
  if (amp != 0.0 && k.size()) g += amp * std::cos(k.dot(x) + shift) * k;
  return g;
}

Eigen::VectorXd GaugeDemo::vector_potential(const Eigen::VectorXd& x) const {
  return transformed ? f.grad(x) : Eigen::VectorXd::Zero(x.size());
}

namespace {

Eigen::VectorXd velocity_impl(const SlaterState& state, const Eigen::VectorXd& xhat, double t,
                              const GaugeDemo* gauge) {
  WaveEval w = state.value(xhat, t);
  Eigen::VectorXcd grad = w.gradient;
  std::complex<double> value = w.value;
  const PhysicalParams& pp = state.params();

  Eigen::VectorXd a;
  if (gauge) {
    if (state.particles() != 1)
      throw DomainError("gauge demos are single-particle constructions");
    if (gauge->transformed) {
      // psi' = exp(i f / hbar) psi, evaluated honestly from f at the point
      const std::complex<double> phase = std::exp(kI * gauge->f.value(xhat) / pp.hbar);
      const Eigen::VectorXcd fgrad = gauge->f.grad(xhat).cast<std::complex<double>>();
      grad = phase * (w.gradient + (kI / pp.hbar * w.value) * fgrad);
      value = phase * w.value;
    }
    a = gauge->vector_potential(xhat);
  }

  const double guard = 1e-12 * state.local_scale(xhat, t);
  if (std::abs(value) <= guard) {
    std::string where = "(";
    for (Eigen::Index i = 0; i < xhat.size(); ++i)
      where += std::to_string(xhat[i]) + (i + 1 < xhat.size() ? ", " : ")");
    throw NodeError("wave function vanishes near " + where + " at t=" + std::to_string(t));
  }

  Eigen::VectorXd v(xhat.size());
  for (Eigen::Index i = 0; i < xhat.size(); ++i)
    v[i] = pp.hbar * std::imag(grad[i] / value);
  if (gauge) v -= a;
  return v / pp.mass;
}

}  // namespace

Eigen::VectorXd velocity(const SlaterState& state, const Eigen::VectorXd& xhat, double t) {
  return velocity_impl(state, xhat, t, nullptr);
}

Eigen::VectorXd velocity(const SlaterState& state, const Eigen::VectorXd& xhat, double t,
                         const GaugeDemo& gauge) {
  return velocity_impl(state, xhat, t, &gauge);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0, 1. / 5, 3. / 10, 4. / 5, 8. / 9, 1, 1};
constexpr double kA[7][6] = {
    {},
    {1. / 5},
    {3. / 40, 9. / 40},
    {44. / 45, -56. / 15, 32. / 9},
    {19372. / 6561, -25360. / 2187, 64448. / 6561, -212. / 729},
    {9017. / 3168, -355. / 33, 46732. / 5247, 49. / 176, -5103. / 18656},
    {35. / 384, 0, 500. / 1113, 125. / 192, -2187. / 6784, 11. / 84}};
constexpr double kErr[7] = {71. / 57600, 0,           -71. / 16695, 71. / 1920,
                            -17253. / 339200, 22. / 525, -1. / 40};

}  // namespace

Trajectory integrate(const SlaterState& state, const Eigen::VectorXd& start, double t_end,
                     double tol, int samples, const GaugeDemo* gauge) {
  if (samples < 2) throw DomainError("need at least two output samples");
  if (t_end < 0) throw DomainError("t_end must be nonnegative");
  if (start.size() != state.dim_config()) throw ShapeError("start size differs from N*d");

  Trajectory tr;
  tr.times.push_back(0.0);
  tr.points.push_back(start);
  if (t_end == 0.0) {
    for (int i = 1; i < samples; ++i) {
      tr.times.push_back(0.0);
      tr.points.push_back(start);
    }
    return tr;
  }

  auto rhs = [&](const Eigen::VectorXd& y, double t) { return velocity_impl(state, y, t, gauge); };

  Eigen::VectorXd y = start;
  double t = 0.0;
  double h = t_end / (samples - 1) / 8.0;
  Eigen::VectorXd k[7];
  bool have_k1 = false;
  const double h_min = 1e-14 * t_end;
  long total_steps = 0;

  for (int i = 1; i < samples; ++i) {
    const double target = t_end * i / (samples - 1);
    while (t < target) {
      if (target - t <= 1e-14 * t_end) break;  // snap across rounding dust
      if (++total_steps > 10'000'000) {
        tr.completed = false;
        tr.diagnostic = "step budget exhausted at t=" + std::to_string(t);
        tr.times.push_back(t);
        tr.points.push_back(y);
        return tr;
      }
      h = std::min(h, target - t);
      bool node_hit = false;
      Eigen::VectorXd ynew;
      double errnorm = 0;
      try {
        if (!have_k1) {
          k[0] = rhs(y, t);
          have_k1 = true;
        }
        for (int s = 1; s < 7; ++s) {
          Eigen::VectorXd ys = y;
          for (int q = 0; q < s; ++q) ys += h * kA[s][q] * k[q];
          k[s] = rhs(ys, t + kC[s] * h);
        }
        ynew = y;
        for (int q = 0; q < 6; ++q) ynew += h * kA[6][q] * k[q];
        Eigen::VectorXd err = Eigen::VectorXd::Zero(y.size());
        for (int q = 0; q < 7; ++q) err += h * kErr[q] * k[q];
        for (Eigen::Index c = 0; c < y.size(); ++c) {
          const double sc = tol + tol * std::max(std::abs(y[c]), std::abs(ynew[c]));
          errnorm += (err[c] / sc) * (err[c] / sc);
        }
        errnorm = std::sqrt(errnorm / static_cast<double>(y.size()));
      } catch (const NodeError& e) {
        node_hit = true;
        ++tr.node_events;
        tr.diagnostic = e.what();
      }

      if (node_hit) {
        ++tr.step_rejections;
        h *= 0.5;
        have_k1 = false;  // the cached slope may itself sit near the node
        if (h < h_min) {
          tr.completed = false;
          tr.diagnostic = "node guard: " + tr.diagnostic;
          tr.times.push_back(t);
          tr.points.push_back(y);
          return tr;
        }
        continue;
      }

      if (errnorm <= 1.0) {
        t += h;
        y = ynew;
        k[0] = k[6];  // first-same-as-last
        const double grow = errnorm == 0 ? 5.0 : std::clamp(0.9 * std::pow(errnorm, -0.2), 0.2, 5.0);
        h *= grow;
      } else {
        ++tr.step_rejections;
        h *= std::clamp(0.9 * std::pow(errnorm, -0.2), 0.1, 0.9);
        if (h < h_min) {
          tr.completed = false;
          tr.diagnostic = "step size underflow at t=" + std::to_string(t);
          tr.times.push_back(t);
          tr.points.push_back(y);
          return tr;
        }
      }
    }
    tr.times.push_back(target);
    tr.points.push_back(y);
  }
  return tr;
}

Trajectory project_trajectory(const Trajectory& tr, int dim_space) {
  Trajectory out = tr;
  for (auto& point : out.points) {
    const int n = static_cast<int>(point.size()) / dim_space;
    std::vector<std::vector<double>> blocks(n);
    for (int j = 0; j < n; ++j) {
      blocks[j].resize(dim_space);
      for (int mu = 0; mu < dim_space; ++mu) blocks[j][mu] = point[j * dim_space + mu];
    }
    std::sort(blocks.begin(), blocks.end());
    for (int j = 0; j < n; ++j)
      for (int mu = 0; mu < dim_space; ++mu) point[j * dim_space + mu] = blocks[j][mu];
  }
  return out;
}

double marginal_density(const SlaterState& state, double x, double t) {
  if (state.dim_space() != 1) throw DimensionError("marginal density is for d=1 states");
  const int n = state.particles();
  const Eigen::MatrixXcd inv = state.overlap().inverse();
  Eigen::VectorXcd phi(n);
  Eigen::VectorXd point(1);
  point[0] = x;
  for (int k = 0; k < n; ++k) phi[k] = state.orbitals()[k].value(point, t, state.params());
  const Eigen::VectorXcd phic = phi.conjugate();
  const std::complex<double> rho = phic.dot(inv * phic);  // dot re-conjugates the left side
  return std::real(rho) / n;
}

double ks_p_value(double statistic, int n) {
  const double lambda =
      (std::sqrt(static_cast<double>(n)) + 0.12 + 0.11 / std::sqrt(static_cast<double>(n))) *
      statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0;
  for (int j = 1; j <= 200; ++j) {
    const double term = (j % 2 ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

EnsembleReport equivariance_test(const SlaterState& state, int sample_count, double t,
                                 std::uint64_t seed) {
  if (state.dim_space() != 1) throw DimensionError("the equivariance check runs in d=1");
  if (sample_count < 10) throw DomainError("sample count too small");
  const int n = state.particles();
  const PhysicalParams& pp = state.params();

  const double det_s = 1.0 / (state.norm_factor() * state.norm_factor() * factorial_of(n));
  const double envelope_c = std::pow(static_cast<double>(n), n) / (factorial_of(n) * det_s);
  const double a = state.orbitals().front().width();

  Rng master(static_cast<std::uint64_t>(seed));
  EnsembleReport report;
  report.samples = sample_count;

  std::vector<double> marked;
  marked.reserve(static_cast<std::size_t>(sample_count));
  Eigen::VectorXd point(1);

  for (int i = 0; i < sample_count; ++i) {
    Rng rng = master.split(static_cast<std::uint64_t>(i));
    Eigen::VectorXd xhat(n);
    bool accepted = false;
    for (int attempt = 0; attempt < 100000 && !accepted; ++attempt) {
      double mixture = 1.0;
      for (int j = 0; j < n; ++j) {
        const int pick = static_cast<int>(rng.index(static_cast<std::uint64_t>(n)));
        xhat[j] = state.orbitals()[pick].center()[0] + a * rng.gaussian();
        double mix_j = 0;
        point[0] = xhat[j];
        for (int k = 0; k < n; ++k)
          mix_j += std::norm(state.orbitals()[k].value(point, 0.0, pp));
        mixture *= mix_j / n;
      }
      const double target = std::norm(state.value(xhat, 0.0).value);
      accepted = rng.real01() * envelope_c * mixture <= target;
    }
    if (!accepted) throw Error("rejection sampler failed to accept");

    if (t == 0.0) {
      marked.push_back(xhat[0]);
      continue;
    }
    Trajectory tr = integrate(state, xhat, t, 1e-9, 2);
    if (!tr.completed) {
      ++report.failures;
      continue;
    }
    marked.push_back(tr.points.back()[0]);
  }

  report.degraded = report.failures * 100 > sample_count;

  // Exact marginal CDF on a wide grid around the evolved orbital centers.
  double lo = 1e300, hi = -1e300;
  for (const auto& o : state.orbitals()) {
    double xc = o.center()[0];
    double w = a;
    if (o.kind() == Orbital::Kind::free) {
      xc += o.momentum()[0] * t / pp.mass;
      const double tau = pp.hbar * t / (2.0 * pp.mass * a * a);
      w = a * std::sqrt(1.0 + tau * tau);
    } else {
      xc = coherent_axis(o.center()[0], o.momentum()[0], o.omega(), t, pp).xc;
    }
    lo = std::min(lo, xc - 14.0 * w);
    hi = std::max(hi, xc + 14.0 * w);
  }

  const int grid = 64001;
  const double step = (hi - lo) / (grid - 1);
  std::vector<double> cdf(grid, 0.0);
  double prev = marginal_density(state, lo, t);
  for (int g = 1; g < grid; ++g) {
    const double cur = marginal_density(state, lo + g * step, t);
    cdf[g] = cdf[g - 1] + 0.5 * (prev + cur) * step;
    prev = cur;
  }
  const double total = cdf.back();
  for (auto& c : cdf) c /= total;

  auto cdf_at = [&](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double pos = (x - lo) / step;
    const int g = std::min(static_cast<int>(pos), grid - 2);
    const double frac = pos - g;
    return cdf[g] * (1.0 - frac) + cdf[g + 1] * frac;
  };

  std::sort(marked.begin(), marked.end());
  const int m = static_cast<int>(marked.size());
  double d_stat = 0;
  for (int i = 0; i < m; ++i) {
    const double f = cdf_at(marked[i]);
    d_stat = std::max(d_stat, std::max(f - static_cast<double>(i) / m,
                                       static_cast<double>(i + 1) / m - f));
  }
  report.ks_statistic = d_stat;
  report.p_value = ks_p_value(d_stat, m);
  return report;
}

}  // namespace qbundle

#include "chrate/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "chrate/rng.hpp"

namespace chrate {

NoiseIncrements make_noise(std::uint64_t seed, std::uint64_t path_index, int m, int n,
                           double T) {
  NoiseIncrements noise;
  noise.seed = seed;
  noise.path_index = path_index;
  noise.m = m;
  noise.n = n;
  noise.T = T;
  noise.increments.resize(m, n);
  std::uint64_t key = mix_key(seed, path_index);
  double sd = std::sqrt(T / m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < n; ++k)
      noise.increments(j, k) =
          sd * counter_normal(key, static_cast<std::uint64_t>(j) * n + k);
  return noise;
}

namespace {

// Max |b'| over [-radius, radius], sampled; b is only locally Lipschitz.
double local_lipschitz(const Coefficients& coeffs, double radius) {
  double lip = 0.0;
  for (int i = 0; i <= 32; ++i) {
    double x = -radius + 2.0 * radius * i / 32.0;
    lip = std::max(lip, std::abs(coeffs.b_prime(x)));
  }
  return lip;
}

SdePath integrate_etd1(const Coefficients& coeffs, int n, int m, double T, double eps,
                       const NoiseIncrements& noise, const Control* control) {
  if (noise.m != m || noise.n != n)
    throw std::invalid_argument("simulate_path: noise grid mismatch");
  SpectralBasis basis(n);
  double dt = T / m;

  Vec decay(n), p1(n);
  for (int j = 0; j < n; ++j) {
    double d = basis.lambda(j) * basis.lambda(j);
    decay(j) = std::exp(-d * dt);
    p1(j) = phi1(d * dt);
  }

  int rep = 1;
  if (control) {
    if (control->m < 1 || m % control->m != 0)
      throw std::invalid_argument("controlled path: control time grid must divide m");
    if (control->n != n)
      throw std::invalid_argument("controlled path: control cell grid mismatch");
    rep = m / control->m;
  }

  SdePath out;
  out.eps = eps;
  out.path.T = T;
  out.path.m = m;
  out.path.n = n;
  out.path.states.resize(m + 1, n);
  for (int k = 1; k <= n; ++k) out.path.states(0, k - 1) = coeffs.u0(basis.grid.node(k));

  double noise_scale = std::sqrt(eps * n / kPi);
  Vec U = out.path.slice(0);
  Vec modes = basis.forward(U);
  Vec bU(n), forced(n);
  double run_max = U.cwiseAbs().maxCoeff();
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < n; ++k) bU(k) = coeffs.b(U(k));
    Vec drift_modes = basis.forward(apply_A(basis.grid, bU));
    forced.setZero();
    if (control) forced += dt * control->values.row(j / rep).transpose();
    if (eps > 0.0) forced += noise_scale * noise.increments.row(j).transpose();
    for (int k = 0; k < n; ++k) forced(k) *= coeffs.sigma(U(k));
    modes = decay.cwiseProduct(modes + basis.forward(forced)) +
            dt * p1.cwiseProduct(drift_modes);
    U = basis.inverse(modes);
    if (!U.allFinite())
      throw std::runtime_error("simulate_path: state blew up; double the time steps m");
    run_max = std::max(run_max, U.cwiseAbs().maxCoeff());
    out.path.states.row(j + 1) = U.transpose();
  }
  if (dt * local_lipschitz(coeffs, run_max) >= 1.0)
    throw std::runtime_error(
        "simulate_path: dt * Lip(b) >= 1 on the reachable ball; double the time steps m");
  return out;
}

}  // namespace

SdePath simulate_path(const Coefficients& coeffs, int n, int m, double T, double eps,
                      const NoiseIncrements& noise) {
  return integrate_etd1(coeffs, n, m, T, eps, noise, nullptr);
}

SdePath simulate_controlled_path(const Coefficients& coeffs, int n, int m, double T,
                                 double eps, const NoiseIncrements& noise,
                                 const Control& control) {
  if (eps == 0.0) {
    SdePath out;
    out.eps = 0.0;
    out.path = skeleton_forward(coeffs, control, n, m);
    return out;
  }
  return integrate_etd1(coeffs, n, m, T, eps, noise, &control);
}

double girsanov_weight(const NoiseIncrements& noise, const Control& control,
                       double eps) {
  if (eps <= 0.0) throw std::invalid_argument("girsanov_weight: eps must be positive");
  if (control.n != noise.n || control.m < 1 || noise.m % control.m != 0)
    throw std::invalid_argument("girsanov_weight: control and noise grids incompatible");
  int rep = noise.m / control.m;
  double dt = noise.T / noise.m;
  double cross = 0.0, qsq = 0.0;
  double qscale = std::sqrt(kPi / control.n);  // theta inverse
  for (int j = 0; j < noise.m; ++j) {
    Vec q = qscale * control.values.row(j / rep).transpose();
    cross += q.dot(noise.increments.row(j).transpose());
    qsq += dt * q.squaredNorm();
  }
  return std::exp(-cross / std::sqrt(eps) - qsq / (2.0 * eps));
}

}  // namespace chrate

#include "chrate/rare_events.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace chrate {

McEstimate mc_hitting_probability(const Coefficients& coeffs, int n, int m, double T,
                                  double eps, double xbar, double y, long long N,
                                  std::uint64_t seed, const Control* tilt,
                                  int threads) {
  if (N < 100) throw std::invalid_argument("mc_hitting_probability: N must be >= 100");
  if (threads < 1) threads = 1;
  SpatialGrid grid(n);

  std::vector<double> contrib(N), weight(N);
  auto worker = [&](long long lo, long long hi) {
    for (long long i = lo; i < hi; ++i) {
      NoiseIncrements noise = make_noise(seed, static_cast<std::uint64_t>(i), m, n, T);
      SdePath sp = tilt ? simulate_controlled_path(coeffs, n, m, T, eps, noise, *tilt)
                        : simulate_path(coeffs, n, m, T, eps, noise);
      double endpoint = interpolate_pn(grid, sp.path.slice(m), xbar);
      double w = tilt ? girsanov_weight(noise, *tilt, eps) : 1.0;
      weight[i] = w;
      contrib[i] = (endpoint >= y) ? w : 0.0;
    }
  };
  if (threads == 1) {
    worker(0, N);
  } else {
    std::vector<std::thread> pool;
    long long chunk = (N + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      long long lo = t * chunk, hi = std::min<long long>(N, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Fixed-order reduction so thread count never changes the result.
  double sum = 0.0, sumsq = 0.0, wsum = 0.0;
  for (long long i = 0; i < N; ++i) {
    sum += contrib[i];
    sumsq += contrib[i] * contrib[i];
    wsum += weight[i];
  }

  McEstimate est;
  est.eps = eps;
  est.n = n;
  est.y = y;
  est.samples = N;
  est.importance_sampling = tilt != nullptr;
  est.p_hat = sum / N;
  est.mean_weight = wsum / N;
  double var = std::max(0.0, sumsq / N - est.p_hat * est.p_hat);
  est.std_err = std::sqrt(var / N);
  if (est.p_hat > 0.0) {
    est.minus_eps_log_p = -eps * std::log(est.p_hat);
  } else {
    est.minus_eps_log_p = std::numeric_limits<double>::infinity();
    est.underflow = !est.importance_sampling;
  }
  return est;
}

LdpFit ldp_fit(const Coefficients& coeffs, int n, int m, double T, double xbar,
               double y, const std::vector<double>& eps_list, long long N,
               std::uint64_t seed, double rate_inf, const Control* tilt, int threads) {
  LdpFit fit;
  fit.rate_inf = rate_inf;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    // distinct seed stream per epsilon so paths are independent across rows
    McEstimate est = mc_hitting_probability(coeffs, n, m, T, eps_list[i], xbar, y, N,
                                            seed + 1000003ull * i, tilt, threads);
    fit.rows.push_back({eps_list[i], est});
  }

  // Least-squares line -eps ln P = a + b eps; the intercept a extrapolates
  // the LDP limit through the polynomial prefactor.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& row : fit.rows) {
    if (!std::isfinite(row.estimate.minus_eps_log_p)) {
      ++fit.excluded;
      continue;
    }
    double x = row.eps, v = row.estimate.minus_eps_log_p;
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
    ++cnt;
  }
  if (cnt >= 2) {
    double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    fit.extrapolated = (sy - slope * sx) / cnt;
  } else if (cnt == 1) {
    fit.extrapolated = sy;
  } else {
    fit.extrapolated = std::numeric_limits<double>::quiet_NaN();
  }
  fit.rel_gap = std::abs(fit.extrapolated - rate_inf) / std::max(1e-300, std::abs(rate_inf));
  return fit;
}

}  // namespace chrate

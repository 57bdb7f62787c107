#pragma once

#include <cstdint>
#include <vector>

#include "chrate/dynamics.hpp"
#include "chrate/skeleton.hpp"

namespace chrate {

struct McEstimate {
  double eps = 0.0;
  int n = 0;
  double y = 0.0;  // event A = [y, infinity)
  long long samples = 0;
  double p_hat = 0.0;
  double std_err = 0.0;
  double minus_eps_log_p = 0.0;
  double mean_weight = 1.0;  // IS unbiasedness audit; 1 for plain MC
  bool importance_sampling = false;
  bool underflow = false;  // zero hits without tilt
};

// P(u^{eps,n}(T, xbar) >= y) by Monte Carlo, optionally tilted by a control
// with Girsanov reweighting. Sample-parallel; the counter RNG and a fixed
// reduction order make the result identical for any thread count.
McEstimate mc_hitting_probability(const Coefficients& coeffs, int n, int m, double T,
                                  double eps, double xbar, double y, long long N,
                                  std::uint64_t seed, const Control* tilt = nullptr,
                                  int threads = 1);

struct LdpFitRow {
  double eps;
  McEstimate estimate;
};

struct LdpFit {
  std::vector<LdpFitRow> rows;
  double extrapolated = 0.0;  // linear-in-eps fit of -eps ln P at eps = 0
  double rate_inf = 0.0;      // inf over A of I^n, supplied by the caller
  double rel_gap = 0.0;
  int excluded = 0;  // underflowed estimates dropped from the fit
};

LdpFit ldp_fit(const Coefficients& coeffs, int n, int m, double T, double xbar,
               double y, const std::vector<double>& eps_list, long long N,
               std::uint64_t seed, double rate_inf, const Control* tilt = nullptr,
               int threads = 1);

}  // namespace chrate

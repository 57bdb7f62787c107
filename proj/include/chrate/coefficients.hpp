#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace chrate {

using ScalarMap = std::function<double(double)>;

// Problem data: drift nonlinearity b, diffusion sigma, initial datum u0.
// All maps must be pure; instances are immutable after construction and safe
// to share across threads.
struct Coefficients {
  ScalarMap b;
  ScalarMap b_prime;
  ScalarMap sigma;
  ScalarMap sigma_prime;
  ScalarMap u0;
  ScalarMap u0_prime;
  bool is_default_b = false;
  double sigma_floor = 1e-6;

  std::string b_name = "custom";
  std::string sigma_name = "custom";
  std::string u0_name = "custom";
};

// Named factories matching the config menu.
Coefficients make_coefficients(const std::string& b_name,
                               const std::string& sigma_name, double sigma_c,
                               const std::string& u0_name, double u0_c, int u0_k,
                               const std::vector<double>& u0_poly = {});

ScalarMap cubic_b();
ScalarMap zero_map();

// Default everything: b(x)=x^3-x, sigma=1, u0=cos(x).
Coefficients default_coefficients();
// Linear-Gaussian oracle setup: b=0, sigma=1, u0=0.
Coefficients linear_coefficients();

struct AssumptionCheck {
  std::string name;
  bool pass;
  double measured;
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Scans [lo,hi] at `points` samples: sigma bound, sigma Lipschitz constant,
// u0 Neumann compatibility, min |sigma| (nondegeneracy).
ValidationReport validate_assumptions(const Coefficients& coeffs, double lo = -10.0,
                                      double hi = 10.0, int points = 10000,
                                      double sigma_bound = 100.0,
                                      double lipschitz_bound = 100.0);

// For the default cubic b: returns (b(y)-b(x))(x-y) and the factor
// (1+x^2+y^2). The first is <= (x-y)^2; the second certifies
// |b(x)-b(y)| <= c0 (1+x^2+y^2)|x-y| with c0 = 4.
std::pair<double, double> cubic_drift_bounds(double x, double y);

}  // namespace chrate

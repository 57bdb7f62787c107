#include "chrate/coefficients.hpp"

#include <cmath>
#include <stdexcept>

#include "chrate/grid.hpp"

namespace chrate {

ScalarMap cubic_b() {
  return [](double x) { return x * x * x - x; };
}

ScalarMap zero_map() {
  return [](double) { return 0.0; };
}

namespace {

void set_b(Coefficients& c, const std::string& name) {
  if (name == "cubic") {
    c.b = cubic_b();
    c.b_prime = [](double x) { return 3.0 * x * x - 1.0; };
    c.is_default_b = true;
  } else if (name == "zero") {
    c.b = zero_map();
    c.b_prime = zero_map();
    c.is_default_b = false;
  } else {
    throw std::invalid_argument("unknown b: " + name);
  }
  c.b_name = name;
}

void set_sigma(Coefficients& c, const std::string& name, double p) {
  if (name == "one") {
    c.sigma = [](double) { return 1.0; };
    c.sigma_prime = zero_map();
  } else if (name == "shifted_sine") {
    if (p <= 1.0) throw std::invalid_argument("shifted_sine: parameter must exceed 1");
    c.sigma = [p](double x) { return p + std::sin(x); };
    c.sigma_prime = [](double x) { return std::cos(x); };
  } else if (name == "tanh_clamp") {
    if (p <= 0.0) throw std::invalid_argument("tanh_clamp: parameter must be positive");
    c.sigma = [p](double x) { return 1.0 + p * std::tanh(x); };
    c.sigma_prime = [p](double x) {
      double t = std::tanh(x);
      return p * (1.0 - t * t);
    };
    if (p >= 1.0) throw std::invalid_argument("tanh_clamp: parameter must stay below 1 for nondegeneracy");
  } else {
    throw std::invalid_argument("unknown sigma: " + name);
  }
  c.sigma_name = name;
}

void set_u0(Coefficients& c, const std::string& name, double p, int k,
            const std::vector<double>& poly) {
  if (name == "constant") {
    c.u0 = [p](double) { return p; };
    c.u0_prime = zero_map();
  } else if (name == "cos") {
    c.u0 = [p, k](double x) { return p * std::cos(k * x); };
    c.u0_prime = [p, k](double x) { return -p * k * std::sin(k * x); };
  } else if (name == "polynomial") {
    c.u0 = [poly](double x) {
      double v = 0.0;
      for (int i = static_cast<int>(poly.size()) - 1; i >= 0; --i) v = v * x + poly[i];
      return v;
    };
    c.u0_prime = [poly](double x) {
      double v = 0.0;
      for (int i = static_cast<int>(poly.size()) - 1; i >= 1; --i) v = v * x + i * poly[i];
      return v;
    };
    double d0 = c.u0_prime(0.0), dpi = c.u0_prime(kPi);
    if (std::abs(d0) > 1e-8 || std::abs(dpi) > 1e-8)
      throw std::invalid_argument("polynomial u0 violates Neumann compatibility");
  } else {
    throw std::invalid_argument("unknown u0: " + name);
  }
  c.u0_name = name;
}

}  // namespace

Coefficients make_coefficients(const std::string& b_name, const std::string& sigma_name,
                               double sigma_c, const std::string& u0_name, double u0_c,
                               int u0_k, const std::vector<double>& u0_poly) {
  Coefficients c;
  set_b(c, b_name);
  set_sigma(c, sigma_name, sigma_c);
  set_u0(c, u0_name, u0_c, u0_k, u0_poly);
  return c;
}

Coefficients default_coefficients() {
  return make_coefficients("cubic", "one", 0.0, "cos", 1.0, 1);
}

Coefficients linear_coefficients() {
  return make_coefficients("zero", "one", 0.0, "constant", 0.0, 0);
}

ValidationReport validate_assumptions(const Coefficients& coeffs, double lo, double hi,
                                      int points, double sigma_bound,
                                      double lipschitz_bound) {
  ValidationReport report;
  double dx = (hi - lo) / (points - 1);

  double sig_max = 0.0, sig_min = std::numeric_limits<double>::infinity();
  double lip = 0.0;
  double prev = coeffs.sigma(lo);
  for (int i = 0; i < points; ++i) {
    double x = lo + i * dx;
    double s = coeffs.sigma(x);
    if (!std::isfinite(s)) throw std::runtime_error("sigma evaluated non-finite");
    sig_max = std::max(sig_max, std::abs(s));
    sig_min = std::min(sig_min, std::abs(s));
    if (i > 0) lip = std::max(lip, std::abs(s - prev) / dx);
    prev = s;
  }
  report.checks.push_back({"sigma_bounded", sig_max <= sigma_bound, sig_max,
                           "max |sigma| over scan"});
  report.checks.push_back({"sigma_lipschitz", lip <= lipschitz_bound, lip,
                           "max difference quotient over scan"});
  report.checks.push_back({"sigma_nondegenerate", sig_min >= coeffs.sigma_floor, sig_min,
                           "min |sigma| over scan"});

  double d0 = coeffs.u0_prime(0.0);
  double dpi = coeffs.u0_prime(kPi);
  if (!std::isfinite(d0) || !std::isfinite(dpi))
    throw std::runtime_error("u0 derivative evaluated non-finite");
  double neumann = std::max(std::abs(d0), std::abs(dpi));
  report.checks.push_back({"u0_neumann", neumann <= 1e-8, neumann,
                           "max |u0'| at the endpoints"});
  return report;
}

std::pair<double, double> cubic_drift_bounds(double x, double y) {
  auto b = cubic_b();
  return {(b(y) - b(x)) * (x - y), 1.0 + x * x + y * y};
}

}  // namespace chrate

#include "chrate/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace chrate {

static GaussRule compute_rule(int npts) {
  GaussRule rule;
  rule.nodes.resize(npts);
  rule.weights.resize(npts);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < npts; ++i) {
    // Chebyshev initial guess, Newton on P_n.
    double x = std::cos(pi * (i + 0.75) / (npts + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= npts; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = npts * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_legendre(int npts) {
  if (npts < 1) throw std::invalid_argument("gauss_legendre: npts must be positive");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(npts);
  if (it == cache.end()) it = cache.emplace(npts, compute_rule(npts)).first;
  return it->second;
}

void gauss_on_interval(int npts, double a, double b, std::vector<double>& x,
                       std::vector<double>& w) {
  const GaussRule& rule = gauss_legendre(npts);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  x.resize(npts);
  w.resize(npts);
  for (int i = 0; i < npts; ++i) {
    x[i] = mid + half * rule.nodes[i];
    w[i] = half * rule.weights[i];
  }
}

}  // namespace chrate

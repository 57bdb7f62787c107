#include "chrate/grid.hpp"

#include <algorithm>

namespace chrate {

InterpWeights interp_weights(const SpatialGrid& grid, double x) {
  if (x < 0.0 || x > kPi) throw std::invalid_argument("interp_weights: x outside [0,pi]");
  const int n = grid.n;
  double x1 = grid.node(1);
  double xn = grid.node(n);
  if (x <= x1) return {0, 0, 1.0, 0.0};
  if (x >= xn) return {n - 1, n - 1, 1.0, 0.0};
  int k = grid.cell_index(x);  // 1-based
  double xk = grid.node(k);
  if (x < xk) --k;
  // now node(k) <= x < node(k+1)
  double lo = grid.node(k);
  double t = (x - lo) / grid.h;
  if (t <= 0.0) return {k - 1, k - 1, 1.0, 0.0};
  return {k - 1, k, 1.0 - t, t};
}

double interpolate_pn(const SpatialGrid& grid, const Vec& values, double x) {
  InterpWeights w = interp_weights(grid, x);
  return w.w1 * values(w.k1) + w.w2 * values(w.k2);
}

double ln_norm(const SpatialGrid& grid, const Vec& a, double p) {
  if (std::isinf(p)) return a.cwiseAbs().maxCoeff();
  if (p <= 0.0) throw std::invalid_argument("ln_norm: p must be positive");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::pow(std::abs(a(i)), p);
  return std::pow((kPi / grid.n) * s, 1.0 / p);
}

}  // namespace chrate

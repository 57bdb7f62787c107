#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chrate {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;

// Staggered grid on [0,pi]: n cells of width h = pi/n with nodes at the cell
// midpoints x_k = (2k-1)pi/(2n), k = 1..n.
struct SpatialGrid {
  int n;
  double h;

  explicit SpatialGrid(int n_) : n(n_), h(kPi / n_) {
    if (n_ < 2) throw std::invalid_argument("SpatialGrid: n must be >= 2");
  }

  // 1-based node index of the cell containing x.
  int cell_index(double x) const {
    if (x < 0.0 || x > kPi) throw std::invalid_argument("cell_index: x outside [0,pi]");
    int k = static_cast<int>(std::floor(x * n / kPi)) + 1;
    if (k > n) k = n;  // x == pi
    return k;
  }

  double node(int k) const { return (2.0 * k - 1.0) * kPi / (2.0 * n); }

  // Cell-to-node projection.
  double kappa(double x) const { return node(cell_index(x)); }

  Vec nodes() const {
    Vec x(n);
    for (int k = 1; k <= n; ++k) x(k - 1) = node(k);
    return x;
  }
};

// Polygonal interpolation of nodal values: constant on [0,x_1] and [x_n,pi],
// linear between consecutive nodes, so the extension is continuous and flat
// at both boundaries.
double interpolate_pn(const SpatialGrid& grid, const Vec& values, double x);

// Interpolation weights at x: at most two nonzero terms w1*v[k1] + w2*v[k2]
// (0-based indices). For x in the boundary plateaus a single node carries
// weight 1.
struct InterpWeights {
  int k1, k2;
  double w1, w2;
};
InterpWeights interp_weights(const SpatialGrid& grid, double x);

// Discrete l_n^p norms: ||a||_p = ((pi/n) sum |a_i|^p)^(1/p); p = inf gives max.
double ln_norm(const SpatialGrid& grid, const Vec& a, double p);
inline double ln_inner(const SpatialGrid& grid, const Vec& a, const Vec& b) {
  return (kPi / grid.n) * a.dot(b);
}

}  // namespace chrate

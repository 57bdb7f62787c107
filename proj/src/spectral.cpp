#include "chrate/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace chrate {

double phi_cont(int j, double x) {
  if (j == 0) return std::sqrt(1.0 / kPi);
  return std::sqrt(2.0 / kPi) * std::cos(j * x);
}

SpectralBasis::SpectralBasis(int n_) : grid(n_), lambda(n_), E(n_, n_) {
  const int n = n_;
  for (int j = 0; j < n; ++j) {
    double c;
    if (j == 0) {
      c = 1.0;
    } else {
      double a = j * kPi / (2.0 * n);
      double s = std::sin(a) / a;
      c = s * s;
    }
    lambda(j) = -static_cast<double>(j) * j * c;
    for (int k = 1; k <= n; ++k)
      E(k - 1, j) = std::sqrt(kPi / n) * phi_cont(j, grid.node(k));
  }
  ej_cols.reserve(n);
  for (int j = 0; j < n; ++j) ej_cols.push_back(E.col(j));
}

Vec apply_A(const SpatialGrid& grid, const Vec& w) {
  const int n = grid.n;
  if (n < 2) throw std::invalid_argument("apply_A: n must be >= 2");
  const double s = (n * n) / (kPi * kPi);
  Vec out(n);
  out(0) = s * (w(1) - w(0));
  for (int k = 1; k < n - 1; ++k) out(k) = s * (w(k - 1) - 2.0 * w(k) + w(k + 1));
  out(n - 1) = s * (w(n - 2) - w(n - 1));
  return out;
}

Mat dense_A(int n) {
  Mat A = Mat::Zero(n, n);
  const double s = (n * n) / (kPi * kPi);
  for (int k = 0; k < n; ++k) {
    A(k, k) = (k == 0 || k == n - 1) ? -s : -2.0 * s;
    if (k > 0) A(k, k - 1) = s;
    if (k < n - 1) A(k, k + 1) = s;
  }
  return A;
}

double apply_discrete_laplacian(const std::function<double(double)>& w,
                                const SpatialGrid& grid, double x) {
  const int n = grid.n;
  const double s = (n * n) / (kPi * kPi);
  int k = grid.cell_index(x);
  if (k == 1) return s * (w(grid.node(2)) - w(grid.node(1)));
  if (k == n) return s * (w(grid.node(n - 1)) - w(grid.node(n)));
  double xk = grid.node(k);
  return s * (w(xk + grid.h) - 2.0 * w(xk) + w(xk - grid.h));
}

double phi1(double z) {
  if (std::abs(z) < 1e-8)
    return 1.0 - z / 2.0 + z * z / 6.0;
  return -std::expm1(-z) / z;  // avoids the 1 - e^{-z} cancellation
}

Vec semigroup_apply(const SpectralBasis& basis, double t, const Vec& v) {
  if (t < 0.0) throw std::invalid_argument("semigroup_apply: t must be >= 0");
  Vec c = basis.forward(v);
  for (int j = 0; j < basis.n(); ++j)
    c(j) *= std::exp(-basis.lambda(j) * basis.lambda(j) * t);
  return basis.inverse(c);
}

Vec fractional_power(const SpectralBasis& basis, double nu, const Vec& v, bool dotted) {
  if (!dotted && nu < 0.0)
    throw std::invalid_argument("fractional_power: nu < 0 requires dotted=true");
  Vec c = basis.forward(v);
  if (dotted || nu > 0.0) c(0) = 0.0;
  for (int j = 1; j < basis.n(); ++j) c(j) *= std::pow(-basis.lambda(j), nu);
  return basis.inverse(c);
}

double mean_operator(const Vec& v) { return v.mean(); }

}  // namespace chrate

#pragma once

#include <vector>

#include "chrate/spectral.hpp"

namespace chrate {

// Discrete Green kernel G^n_t(x,y) = sum_j exp(-lambda_j^2 t) P_n(phi_j)(x)
// phi_j(kappa_n(y)), the kernel of the discrete biharmonic semigroup composed
// with nodal sampling and polygonal interpolation.
class DiscreteGreen {
 public:
  explicit DiscreteGreen(int n);

  double eval(double t, double x, double y) const;
  // Laplacian in y: term j picks up the factor lambda_j.
  double eval_laplacian_y(double t, double x, double y) const;
  double eval_bilaplacian_y(double t, double x, double y) const;

  const SpectralBasis& basis() const { return basis_; }

 private:
  SpectralBasis basis_;
  Mat phi_nodes_;  // phi_j(x_k), (k,j)
};

// Continuum kernel of d_t + Delta^2 with Neumann data, truncated at J modes.
class ContinuousGreen {
 public:
  explicit ContinuousGreen(int J);

  double eval(double t, double x, double y) const;
  double eval_laplacian_y(double t, double x, double y) const;
  int truncation() const { return J_; }

 private:
  int J_;
};

struct GreenErrorRow {
  int n;
  double E2;  // int_0^T int |G^n - G|^2(x,.) dy ds
  double E1;  // int_0^T int |Lap_y G^n - Lap G|(x,.) dy ds
};

struct GreenErrorStudy {
  std::vector<GreenErrorRow> rows;
  double slope_E2;  // least-squares slope of log E vs log n
  double slope_E1;
  double x;
};

// Error study at a fixed observation point x. The y-integral of the squared
// error is evaluated exactly through the modal cross products; the L1 error
// uses per-cell Gauss quadrature; the time integral uses 64-point composite
// Gauss-Legendre over logarithmic decades of [0,T].
GreenErrorStudy green_error_study(const std::vector<int>& n_list, double T, int J,
                                  double x);

// Slow independent oracle for E2: per-cell Gauss quadrature in y with
// pts_per_cell points, same time rule as the study.
double green_E2_bruteforce(int n, double T, int J, double x, int pts_per_cell);

// Time-quadrature nodes/weights shared by the study and the oracle.
void green_time_rule(double T, std::vector<double>& s, std::vector<double>& w);

}  // namespace chrate

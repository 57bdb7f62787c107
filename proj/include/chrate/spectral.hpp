#pragma once

#include <functional>

#include "chrate/grid.hpp"

namespace chrate {

// Continuum Neumann eigenfunctions phi_j(x) = sqrt(2/pi) cos(jx), phi_0 =
// sqrt(1/pi).
double phi_cont(int j, double x);

// Eigensystem of the Neumann difference matrix A_n = (n^2/pi^2) tridiag(1,-2,1)
// with corner entries -1. Eigenvector e_j(k) = sqrt(pi/n) phi_j(x_k) with
// eigenvalue lambda_j = -j^2 c_j, c_j = sin^2(j pi/(2n)) / (j pi/(2n))^2 and
// c_0 = 1 (the j=0 singularity is removable; A_n annihilates constants).
struct SpectralBasis {
  SpatialGrid grid;
  Vec lambda;  // lambda_j, j = 0..n-1 (all <= 0)
  Mat E;       // column j = e_j, orthonormal

  explicit SpectralBasis(int n);

  int n() const { return grid.n; }
  Vec forward(const Vec& v) const { return E.transpose() * v; }
  Vec inverse(const Vec& c) const { return E * c; }
  const Vec& eigenvector(int j) const { return ej_cols[j]; }

 private:
  std::vector<Vec> ej_cols;
};

// Stencil application of A_n (no basis needed).
Vec apply_A(const SpatialGrid& grid, const Vec& w);

// Dense matrix A_n, for oracle comparisons.
Mat dense_A(int n);

// Discrete Neumann Laplacian applied to a scalar map, evaluated at x: the
// three-branch cell-wise definition, constant per cell.
double apply_discrete_laplacian(const std::function<double(double)>& w,
                                const SpatialGrid& grid, double x);

// phi1(z) = (1 - exp(-z))/z with the Taylor fallback near 0.
double phi1(double z);

// e^{-A_n^2 t} v, computed spectrally.
Vec semigroup_apply(const SpectralBasis& basis, double t, const Vec& v);

// Coefficient-wise multiply by (-lambda_j)^nu. dotted=true drops the zero
// mode entirely (and permits nu < 0); dotted=false keeps the zero mode for
// nu = 0 (identity) and maps it to zero for nu > 0.
Vec fractional_power(const SpectralBasis& basis, double nu, const Vec& v, bool dotted);

// Mean value (1/n) sum v_k.
double mean_operator(const Vec& v);

}  // namespace chrate

#pragma once

#include "chrate/coefficients.hpp"
#include "chrate/spectral.hpp"

namespace chrate {

// Control in N_n: piecewise constant on [t_j, t_{j+1}) x cell k.
struct Control {
  int m = 0;
  int n = 0;
  double T = 0.0;
  Mat values;  // m x n

  double dt() const { return T / m; }
  double norm_sq() const { return dt() * (kPi / n) * values.squaredNorm(); }
};

// Piecewise linear in time and (through polygonal interpolation) in space.
struct SpaceTimePath {
  double T = 0.0;
  int m = 0;
  int n = 0;
  Mat states;  // (m+1) x n nodal values; row 0 pinned to u0 nodes for M_n members
  bool mn_member = false;

  double dt() const { return T / m; }
  Vec slice(int j) const { return states.row(j).transpose(); }
  double eval(double t, double x) const;
};

// theta: scale the vector time series q by sqrt(n/pi) into cell values, so
// that int |q|^2 dt equals the L2(O_T) norm of the lifted control exactly.
Control lift_control(const Mat& q, double T);

// Cell-wise spatial average onto n_coarse cells; contracts the L2 norm and
// leaves the forward map unchanged.
Control average_control(const Control& fine, int n_coarse);

// One implicit-midpoint step of the skeleton dynamics
//   f' = -A^2 f + A b(f) + sigma(f) .* h,
// solved by a spectrally preconditioned fixed point. This transcription is
// the exact companion of skeleton_inverse: the two maps invert each other at
// the discrete level to solver tolerance.
class SkeletonStepper {
 public:
  SkeletonStepper(const Coefficients& coeffs, const SpectralBasis& basis, double dt);

  // h holds the control's cell values over this slab.
  Vec step(const Vec& f, const Vec& h) const;

 private:
  const Coefficients& coeffs_;
  const SpectralBasis& basis_;
  double dt_;
  Vec explicit_factor_;  // (1 - dt/2 d_j)/(1 + dt/2 d_j)
  Vec implicit_scale_;   // dt/(1 + dt/2 d_j)
};

// Upsilon^n: integrate the skeleton dynamics with m time steps. The control
// may live on a coarser time grid (m % control.m == 0) and a finer spatial
// grid (control.n % n == 0, averaged per cell first).
SpaceTimePath skeleton_forward(const Coefficients& coeffs, const Control& control,
                               int n, int m);

struct InverseOptions {
  bool midpoint = true;  // left-point evaluation available for debugging
  double sigma_floor = 1e-6;
};

// Recover the unique N_n control driving the path:
//   h = [d_t f + Delta_n^2 f - Delta_n b(f)] / sigma(f)
// with d_t as the slab slope and spatial terms at the slab midpoint.
Control skeleton_inverse(const Coefficients& coeffs, const SpaceTimePath& path,
                         const InverseOptions& opts = {});

// J^n_y(f): +infinity unless f starts at the u0 nodal values and its
// interpolated terminal value at xbar equals y; otherwise half the squared
// L2 norm of the recovered control.
double rate_functional(const Coefficients& coeffs, const SpaceTimePath& path,
                       double y, double xbar);

}  // namespace chrate

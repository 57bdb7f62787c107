#include "chrate/skeleton.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chrate {

double SpaceTimePath::eval(double t, double x) const {
  if (t < 0.0 || t > T) throw std::invalid_argument("SpaceTimePath::eval: t outside [0,T]");
  double u = t / dt();
  int j = static_cast<int>(std::floor(u));
  if (j >= m) j = m - 1;
  double a = u - j;
  SpatialGrid grid(n);
  double v0 = interpolate_pn(grid, slice(j), x);
  double v1 = interpolate_pn(grid, slice(j + 1), x);
  return (1.0 - a) * v0 + a * v1;
}

Control lift_control(const Mat& q, double T) {
  Control h;
  h.m = static_cast<int>(q.rows());
  h.n = static_cast<int>(q.cols());
  h.T = T;
  h.values = std::sqrt(h.n / kPi) * q;
  return h;
}

Control average_control(const Control& fine, int n_coarse) {
  if (n_coarse < 1 || fine.n % n_coarse != 0)
    throw std::invalid_argument("average_control: fine grid must refine the cell grid");
  int r = fine.n / n_coarse;
  Control out;
  out.m = fine.m;
  out.n = n_coarse;
  out.T = fine.T;
  out.values = Mat::Zero(fine.m, n_coarse);
  for (int k = 0; k < n_coarse; ++k)
    for (int i = 0; i < r; ++i) out.values.col(k) += fine.values.col(k * r + i);
  out.values /= r;
  return out;
}

SkeletonStepper::SkeletonStepper(const Coefficients& coeffs, const SpectralBasis& basis,
                                 double dt)
    : coeffs_(coeffs), basis_(basis), dt_(dt) {
  const int n = basis.n();
  explicit_factor_.resize(n);
  implicit_scale_.resize(n);
  for (int j = 0; j < n; ++j) {
    double d = basis.lambda(j) * basis.lambda(j);
    explicit_factor_(j) = (1.0 - 0.5 * dt * d) / (1.0 + 0.5 * dt * d);
    implicit_scale_(j) = dt / (1.0 + 0.5 * dt * d);
  }
}

Vec SkeletonStepper::step(const Vec& f, const Vec& h) const {
  const int n = basis_.n();
  Vec base = explicit_factor_.cwiseProduct(basis_.forward(f));
  Vec next = f;
  Vec g(n), r(n), bg(n);
  for (int it = 0; it < 200; ++it) {
    g = 0.5 * (f + next);
    for (int k = 0; k < n; ++k) {
      bg(k) = coeffs_.b(g(k));
      r(k) = coeffs_.sigma(g(k)) * h(k);
    }
    r += apply_A(basis_.grid, bg);
    Vec cand = basis_.inverse(base + implicit_scale_.cwiseProduct(basis_.forward(r)));
    double diff = (cand - next).cwiseAbs().maxCoeff();
    next = cand;
    if (!std::isfinite(diff))
      throw std::runtime_error("skeleton step blew up; double the time steps m");
    if (diff <= 1e-13 * std::max(1.0, next.cwiseAbs().maxCoeff())) return next;
  }
  throw std::runtime_error("skeleton step did not contract; double the time steps m");
}

SpaceTimePath skeleton_forward(const Coefficients& coeffs, const Control& control,
                               int n, int m) {
  Control h = control;
  if (h.n != n) h = average_control(control, n);
  if (h.m < 1 || m % h.m != 0)
    throw std::invalid_argument("skeleton_forward: m must be a multiple of the control's time grid");
  int rep = m / h.m;

  SpectralBasis basis(n);
  SpaceTimePath path;
  path.T = h.T;
  path.m = m;
  path.n = n;
  path.states.resize(m + 1, n);
  for (int k = 1; k <= n; ++k) path.states(0, k - 1) = coeffs.u0(basis.grid.node(k));
  path.mn_member = true;

  SkeletonStepper stepper(coeffs, basis, path.T / m);
  Vec f = path.slice(0);
  for (int j = 0; j < m; ++j) {
    Vec hj = h.values.row(j / rep).transpose();
    f = stepper.step(f, hj);
    path.states.row(j + 1) = f.transpose();
  }
  return path;
}

Control skeleton_inverse(const Coefficients& coeffs, const SpaceTimePath& path,
                         const InverseOptions& opts) {
  const int m = path.m, n = path.n;
  SpatialGrid grid(n);
  double dt = path.dt();
  Control h;
  h.m = m;
  h.n = n;
  h.T = path.T;
  h.values.resize(m, n);
  Vec g(n), bg(n);
  for (int j = 0; j < m; ++j) {
    Vec f0 = path.slice(j);
    Vec f1 = path.slice(j + 1);
    g = opts.midpoint ? Vec(0.5 * (f0 + f1)) : f0;
    for (int k = 0; k < n; ++k) bg(k) = coeffs.b(g(k));
    Vec num = (f1 - f0) / dt + apply_A(grid, apply_A(grid, g)) - apply_A(grid, bg);
    for (int k = 0; k < n; ++k) {
      double s = coeffs.sigma(g(k));
      if (std::abs(s) < opts.sigma_floor)
        throw std::runtime_error("skeleton_inverse: sigma degenerates along the path");
      h.values(j, k) = num(k) / s;
    }
  }
  return h;
}

double rate_functional(const Coefficients& coeffs, const SpaceTimePath& path,
                       double y, double xbar) {
  const double inf = std::numeric_limits<double>::infinity();
  SpatialGrid grid(path.n);
  for (int k = 1; k <= path.n; ++k)
    if (std::abs(path.states(0, k - 1) - coeffs.u0(grid.node(k))) > 1e-12) return inf;
  double terminal = interpolate_pn(grid, path.slice(path.m), xbar);
  if (std::abs(terminal - y) > 1e-10) return inf;
  Control h = skeleton_inverse(coeffs, path, {true, coeffs.sigma_floor});
  return 0.5 * h.norm_sq();
}

}  // namespace chrate

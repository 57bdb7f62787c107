#include "chrate/green.hpp"

#include <cmath>
#include <stdexcept>

#include "chrate/quadrature.hpp"

namespace chrate {

namespace {

// Largest continuum mode index with non-negligible weight exp(-j^4 s).
int mode_cutoff(int J, double s) {
  if (s <= 0.0) return J;
  double j = std::pow(750.0 / s, 0.25);
  if (j >= J) return J;
  return static_cast<int>(j) + 1;
}

}  // namespace

DiscreteGreen::DiscreteGreen(int n) : basis_(n), phi_nodes_(n, n) {
  for (int j = 0; j < n; ++j)
    for (int k = 1; k <= n; ++k)
      phi_nodes_(k - 1, j) = phi_cont(j, basis_.grid.node(k));
}

double DiscreteGreen::eval(double t, double x, double y) const {
  const int n = basis_.n();
  InterpWeights wx = interp_weights(basis_.grid, x);
  int cy = basis_.grid.cell_index(y) - 1;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    double lam = basis_.lambda(j);
    double pjx = wx.w1 * phi_nodes_(wx.k1, j) + wx.w2 * phi_nodes_(wx.k2, j);
    sum += std::exp(-lam * lam * t) * pjx * phi_nodes_(cy, j);
  }
  return sum;
}

double DiscreteGreen::eval_laplacian_y(double t, double x, double y) const {
  const int n = basis_.n();
  InterpWeights wx = interp_weights(basis_.grid, x);
  int cy = basis_.grid.cell_index(y) - 1;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    double lam = basis_.lambda(j);
    double pjx = wx.w1 * phi_nodes_(wx.k1, j) + wx.w2 * phi_nodes_(wx.k2, j);
    sum += lam * std::exp(-lam * lam * t) * pjx * phi_nodes_(cy, j);
  }
  return sum;
}

double DiscreteGreen::eval_bilaplacian_y(double t, double x, double y) const {
  const int n = basis_.n();
  InterpWeights wx = interp_weights(basis_.grid, x);
  int cy = basis_.grid.cell_index(y) - 1;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    double lam = basis_.lambda(j);
    double pjx = wx.w1 * phi_nodes_(wx.k1, j) + wx.w2 * phi_nodes_(wx.k2, j);
    sum += lam * lam * std::exp(-lam * lam * t) * pjx * phi_nodes_(cy, j);
  }
  return sum;
}

ContinuousGreen::ContinuousGreen(int J) : J_(J) {
  if (J < 1) throw std::invalid_argument("ContinuousGreen: J must be positive");
}

double ContinuousGreen::eval(double t, double x, double y) const {
  if (t <= 0.0) throw std::invalid_argument("ContinuousGreen: t=0 is distributional");
  int jmax = mode_cutoff(J_, t);
  double sum = 0.0;
  for (int j = 0; j <= jmax; ++j) {
    double j4 = static_cast<double>(j) * j * j * j;
    sum += std::exp(-j4 * t) * phi_cont(j, x) * phi_cont(j, y);
  }
  return sum;
}

double ContinuousGreen::eval_laplacian_y(double t, double x, double y) const {
  if (t <= 0.0) throw std::invalid_argument("ContinuousGreen: t=0 is distributional");
  int jmax = mode_cutoff(J_, t);
  double sum = 0.0;
  for (int j = 1; j <= jmax; ++j) {
    double j2 = static_cast<double>(j) * j;
    sum += -j2 * std::exp(-j2 * j2 * t) * phi_cont(j, x) * phi_cont(j, y);
  }
  return sum;
}

void green_time_rule(double T, std::vector<double>& s, std::vector<double>& w) {
  s.clear();
  w.clear();
  const int kDecades = 7;
  const int kPts = 64;
  std::vector<double> xs, ws;
  double lo = 0.0, hi = T * std::pow(10.0, -kDecades);
  for (int d = kDecades; d >= 0; --d) {
    hi = T * std::pow(10.0, -d);
    gauss_on_interval(kPts, lo, hi, xs, ws);
    s.insert(s.end(), xs.begin(), xs.end());
    w.insert(w.end(), ws.begin(), ws.end());
    lo = hi;
  }
}

namespace {

// Exact integrals of phi_i over the n cells: C(k,i) = int_{cell k} phi_i dy.
Mat cell_integrals(const SpatialGrid& grid, int J) {
  const int n = grid.n;
  Mat C(n, J + 1);
  for (int k = 0; k < n; ++k) {
    double a = k * grid.h, b = (k + 1) * grid.h;
    C(k, 0) = std::sqrt(1.0 / kPi) * grid.h;
    for (int i = 1; i <= J; ++i)
      C(k, i) = std::sqrt(2.0 / kPi) * (std::sin(i * b) - std::sin(i * a)) / i;
  }
  return C;
}

}  // namespace

GreenErrorStudy green_error_study(const std::vector<int>& n_list, double T, int J,
                                  double x) {
  GreenErrorStudy study;
  study.x = x;

  std::vector<double> st, wt;
  green_time_rule(T, st, wt);
  const int nt = static_cast<int>(st.size());

  for (int n : n_list) {
    SpectralBasis basis(n);
    const SpatialGrid& grid = basis.grid;
    Mat Phi(n, n);  // phi_j(x_k)
    for (int j = 0; j < n; ++j)
      for (int k = 1; k <= n; ++k) Phi(k - 1, j) = phi_cont(j, grid.node(k));
    Mat C = cell_integrals(grid, J);
    Mat M = Phi.transpose() * C;  // n x (J+1) modal cross products

    InterpWeights wx = interp_weights(grid, x);
    Vec px(n);  // P_n(phi_j)(x)
    for (int j = 0; j < n; ++j)
      px(j) = wx.w1 * Phi(wx.k1, j) + wx.w2 * Phi(wx.k2, j);
    Vec qx(J + 1);
    for (int i = 0; i <= J; ++i) qx(i) = phi_cont(i, x);

    // Per-cell Gauss points for the L1 integral.
    int ppc = std::max(4, (2048 + n - 1) / n);
    int ny = n * ppc;
    std::vector<double> yq(ny), wq(ny);
    std::vector<int> ycell(ny);
    {
      std::vector<double> xs, ws;
      for (int k = 0; k < n; ++k) {
        gauss_on_interval(ppc, k * grid.h, (k + 1) * grid.h, xs, ws);
        for (int i = 0; i < ppc; ++i) {
          yq[k * ppc + i] = xs[i];
          wq[k * ppc + i] = ws[i];
          ycell[k * ppc + i] = k;
        }
      }
    }
    Mat Ycont(ny, J + 1);
    for (int iy = 0; iy < ny; ++iy)
      for (int i = 0; i <= J; ++i) Ycont(iy, i) = phi_cont(i, yq[iy]);

    double E2 = 0.0, E1 = 0.0;
    Vec a(n), b(J + 1), lam_a(n);
    for (int it = 0; it < nt; ++it) {
      double s = st[it];
      int imax = mode_cutoff(J, s);
      for (int j = 0; j < n; ++j) {
        double lam = basis.lambda(j);
        a(j) = std::exp(-lam * lam * s) * px(j);
        lam_a(j) = lam * a(j);
      }
      b.setZero();
      for (int i = 0; i <= imax; ++i) {
        double i4 = static_cast<double>(i) * i * i * i;
        b(i) = std::exp(-i4 * s) * qx(i);
      }

      // Squared L2 error in y, exact through orthogonality + cross matrix.
      double i2 = a.squaredNorm() + b.squaredNorm() -
                  2.0 * a.dot(M.leftCols(imax + 1) * b.head(imax + 1));
      E2 += wt[it] * i2;

      // L1 error of the Laplacian difference via quadrature.
      Vec cellv = Phi * lam_a;  // discrete Laplacian kernel value per cell
      Vec db(imax + 1);
      for (int i = 0; i <= imax; ++i)
        db(i) = -static_cast<double>(i) * i * b(i);
      Vec cont = Ycont.leftCols(imax + 1) * db;
      double i1 = 0.0;
      for (int iy = 0; iy < ny; ++iy)
        i1 += wq[iy] * std::abs(cellv(ycell[iy]) - cont(iy));
      E1 += wt[it] * i1;
    }
    if (!std::isfinite(E2) || !std::isfinite(E1))
      throw std::runtime_error("green_error_study: quadrature produced non-finite value");
    study.rows.push_back({n, E2, E1});
  }

  // Least-squares slopes of log E against log n.
  auto slope = [&](auto pick) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = static_cast<int>(study.rows.size());
    for (const auto& r : study.rows) {
      double lx = std::log(static_cast<double>(r.n)), ly = std::log(pick(r));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  study.slope_E2 = slope([](const GreenErrorRow& r) { return r.E2; });
  study.slope_E1 = slope([](const GreenErrorRow& r) { return r.E1; });
  return study;
}

double green_E2_bruteforce(int n, double T, int J, double x, int pts_per_cell) {
  SpectralBasis basis(n);
  const SpatialGrid& grid = basis.grid;
  std::vector<double> st, wt;
  green_time_rule(T, st, wt);

  Mat Phi(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 1; k <= n; ++k) Phi(k - 1, j) = phi_cont(j, grid.node(k));
  InterpWeights wx = interp_weights(grid, x);
  Vec px(n);
  for (int j = 0; j < n; ++j) px(j) = wx.w1 * Phi(wx.k1, j) + wx.w2 * Phi(wx.k2, j);

  int ny = n * pts_per_cell;
  std::vector<double> yq(ny), wq(ny);
  std::vector<int> ycell(ny);
  std::vector<double> xs, ws;
  for (int k = 0; k < n; ++k) {
    gauss_on_interval(pts_per_cell, k * grid.h, (k + 1) * grid.h, xs, ws);
    for (int i = 0; i < pts_per_cell; ++i) {
      yq[k * pts_per_cell + i] = xs[i];
      wq[k * pts_per_cell + i] = ws[i];
      ycell[k * pts_per_cell + i] = k;
    }
  }
  Mat Ycont(ny, J + 1);
  for (int iy = 0; iy < ny; ++iy)
    for (int i = 0; i <= J; ++i) Ycont(iy, i) = phi_cont(i, yq[iy]);

  double E2 = 0.0;
  Vec a(n), b(J + 1);
  for (std::size_t it = 0; it < st.size(); ++it) {
    double s = st[it];
    int imax = mode_cutoff(J, s);
    for (int j = 0; j < n; ++j) {
      double lam = basis.lambda(j);
      a(j) = std::exp(-lam * lam * s) * px(j);
    }
    for (int i = 0; i <= imax; ++i) {
      double i4 = static_cast<double>(i) * i * i * i;
      b(i) = std::exp(-i4 * s) * phi_cont(i, x);
    }
    Vec cellv = Phi * a;
    Vec cont = Ycont.leftCols(imax + 1) * b.head(imax + 1);
    double acc = 0.0;
    for (int iy = 0; iy < ny; ++iy) {
      double d = cellv(ycell[iy]) - cont(iy);
      acc += wq[iy] * d * d;
    }
    E2 += wt[it] * acc;
  }
  return E2;
}

}  // namespace chrate

#pragma once

#include <optional>
#include <vector>

#include "chrate/skeleton.hpp"

namespace chrate {

// Direct transcription of inf J^n_y: decision variables are the nodal values
// f(t_j, x_k), j = 1..m (slice 0 is pinned to u0), with the terminal
// interpolation constraint eliminated at the heaviest-weight node, so the
// constraint residual is zero by construction.
struct TranscriptionProblem {
  Coefficients coeffs;
  int n, m;
  double T, xbar, y;

  SpectralBasis basis;
  Vec u0_nodes;
  int elim_node;           // 0-based terminal node solved for
  int other_node;          // -1 when xbar sees a single node
  double w_elim, w_other;  // interpolation weights

  TranscriptionProblem(const Coefficients& coeffs, int n, int m, double T, double xbar,
                       double y);

  int num_free() const { return m * n - 1; }

  // Free variables are the slices j=1..m row-major with the eliminated
  // terminal entry removed.
  SpaceTimePath assemble(const Vec& free_vars) const;
  Vec extract(const SpaceTimePath& path) const;

  // Value = 1/2 ||h(f)||^2 (+ sigma-floor penalty when active); analytic
  // gradient. Returns true in *barrier if the sigma floor was hit.
  double objective_and_gradient(const Vec& free_vars, Vec& grad,
                                bool* barrier = nullptr) const;
};

struct RateResult {
  double y = 0.0;
  double value = 0.0;  // I^n(y)
  SpaceTimePath minimizer;
  Control control;  // h*
  int iterations = 0;
  double grad_norm = 0.0;
  double residual = 0.0;  // |Upsilon^n(h*)(T, xbar) - y| recomputed by the stepper
  bool converged = false;
  bool barrier_hit = false;
};

struct MinimizeOptions {
  int max_iters = 5000;
  double grad_tol = 1e-8;
  int memory = 20;
  int starts = 3;
  const SpaceTimePath* warm_path = nullptr;  // overrides the built-in warm start
};

RateResult minimize_rate(const Coefficients& coeffs, int n, int m, double T,
                         double xbar, double y, const MinimizeOptions& opts = {});

// Scan over y, warm-starting each point from its neighbor. tail_inf[i] =
// inf over {z >= y_list[i]} of I^n(z) across the scanned points.
std::vector<RateResult> rate_curve(const Coefficients& coeffs, int n, int m, double T,
                                   double xbar, const std::vector<double>& y_list,
                                   std::vector<double>* tail_inf = nullptr,
                                   const MinimizeOptions& opts = {});

struct ConvergenceRow {
  int n;
  int m;
  RateResult result;
  double diff_to_finest = 0.0;
};

// I^n(y) across n_list with m scaled proportionally to n^2 from (n_list[0],
// m_base); reports |I^n - I^{n_max}|.
std::vector<ConvergenceRow> convergence_scan(const Coefficients& coeffs,
                                             const std::vector<int>& n_list, int m_base,
                                             double T, double xbar, double y,
                                             const MinimizeOptions& opts = {});

// Controllability Gramian of the linear dynamics f' = -A^2 f + sqrt(n/pi) q
// observed through the interpolation weights at xbar; the linear-Gaussian
// rate function is y^2 / (2 v_n(T)).
double gramian_vn(int n, double T, double xbar);

// Continuum limit of the Gramian, truncated at J modes.
double gramian_continuum(double xbar, double T, int J);

// Independent oracle: same Gramian from a dense eigensolve of A_n and
// composite Simpson quadrature in time.
double gramian_vn_dense(int n, double T, double xbar, int quad_points = 4096);

}  // namespace chrate

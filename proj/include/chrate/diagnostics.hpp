#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chrate/coefficients.hpp"
#include "chrate/skeleton.hpp"

namespace chrate {

struct PropCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  std::string detail;
};

// Eigenpair identity vs a dense oracle, the nodal Laplacian identity for the
// cosine modes, and the discrete integration-by-parts identity.
std::vector<PropCheck> operator_exactness_checks(const std::vector<int>& n_list,
                                                 std::uint64_t seed);

// l_infty <= sqrt(pi) l2 + |(-A)^(1/2) a| with the exact constant.
PropCheck l2h1_check(const std::vector<int>& n_list, int samples, std::uint64_t seed);

// Norm comparability, the mean operator bound, the adjoint relation of the
// fractional powers, the inverse-Laplacian pairing identity, and the
// spectral-norm bound (n-1)^2.
std::vector<PropCheck> discrete_norm_checks(std::uint64_t seed);

// Empirical constants of the l6 interpolation inequality and the semigroup
// l2 -> lp smoothing bound stay stable across n.
PropCheck interpolation_constant_check(const std::vector<int>& n_list, int samples,
                                       std::uint64_t seed);

// Product-rule bound for the discrete Laplacian on smooth products.
PropCheck product_rule_check(const std::vector<int>& n_list, std::uint64_t seed);

// Unit mass of the discrete Green kernel.
PropCheck green_mass_check(const std::vector<int>& n_list);

// A fixed continuum control sampled on a fine refinement grid, cell-averaged
// per n. Used by the uniform-boundedness and convergence studies.
Control sampled_control(const std::function<double(double, double)>& h, int m_slabs,
                        int n_fine, double T, double target_norm);

struct VboundRow {
  int n;
  int m;
  double sup_linf;  // sup_t ||V||_{l_n^inf}
  double int_asq;   // int_0^T ||A_n V||^2_{l_n^2} dt
};

std::vector<VboundRow> vbound_study(const Coefficients& coeffs,
                                    const std::vector<int>& n_list, int m_base,
                                    const Control& fine_control);

// Empirical space-time Holder modulus of the skeleton solution, exponent
// 3/8 * alpha with alpha near 1 in time.
PropCheck holder_modulus_check(const Coefficients& coeffs,
                               const std::vector<int>& n_list, int m_base, double T,
                               const Control& fine_control, std::uint64_t seed);

// Recovery-sequence probe: a converged minimizer at resolution n, extended
// by cosine interpolation to 2n and 4n with pinned initial slice and a
// terminal ramp, keeps its rate value within 5%.
PropCheck gamma_limsup_check(const Coefficients& coeffs, int n, int m, double T,
                             double xbar, double y_offset);

// Everything above at default desk-scale settings, for the props subcommand.
std::vector<PropCheck> run_all_props(std::uint64_t seed);

}  // namespace chrate

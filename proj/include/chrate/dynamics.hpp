#pragma once

#include <cstdint>

#include "chrate/skeleton.hpp"

namespace chrate {

// Brownian increments of the n scaled cell processes over m uniform steps.
// Entries are N(0, dt), generated from a stateless counter RNG keyed by
// (seed, path_index): any thread can produce any path bit-identically.
struct NoiseIncrements {
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  int m = 0;
  int n = 0;
  double T = 0.0;
  Mat increments;  // m x n
};

NoiseIncrements make_noise(std::uint64_t seed, std::uint64_t path_index, int m, int n,
                           double T);

struct SdePath {
  SpaceTimePath path;
  double eps = 0.0;
};

// One ETD1 step per noise increment:
//   U+ = e^{-A^2 dt} U + dt phi1(-A^2 dt) A b(U)
//        + e^{-A^2 dt} [ drift + sqrt(eps n/pi) sigma(U) .* dW ]
// with the linear parts applied spectrally.
SdePath simulate_path(const Coefficients& coeffs, int n, int m, double T, double eps,
                      const NoiseIncrements& noise);

// Adds the tilt drift sigma(U) .* h dt under the semigroup. With eps = 0 the
// noise is ignored and this integrates the skeleton dynamics exactly as
// skeleton_forward does.
SdePath simulate_controlled_path(const Coefficients& coeffs, int n, int m, double T,
                                 double eps, const NoiseIncrements& noise,
                                 const Control& control);

// Importance-sampling weight exp(-(1/sqrt(eps)) sum <q_j, dW_j>
// - (1/(2 eps)) ||q||^2) with q the theta-preimage of the control.
double girsanov_weight(const NoiseIncrements& noise, const Control& control, double eps);

}  // namespace chrate

#include <doctest.h>

#include "chrate/dynamics.hpp"
#include "chrate/rng.hpp"

using namespace chrate;

TEST_CASE("noise increments are reproducible pure functions") {
  NoiseIncrements a = make_noise(42, 3, 16, 8, 0.5);
  NoiseIncrements b = make_noise(42, 3, 16, 8, 0.5);
  CHECK((a.increments - b.increments).norm() == 0.0);
  NoiseIncrements c = make_noise(42, 4, 16, 8, 0.5);
  CHECK((a.increments - c.increments).norm() > 0.0);

  // variance ~ dt
  NoiseIncrements big = make_noise(7, 0, 200, 50, 2.0);
  double var = big.increments.squaredNorm() / (200.0 * 50.0);
  CHECK(var == doctest::Approx(2.0 / 200).epsilon(0.05));
}

TEST_CASE("noiseless linear simulation is the exact semigroup") {
  // eps = 0, b = 0: the exponential integrator applies e^{-A^2 t} exactly
  const int n = 8, m = 4;  // huge steps on purpose
  const double T = 0.5;
  SpectralBasis basis(n);
  Coefficients c = make_coefficients("zero", "one", 0.0, "constant", 0.0, 0);
  c.u0 = [&](double x) {
    SpatialGrid g(n);
    return std::cos(3.0 * g.kappa(x));
  };
  NoiseIncrements noise = make_noise(1, 0, m, n, T);
  SdePath sp = simulate_path(c, n, m, T, 0.0, noise);
  double lam = basis.lambda(3);
  double want = std::exp(-lam * lam * T);
  CHECK(sp.path.states(m, 0) / sp.path.states(0, 0) == doctest::Approx(want));
}

TEST_CASE("controlled simulation at eps 0 matches the skeleton map") {
  Coefficients c = default_coefficients();
  const int n = 8, m = 32;
  Control h;
  h.m = m;
  h.n = n;
  h.T = 0.5;
  std::uint64_t key = mix_key(5, 5);
  h.values.resize(m, n);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < n; ++k) h.values(j, k) = 0.5 * counter_normal(key, j * n + k);

  NoiseIncrements noise = make_noise(9, 0, m, n, 0.5);
  SdePath sp = simulate_controlled_path(c, n, m, 0.5, 0.0, noise, h);
  SpaceTimePath f = skeleton_forward(c, h, n, m);
  CHECK((sp.path.states - f.states).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("girsanov weight is one for the zero tilt") {
  const int n = 4, m = 8;
  Control zero;
  zero.m = m;
  zero.n = n;
  zero.T = 0.5;
  zero.values = Mat::Zero(m, n);
  NoiseIncrements noise = make_noise(13, 2, m, n, 0.5);
  CHECK(girsanov_weight(noise, zero, 0.3) == doctest::Approx(1.0));
}

TEST_CASE("girsanov weights average to one over many paths") {
  const int n = 4, m = 16;
  const double T = 0.5, eps = 0.5;
  Control h;
  h.m = m;
  h.n = n;
  h.T = T;
  h.values = Mat::Constant(m, n, 0.4);
  double sum = 0.0;
  const int N = 20000;
  for (int i = 0; i < N; ++i)
    sum += girsanov_weight(make_noise(77, i, m, n, T), h, eps);
  CHECK(sum / N == doctest::Approx(1.0).epsilon(0.05));
}

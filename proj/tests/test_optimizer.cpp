#include <doctest.h>

#include "chrate/optimizer.hpp"

using namespace chrate;

TEST_CASE("transcription assembles and extracts consistently") {
  Coefficients c = default_coefficients();
  TranscriptionProblem prob(c, 4, 8, 0.5, 1.3, 0.9);
  CHECK(prob.num_free() == 4 * 8 - 1);

  Vec v = Vec::LinSpaced(prob.num_free(), -1.0, 1.0);
  SpaceTimePath p = prob.assemble(v);
  // pinned initial slice and the eliminated terminal constraint
  SpatialGrid g(4);
  for (int k = 1; k <= 4; ++k)
    CHECK(p.states(0, k - 1) == doctest::Approx(c.u0(g.node(k))));
  CHECK(interpolate_pn(g, p.slice(8), 1.3) == doctest::Approx(0.9));
  CHECK((prob.extract(p) - v).norm() == 0.0);
}

TEST_CASE("closed-form Gramian against the dense linear-quadratic oracle") {
  for (double xbar : {0.7, 1.9}) {
    for (int n : {2, 4, 8}) {
      double a = gramian_vn(n, 0.5, xbar);
      double b = gramian_vn_dense(n, 0.5, xbar);
      CHECK(a == doctest::Approx(b).epsilon(1e-6));
    }
  }
  // discrete Gramian approaches the continuum one
  double v64 = gramian_vn(64, 0.5, 1.1);
  double vc = gramian_continuum(1.1, 0.5, 4000);
  CHECK(v64 == doctest::Approx(vc).epsilon(0.05));
}

TEST_CASE("linear rate function is quadratic with Gramian curvature") {
  Coefficients lin = linear_coefficients();
  double vn = gramian_vn(8, 0.5, 1.1);
  for (double y : {0.3, -0.8}) {
    RateResult r = minimize_rate(lin, 8, 32, 0.5, 1.1, y);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(y * y / (2.0 * vn)).epsilon(1e-3));
    CHECK(r.residual < 1e-8);
  }
}

TEST_CASE("zero displacement costs nothing") {
  Coefficients c = default_coefficients();
  Control zero;
  zero.m = 1;
  zero.n = 8;
  zero.T = 0.5;
  zero.values = Mat::Zero(1, 8);
  SpaceTimePath det = skeleton_forward(c, zero, 8, 32);
  double y0 = interpolate_pn(SpatialGrid(8), det.slice(32), 1.1);
  RateResult r = minimize_rate(c, 8, 32, 0.5, 1.1, y0);
  CHECK(r.value < 1e-10);
}

TEST_CASE("rate curve grows away from the free endpoint and reports tail infima") {
  Coefficients c = default_coefficients();
  Control zero;
  zero.m = 1;
  zero.n = 8;
  zero.T = 0.5;
  zero.values = Mat::Zero(1, 8);
  SpaceTimePath det = skeleton_forward(c, zero, 8, 32);
  double y0 = interpolate_pn(SpatialGrid(8), det.slice(32), kPi / 2);

  std::vector<double> ys = {y0 + 0.2, y0 + 0.4, y0 + 0.8};
  std::vector<double> tail;
  auto rs = rate_curve(c, 8, 32, 0.5, kPi / 2, ys, &tail);
  CHECK(rs[0].value < rs[1].value);
  CHECK(rs[1].value < rs[2].value);
  CHECK(tail[0] == doctest::Approx(rs[0].value));
  CHECK(tail[2] == doctest::Approx(rs[2].value));
}

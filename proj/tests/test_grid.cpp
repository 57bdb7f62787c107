#include <doctest.h>

#include "chrate/grid.hpp"

using namespace chrate;

TEST_CASE("staggered nodes and cell projection") {
  SpatialGrid g(4);
  CHECK(g.h == doctest::Approx(kPi / 4));
  CHECK(g.node(1) == doctest::Approx(kPi / 8));
  CHECK(g.node(4) == doctest::Approx(7 * kPi / 8));

  CHECK(g.cell_index(0.0) == 1);
  CHECK(g.cell_index(kPi) == 4);  // clamped at the right endpoint
  CHECK(g.kappa(kPi) == doctest::Approx(g.node(4)));
  CHECK(g.kappa(g.node(2)) == doctest::Approx(g.node(2)));
  CHECK_THROWS(g.cell_index(-0.1));
  CHECK_THROWS(g.cell_index(kPi + 0.1));
}

TEST_CASE("polygonal interpolation with flat boundary plateaus") {
  SpatialGrid g(4);
  Vec v(4);
  v << 1.0, 3.0, 5.0, 7.0;

  // plateau left of the first node and right of the last
  CHECK(interpolate_pn(g, v, 0.0) == doctest::Approx(1.0));
  CHECK(interpolate_pn(g, v, kPi) == doctest::Approx(7.0));
  // exact at nodes, linear between
  CHECK(interpolate_pn(g, v, g.node(2)) == doctest::Approx(3.0));
  double mid = 0.5 * (g.node(2) + g.node(3));
  CHECK(interpolate_pn(g, v, mid) == doctest::Approx(4.0));

  InterpWeights w = interp_weights(g, mid);
  CHECK(w.w1 * v(w.k1) + w.w2 * v(w.k2) == doctest::Approx(4.0));
  CHECK(w.w1 + w.w2 == doctest::Approx(1.0));
  InterpWeights wb = interp_weights(g, 0.01);
  CHECK(wb.w1 == doctest::Approx(1.0));
  CHECK(wb.w2 == 0.0);
}

TEST_CASE("discrete norms") {
  SpatialGrid g(2);
  Vec v(2);
  v << 3.0, -4.0;
  CHECK(ln_norm(g, v, 2.0) == doctest::Approx(std::sqrt(kPi / 2 * 25.0)));
  CHECK(ln_norm(g, v, std::numeric_limits<double>::infinity()) == doctest::Approx(4.0));
  CHECK(ln_norm(g, v, 1.0) == doctest::Approx(kPi / 2 * 7.0));
  Vec u(2);
  u << 1.0, 1.0;
  CHECK(ln_inner(g, u, v) == doctest::Approx(kPi / 2 * (-1.0)));
}

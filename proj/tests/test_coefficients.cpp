#include <doctest.h>

#include "chrate/coefficients.hpp"
#include "chrate/rng.hpp"

using namespace chrate;

TEST_CASE("default coefficient menu") {
  Coefficients c = default_coefficients();
  CHECK(c.b(2.0) == doctest::Approx(6.0));       // x^3 - x
  CHECK(c.b_prime(2.0) == doctest::Approx(11.0));
  CHECK(c.sigma(3.7) == doctest::Approx(1.0));
  CHECK(c.u0(0.0) == doctest::Approx(1.0));      // cos(0)
  CHECK(c.is_default_b);
}

TEST_CASE("assumption scan passes for the default setup") {
  ValidationReport r = validate_assumptions(default_coefficients());
  CHECK(r.all_pass());
}

TEST_CASE("cubic drift one-sided and growth bounds") {
  std::uint64_t key = mix_key(7, 7);
  for (int i = 0; i < 200; ++i) {
    double x = 6.0 * (counter_uniform(key, 2 * i) - 0.5);
    double y = 6.0 * (counter_uniform(key, 2 * i + 1) - 0.5);
    auto [dissip, growth] = cubic_drift_bounds(x, y);
    // (b(y)-b(x))(x-y) <= (x-y)^2
    CHECK(dissip <= (x - y) * (x - y) + 1e-12);
    // |b(x)-b(y)| <= 4 (1+x^2+y^2) |x-y|
    Coefficients c = default_coefficients();
    CHECK(std::abs(c.b(x) - c.b(y)) <= 4.0 * growth * std::abs(x - y) + 1e-12);
  }
}

TEST_CASE("sigma menu constraints") {
  // shifted sine needs c > 1; tanh clamp needs 0 < c < 1
  CHECK_THROWS(make_coefficients("cubic", "shifted_sine", 0.5, "cos", 1.0, 1));
  CHECK_THROWS(make_coefficients("cubic", "tanh_clamp", 1.5, "cos", 1.0, 1));
  Coefficients s = make_coefficients("zero", "shifted_sine", 2.0, "constant", 0.3, 0);
  CHECK(validate_assumptions(s).all_pass());
  CHECK(s.b(1.7) == 0.0);
  CHECK(s.u0(2.2) == doctest::Approx(0.3));
}

TEST_CASE("polynomial initial datum requires flat endpoints") {
  // u0(x) = x^2 has u0'(0)=0 but u0'(pi) != 0: rejected at construction
  CHECK_THROWS(make_coefficients("cubic", "one", 0.0, "polynomial", 0.0, 0,
                                 {0.0, 0.0, 1.0}));
  // constant polynomial is fine
  Coefficients ok = make_coefficients("cubic", "one", 0.0, "polynomial", 0.0, 0, {2.0});
  CHECK(validate_assumptions(ok).all_pass());
}

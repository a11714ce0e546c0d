#include <doctest.h>

#include "common.hpp"
#include "gwk/kinematics.hpp"

using namespace gwk;

TEST_CASE("dispersion and group velocity") {
  CHECK(dispersion(vec2(4, 0)) == doctest::Approx(2.0));
  CHECK(dispersion(vec2(3, 4)) == doctest::Approx(std::sqrt(5.0)));
  const Wavevector v = group_velocity(vec2(4, 0));
  CHECK(v[0] == doctest::Approx(0.25));
  CHECK(v[1] == 0.0);
  CHECK_THROWS_AS(group_velocity(vec2(0, 0)), DomainError);
}

TEST_CASE("group velocity gap: collinear equality case") {
  const Wavevector a = vec2(1, 0), b = vec2(4, 0);
  const double gap = norm(group_velocity(a) - group_velocity(b));
  CHECK(std::abs(gap - 0.25) < 1e-12);
  CHECK(std::abs(group_velocity_gap_bound(a, b) - 0.25) < 1e-12);
}

TEST_CASE("group velocity gap bound holds") {
  Rng rng(7);
  for (int s = 0; s < 2000; ++s) {
    const Wavevector a = vec2(rng.uniform(-5, 5), rng.uniform(-5, 5));
    const Wavevector b = vec2(rng.uniform(-5, 5), rng.uniform(-5, 5));
    if (norm(a) < 1e-3 || norm(b) < 1e-3) continue;
    const double gap = norm(group_velocity(a) - group_velocity(b));
    CHECK(gap >= group_velocity_gap_bound(a, b) * (1 - 1e-12));
  }
}

TEST_CASE("f_pm signs") {
  Rng rng(3);
  for (int s = 0; s < 500; ++s) {
    const Wavevector x = vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Wavevector y = vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    CHECK(f_plus(x, y) >= -1e-12);
    CHECK(f_minus(x, y) <= 1e-12);
    CHECK(f_pm(x, y, Sign::Plus) == f_plus(x, y));
    CHECK(f_plus(x, y) * f_minus(x, y) == doctest::Approx(dot(x, y) * dot(x, y) - dot(x, x) * dot(y, y)));
  }
}

TEST_CASE("angular pair") {
  const auto p = angular_pair(vec2(1, 0), vec2(0, 2), vec2(3, 0));
  CHECK(p.alpha == doctest::Approx(1.0));
  CHECK(p.beta == doctest::Approx(0.0));
  CHECK_THROWS_AS(angular_pair(vec2(0, 0), vec2(1, 0), vec2(1, 0)), DomainError);
}

TEST_CASE("cutoff") {
  CHECK(cutoff_phi(0.0) == 1.0);
  CHECK(cutoff_phi(kCutoffLow) == 1.0);
  CHECK(cutoff_phi(kCutoffHigh) == 0.0);
  CHECK(cutoff_phi(1.0) == 0.0);
  double prev = 1.0;
  for (int i = 0; i <= 100; ++i) {
    const double x = kCutoffLow + (kCutoffHigh - kCutoffLow) * i / 100.0;
    const double v = cutoff_phi(x);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK_THROWS_AS(cutoff_phi(-1.0), DomainError);
}

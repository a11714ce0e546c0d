#include <doctest.h>

#include "common.hpp"
#include "gwk/resonance.hpp"

using namespace gwk;

TEST_CASE("delta_omega vanishes on radial solutions and its gradient matches differences") {
  Rng rng(21);
  for (int s = 0; s < 200; ++s) {
    const Wavevector k = vec2(rng.uniform(-4, 4), rng.uniform(-4, 4));
    const Wavevector k1 = vec2(rng.uniform(-4, 4), rng.uniform(-4, 4));
    if (norm(k) < 0.1 || norm(k1) < 0.1) continue;
    const double t2 = rng.uniform(0, 2 * M_PI);
    const Wavevector e = vec2(std::cos(t2), std::sin(t2));
    for (double r : radial_solve(k, k1, t2)) {
      const Wavevector k2 = e * r, k3 = k + k1 - k2;
      CHECK(std::abs(delta_omega(k, k2, k3)) < 1e-10);
    }
    const Wavevector k2 = vec2(rng.uniform(-4, 4), rng.uniform(-4, 4));
    const Wavevector k3 = vec2(rng.uniform(-4, 4), rng.uniform(-4, 4));
    if (norm(k2) < 0.1 || norm(k2 + k3 - k) < 0.1) continue;
    const Wavevector g = grad_delta_omega(k, k2, k3);
    const double h = 1e-6;
    for (int c = 0; c < 2; ++c) {
      Wavevector dp = k2, dm = k2;
      dp[c] += h;
      dm[c] -= h;
      // moving k2 with k3 fixed moves k1 = k2 + k3 - k too
      const double fd = (delta_omega(k, dp, k3) - delta_omega(k, dm, k3)) / (2 * h);
      CHECK(g[c] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("cone partition covers the circle") {
  const ConePartition p(8);
  CHECK(p.size() == 8);
  for (int j = 0; j < p.size(); ++j) {
    CHECK(p.sector_of(p.axis(j)) == j);
    CHECK(dot(p.axis(j), p.normal(j)) == doctest::Approx(0.0));
  }
  CHECK(p.half_angle() == doctest::Approx(M_PI / 8));
}

TEST_CASE("root sets: at most eight roots, each resonant, with its line derivative") {
  QuadConfig q;
  const ConePartition part(q.n_cones);
  Rng rng(22);
  int total = 0;
  for (int s = 0; s < 300; ++s) {
    const Wavevector k = vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Wavevector k3 = vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    if (norm(k) < 0.1 || norm(k3 - k) < 0.01) continue;
    const int j = rng.uniform_int(0, part.size() - 1);
    const double t = rng.uniform(-3, 3);
    const RootSet rs = resonance_roots(k, k3, part, j, t, q);
    CHECK(rs.size() <= 8);
    total += static_cast<int>(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const Wavevector k2 = rs.roots[i] * part.axis(j) + t * part.normal(j);
      CHECK(std::abs(delta_omega(k, k2, k3)) < 1e-9);
      const double proj = std::abs(dot(part.axis(j), grad_delta_omega(k, k2, k3)));
      CHECK(rs.jacobians[i] == doctest::Approx(proj).epsilon(1e-9));
    }
  }
  CHECK(total > 0);
  CHECK_THROWS_AS(resonance_roots(vec2(1, 0), vec2(1, 0), part, 0, 0.0, q), PreconditionError);
}

TEST_CASE("curve extent bounds the resonant curve") {
  CHECK(std::isinf(resonant_curve_extent(vec2(1, 0), vec2(0, 1))));
  Rng rng(23);
  for (int s = 0; s < 100; ++s) {
    const Wavevector k = vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Wavevector k1 = vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const double t2 = rng.uniform(0, 2 * M_PI);
    for (double r : radial_solve(k, k1, t2)) {
      const Wavevector k2 = vec2(std::cos(t2), std::sin(t2)) * r, k3 = k + k1 - k2;
      if (norm(k2 - k) < 1e-8) continue;
      const double R = resonant_curve_extent(k, k3);
      CHECK(norm(k2) <= R * (1 + 1e-8));
      CHECK(norm(k1) <= R * (1 + 1e-8));
    }
  }
}

TEST_CASE("quadrature config validation") {
  QuadConfig q;
  q.n_scan = 1;
  CHECK_THROWS_AS(q.validate(), ConfigError);
}

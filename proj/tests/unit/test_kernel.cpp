#include <doctest.h>

#include <algorithm>

#include "common.hpp"
#include "gwk/kernel.hpp"

using namespace gwk;
using testing::rel;

// 50-digit values from tests/oracles/amplitude_oracle.py
TEST_CASE("amplitude matches the independent transcription") {
  struct Case {
    Wavevector k1, k2, k3, k4;
    double value;
  };
  const Case cases[] = {
      {vec2(1.0, 0.0), vec2(0.0, 2.0), vec2(-1.5, 0.5), vec2(0.7, -1.1), -0.062473096747556611375},
      {vec2(0.3, 0.4), vec2(2.0, -1.0), vec2(1.1, 0.9), vec2(-0.6, 0.25), -0.0061890116696943297257},
      {vec2(5.0, 1.0), vec2(-0.2, 3.0), vec2(0.04, 0.01), vec2(2.5, -2.5), -0.72957739751676828529},
      {vec2(0.05, 0.02), vec2(8.0, 0.0), vec2(0.03, -0.04), vec2(7.9, 0.3), -1.1872963467479548899e-6},
      {vec2(-3.0, -4.0), vec2(1.0, 1.0), vec2(2.0, -0.5), vec2(-0.5, 6.0), 0.2564035921729913231},
  };
  for (const auto& c : cases) CHECK(rel(amplitude_pre(c.k1, c.k2, c.k3, c.k4), c.value) < 1e-13);
}

TEST_CASE("amplitude rejects zero wavevectors") {
  CHECK_THROWS_AS(amplitude_pre(vec2(0, 0), vec2(1, 0), vec2(0, 1), vec2(1, 1)), DomainError);
}

TEST_CASE("kernel symmetries on the resonant manifold") {
  Rng rng(11);
  int n = 0;
  while (n < 200) {
    ResonantQuadruple q;
    if (!testing::random_resonant(rng, q)) continue;
    ++n;
    const double t = amplitude_sym(q.k1, q.k, q.k2, q.k3);
    CHECK(rel(t, amplitude_sym(q.k, q.k1, q.k2, q.k3)) < 1e-9);
    CHECK(rel(t, amplitude_sym(q.k1, q.k, q.k3, q.k2)) < 1e-9);
    CHECK(rel(t, amplitude_sym(q.k2, q.k3, q.k1, q.k)) < 1e-9);
  }
}

TEST_CASE("kernel is homogeneous of degree 6") {
  Rng rng(12);
  int n = 0;
  while (n < 100) {
    ResonantQuadruple q;
    if (!testing::random_resonant(rng, q)) continue;
    ++n;
    const double base = kernel_sq(q.k, q.k1, q.k2, q.k3);
    for (double lam : {0.25, 4.0}) {
      const double scaled = kernel_sq(q.k * lam, q.k1 * lam, q.k2 * lam, q.k3 * lam);
      CHECK(rel(scaled, std::pow(lam, 6) * base) < 1e-9);
    }
  }
}

namespace {

// k2 far from k, k1 small: |k1|, |k2| << |k3|
bool localized(Rng& rng, double K, ResonantQuadruple& q) {
  const Wavevector k = vec2(K, 0.0);
  const double b = rng.uniform(0, 2 * M_PI);
  const Wavevector k1 = vec2(std::cos(b), std::sin(b)) * (K * rng.uniform(0.001, 0.02));
  const double t2 = rng.uniform(0, 2 * M_PI);
  for (double r : radial_solve(k, k1, t2, 4 * norm(k1), 400)) {
    const Wavevector k2 = vec2(std::cos(t2), std::sin(t2)) * r;
    q = ResonantQuadruple::from(k, k2, k + k1 - k2);
    if (norm(k2 - k) > 1e-6 && in_localized_regime(q)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("principal parts cancel exactly and the pieces reassemble") {
  Rng rng(13);
  int n = 0;
  while (n < 50) {
    ResonantQuadruple q;
    if (!localized(rng, rng.uniform(8, 64), q)) continue;
    ++n;
    const KernelBreakdown b = decompose(q);
    CHECK(b.principal[0] + b.principal[1] == 0.0);
    CHECK(b.principal[2] + b.principal[3] == 0.0);
    for (int side = 0; side < 2; ++side) {
      const auto& p = b.pieces[side];
      const double half = side == 0 ? b.half_k1k() : b.half_kk1();
      const double scale = std::max({std::abs(half), std::abs(p[0]), std::abs(p[1]), std::abs(p[2])});
      CHECK(std::abs(compensated_sum({p[0], p[1], p[2]}) - half) / scale < 1e-10);
    }
    CHECK(rel(b.t_sym, 0.5 * (b.half_k1k() + b.half_kk1())) < 1e-10);
  }
}

TEST_CASE("decompose rejects quadruples outside the localized regime") {
  const auto q = ResonantQuadruple::from(vec2(1, 0), vec2(0.5, 0.5), vec2(0.7, 0.2));
  CHECK_THROWS_AS(decompose(q), PreconditionError);
}

TEST_CASE("asymptotic denominator: corrected error is third order in 1/omega") {
  const Wavevector k1 = vec2(0.3, 0.1);
  double prev_lead = 0, prev_corr = 0;
  for (double K : {10.0, 40.0, 160.0}) {
    const auto d = asymptotic_denominator(k1, vec2(K * 0.8, K * 0.6));
    const double el = std::abs(d.leading - d.exact), ec = std::abs(d.corrected - d.exact);
    CHECK(ec < el);
    if (prev_lead > 0) {
      // omega doubles per step: leading error ~ omega^-2, corrected ~ omega^-3
      CHECK(prev_lead / el > 3.0);
      CHECK(prev_corr / ec > 6.0);
    }
    prev_lead = el;
    prev_corr = ec;
  }
  CHECK_THROWS_AS(asymptotic_denominator(vec2(1, 0), vec2(2, 0)), PreconditionError);
}

TEST_CASE("growth scan on a short sweep") {
  ScanConfig s;
  s.k_values = {8, 16, 32};
  s.n_k1_angles = 4;
  s.n_theta2 = 12;
  s.n_radial_scan = 800;
  const ScanReport r = growth_scan(s);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.slope_kernel_sq <= 2.1);
  for (const auto& row : r.rows) CHECK(row.n_samples > 0);
}

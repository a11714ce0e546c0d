#pragma once

#include <cmath>
#include <memory>

#include "gwk/kernel.hpp"
#include "gwk/measure.hpp"
#include "gwk/resonance.hpp"
#include "gwk/rng.hpp"

namespace testing {

inline double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// a non-trivial resonant quadruple; k2 on a ray, k3 = k + k1 - k2
inline bool random_resonant(gwk::Rng& rng, gwk::ResonantQuadruple& q) {
  using namespace gwk;
  const double a = rng.uniform(0, 2 * M_PI), b = rng.uniform(0, 2 * M_PI);
  const Wavevector k = vec2(std::cos(a), std::sin(a)) * std::exp(rng.uniform(std::log(0.3), std::log(6.0)));
  const Wavevector k1 = vec2(std::cos(b), std::sin(b)) * std::exp(rng.uniform(std::log(0.3), std::log(6.0)));
  const double t2 = rng.uniform(0, 2 * M_PI);
  for (double r : radial_solve(k, k1, t2, -1.0, 800)) {
    const Wavevector k2 = vec2(std::cos(t2), std::sin(t2)) * r;
    const Wavevector k3 = k + k1 - k2;
    if (norm(k2 - k) < 1e-6 * norm(k) || norm(k3 - k) < 1e-6 * norm(k) || norm(k3) < 1e-3) continue;
    q = ResonantQuadruple::from(k, k2, k3);
    return true;
  }
  return false;
}

// small grid and a cheap measure for operator tests
inline gwk::GridConfig small_grid() { return {0.1, 6.0, 10, 8}; }

inline gwk::QuadConfig small_quad() {
  gwk::QuadConfig q = gwk::default_measure_quad();
  q.n_transverse = 24;
  q.n_scan = 48;
  return q;
}

inline std::shared_ptr<const gwk::ResonantMeasure> small_measure() {
  return gwk::shared_measure(gwk::Grid(small_grid()), small_quad());
}

}  // namespace testing

#include "gwk/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gwk/errors.hpp"
#include "gwk/kernel.hpp"
#include "gwk/parallel.hpp"

namespace gwk {

void OperatorParams::validate() const {
  if (!(epsilon >= 0 && epsilon <= 1)) throw ConfigError("operator: epsilon must lie in [0, 1]");
  if (!(weight_a >= 0) || !std::isfinite(weight_a)) throw ConfigError("operator: weight_a must be >= 0");
}

namespace {

void check_grid(const Field& f, const ResonantMeasure& mu) {
  if (!(f.grid == mu.grid())) throw PreconditionError("operator: field grid differs from measure grid");
}

// per-node driver; fn(i, m, atom, i3, m3, m1, m2) is the atom value without the weight
template <class Fn>
Field apply_nodes(const ResonantMeasure& mu, Fn&& fn) {
  const Grid& g = mu.grid();
  Field out(g);
  const int nt = g.n_theta();
  parallel_for(g.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx / nt), m = static_cast<int>(idx % nt);
    const double v = mu.integrate(i, m, [&](const MeasureAtom& a, int i3, int m3, int m1, int m2) {
      return a.wT * fn(i, m, a, i3, m3, m1, m2);
    });
    if (!std::isfinite(v)) throw IntegrandError("operator: non-finite value at node");
    out.values[idx] = v;
  });
  return out;
}

template <std::size_t N, class Fn>
std::array<Field, N> apply_nodes_many(const ResonantMeasure& mu, Fn&& fn) {
  const Grid& g = mu.grid();
  std::array<Field, N> out;
  for (auto& f : out) f = Field(g);
  const int nt = g.n_theta();
  parallel_for(g.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx / nt), m = static_cast<int>(idx % nt);
    const auto v = mu.integrate_many<N>(i, m, [&](const MeasureAtom& a, int i3, int m3, int m1, int m2) {
      std::array<double, N> x = fn(i, m, a, i3, m3, m1, m2);
      for (double& y : x) y *= a.wT;
      return x;
    });
    for (std::size_t q = 0; q < N; ++q) {
      if (!std::isfinite(v[q])) throw IntegrandError("operator: non-finite value at node");
      out[q].values[idx] = v[q];
    }
  });
  return out;
}

std::vector<double> radial_weights(const Grid& g, double s) {
  std::vector<double> w(g.n_r());
  for (int i = 0; i < g.n_r(); ++i) w[i] = weight_pow(g.radius(i), s);
  return w;
}

}  // namespace

Field collision_apply(const Field& f, const ResonantMeasure& mu) {
  check_grid(f, mu);
  return apply_nodes(mu, [&](int i, int m, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
    const double f0 = f.at(i, m), f3 = f.at(i3, m3);
    const double f1 = mu.pos_k1(f, a, m1), f2 = mu.pos_k2(f, a, m2);
    return 2.0 * (f2 * f3 * (f1 + f0) - f0 * f1 * (f2 + f3));
  });
}

Field collision_apply(const Field& f, const QuadConfig& quad) {
  return collision_apply(f, *shared_measure(f.grid, quad));
}

Field linearized_apply(const Field& g, const Field& h, const ResonantMeasure& mu) {
  check_grid(g, mu);
  check_grid(h, mu);
  return apply_nodes(mu, [&](int i, int m, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
    const double g1 = mu.pos_k1(g, a, m1), g2 = mu.pos_k2(g, a, m2), g3 = g.at(i3, m3);
    const double h0 = h.at(i, m), h3 = h.at(i3, m3);
    return 2.0 * g1 * g2 * (h3 - h0) + 2.0 * g2 * g3 * h0 - 2.0 * g1 * g3 * h0;
  });
}

Field split_apply(SplitPart part, const Field& g, const Field& h, const OperatorParams& params,
                  const ResonantMeasure& mu) {
  params.validate();
  check_grid(g, mu);
  check_grid(h, mu);
  const Grid& grid = mu.grid();
  if (part == SplitPart::Dissipative) {
    return apply_nodes(mu, [&](int i, int m, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
      if (!a.chi10()) return 0.0;
      const double damp =
          params.epsilon > 0 ? std::exp(-params.epsilon * (grid.radius(i) + grid.radius(i3))) : 1.0;
      const double g1 = mu.pos_k1(g, a, m1), g2 = mu.pos_k2(g, a, m2);
      return 2.0 * damp * g1 * g2 * (h.at(i3, m3) - h.at(i, m));
    });
  }
  return apply_nodes(mu, [&](int i, int m, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
    const double g1 = mu.pos_k1(g, a, m1), g2 = mu.pos_k2(g, a, m2), g3 = g.at(i3, m3);
    const double h0 = h.at(i, m), h3 = h.at(i3, m3);
    const double gain = a.chi10() ? 0.0 : 2.0 * g1 * g2 * (h3 - h0);
    return gain + 2.0 * g2 * g3 * h0 - 2.0 * g1 * g3 * h0;
  });
}

Field commutator_apply(CommutatorPart part, const Field& g, const Field& h,
                       const OperatorParams& params, const ResonantMeasure& mu) {
  params.validate();
  check_grid(g, mu);
  check_grid(h, mu);
  const auto X = radial_weights(mu.grid(), params.weight_a);
  const auto x = radial_weights(mu.grid(), 0.5 * params.weight_a);
  if (part == CommutatorPart::Tilde) {
    return apply_nodes(mu, [&](int i, int, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
      if (!a.chi10()) return 0.0;
      const double w = (X[i] - X[i3]) / (x[i] * x[i3]);
      return 2.0 * w * mu.pos_k1(g, a, m1) * mu.pos_k2(g, a, m2) * h.at(i3, m3);
    });
  }
  return apply_nodes(mu, [&](int i, int, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
    const double base = 2.0 * mu.pos_k1(g, a, m1) * mu.pos_k2(g, a, m2) * h.at(i3, m3);
    if (!a.chi10()) return (X[i] - X[i3]) / X[i3] * base;
    const double d = x[i] - x[i3];
    return d * d * (x[i] + x[i3]) / (x[i] * X[i3]) * base;
  });
}

Field forcing_apply(const Field& g_next, const Field& g_prev, const Field& h,
                    const ResonantMeasure& mu) {
  check_grid(g_next, mu);
  check_grid(g_prev, mu);
  check_grid(h, mu);
  const Field& g = g_next;
  const Field& gt = g_prev;
  const double p = kWeightContraction;
  const auto W = radial_weights(mu.grid(), p);
  return apply_nodes(mu, [&](int i, int m, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
    const double w0 = W[i], w3 = W[i3];
    const double w1 = weight_pow(a.r1, p), w2 = weight_pow(a.r2, p);
    const double G0 = g.at(i, m), G2 = mu.pos_k2(g, a, m2), G3 = g.at(i3, m3);
    const double T1 = mu.pos_k1(gt, a, m1), T2 = mu.pos_k2(gt, a, m2), T3 = gt.at(i3, m3);
    const double H1 = mu.at_k1(h, a, m1) / w1, H2 = mu.at_k2(h, a, m2) / w2, H3 = h.at(i3, m3) / w3;
    // sample as drawn: |k2| < |k3|
    const double first = 2.0 * w0 * (G3 - G0 + (w0 - w3) / w3 * G3) * (G2 * H1 + T1 * H2);
    const double b_direct = (H2 * G3 + T2 * H3) * w0 * G0;
    // mirror k2 <-> k3: |k2| >= |k3|
    const double b_mirror = (H3 * G2 + T3 * H2) * w0 * G0;
    const double c_mirror = -2.0 * (H1 * G3 + T1 * H3) * w0 * G0;
    return first + b_direct + b_mirror + c_mirror;
  });
}

Field collision_frequency_field(const Field& g, const ResonantMeasure& mu, bool majorant) {
  check_grid(g, mu);
  const double s = majorant ? 1.0 : -1.0;
  return apply_nodes(mu, [&](int, int, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
    const double g1 = mu.pos_k1(g, a, m1), g2 = mu.pos_k2(g, a, m2), g3 = g.at(i3, m3);
    return (a.chi10() ? 0.0 : 2.0 * g1 * g2) + 2.0 * g1 * g3 + s * 2.0 * g2 * g3;
  });
}

double collision_frequency(const Field& g, const Wavevector& k, const QuadConfig& quad,
                           bool majorant) {
  const double s = majorant ? 1.0 : -1.0;
  Integrand F = [&](const Wavevector& kk, const Wavevector& k1, const Wavevector& k2,
                    const Wavevector& k3) {
    const double g1 = interpolate(g, k1), g2 = interpolate(g, k2), g3 = interpolate(g, k3);
    if (g2 == 0.0 || (g1 == 0.0 && g3 == 0.0)) return 0.0;
    const bool chi = norm(k2) < norm(k3) && norm(k1) < norm(kk);
    const double bracket = (chi ? 0.0 : 2.0 * g1 * g2) + s * g2 * g3;
    return bracket == 0.0 ? 0.0 : kernel_sq(kk, k1, k2, k3) * bracket;
  };
  return reduce_integral(F, k, ConePartition(quad.n_cones), quad);
}

Field gain_apply(const Field& g, const Field& h, const ResonantMeasure& mu) {
  check_grid(g, mu);
  check_grid(h, mu);
  return apply_nodes(mu, [&](int, int, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
    if (a.chi10()) return 0.0;
    return 2.0 * mu.pos_k1(g, a, m1) * mu.pos_k2(g, a, m2) * h.at(i3, m3);
  });
}

GainLoss gain_loss(const Field& g, const Field& h, const ResonantMeasure& mu) {
  check_grid(g, mu);
  check_grid(h, mu);
  auto r = apply_nodes_many<2>(mu, [&](int, int, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
    const double g1 = mu.pos_k1(g, a, m1), g2 = mu.pos_k2(g, a, m2), g3 = g.at(i3, m3);
    return std::array<double, 2>{2.0 * g1 * g2 * h.at(i3, m3), 2.0 * g2 * g3 - 2.0 * g1 * g2 - 2.0 * g1 * g3};
  });
  return {std::move(r[0]), std::move(r[1])};
}

IterateDifference difference_terms(const Field& g, const Field& gt, const Field& d, const Field& h,
                                   const Field& e, const ResonantMeasure& mu) {
  for (const Field* f : {&g, &gt, &d, &h, &e}) check_grid(*f, mu);
  // interpolated difference of the clipped coefficients: linear in d unless clipping is active
  auto diff = [](double a, double at, double lin) {
    if (a > 0.0 && at > 0.0) return lin;
    return std::max(a, 0.0) - std::max(at, 0.0);
  };
  auto r = apply_nodes_many<3>(mu, [&](int, int, const MeasureAtom& a, int i3, int m3, int m1, int m2) {
    const double a1 = mu.at_k1(g, a, m1), a2 = mu.at_k2(g, a, m2);
    const double b1 = mu.at_k1(gt, a, m1), b2 = mu.at_k2(gt, a, m2);
    const double g1 = std::max(a1, 0.0), g2 = std::max(a2, 0.0), g3 = g.at(i3, m3);
    const double t1 = std::max(b1, 0.0), t2 = std::max(b2, 0.0);
    const double d1 = diff(a1, b1, mu.at_k1(d, a, m1)), d2 = diff(a2, b2, mu.at_k2(d, a, m2));
    const double d3 = d.at(i3, m3);
    const double d12 = d1 * g2 + t1 * d2;
    const double d23 = d2 * g3 + t2 * d3;
    const double d13 = d1 * g3 + t1 * d3;
    return std::array<double, 3>{2.0 * d12 * h.at(i3, m3), 2.0 * d23 - 2.0 * d12 - 2.0 * d13,
                                 2.0 * g1 * g2 * e.at(i3, m3)};
  });
  return {std::move(r[0]), std::move(r[1]), std::move(r[2])};
}

Field multiply_weight(const Field& f, double a) {
  Field out(f.grid);
  const int nt = f.grid.n_theta();
  for (int i = 0; i < f.grid.n_r(); ++i) {
    const double w = weight_pow(f.grid.radius(i), a);
    for (int m = 0; m < nt; ++m) out.at(i, m) = w * f.at(i, m);
  }
  return out;
}

double pairing(const Field& f, const Field& h) {
  if (!(f.grid == h.grid)) throw PreconditionError("pairing: grids differ");
  CompensatedSum s;
  const int nt = f.grid.n_theta();
  for (int i = 0; i < f.grid.n_r(); ++i) {
    CompensatedSum ring;
    for (int m = 0; m < nt; ++m) ring.add(f.at(i, m) * h.at(i, m));
    s.add(f.grid.area(i) * ring.value());
  }
  return s.value();
}

}  // namespace gwk

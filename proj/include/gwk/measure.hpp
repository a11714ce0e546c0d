#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "gwk/numerics.hpp"
#include "gwk/resonance.hpp"
#include "gwk/spectrum.hpp"

namespace gwk {

// One sample of the resonant curve for an output node at angle 0 and a k3 node.
// Only the half |k2| < |k3| is stored; integrands are evaluated on the sample and its
// k2 <-> k3 mirror, which makes the discrete measure exactly symmetric in k2, k3.
struct MeasureAtom {
  double wT;      // curve weight dt/|e.grad| times the kernel
  double r1, r2;  // |k1|, |k2|
  float a1, b1, a2, b2;
  std::int16_t i1, m1, i2, m2;
  std::uint8_t flags;

  static constexpr std::uint8_t kChi10 = 1;    // |k1| < |k|
  static constexpr std::uint8_t kTrivial = 2;  // k2 = k
  bool chi10() const { return flags & kChi10; }
};

struct MeasureStats {
  std::size_t n_atoms = 0;
  std::size_t n_classes = 0;
  std::size_t n_roots = 0;
  std::size_t dropped_outside = 0;
  std::size_t max_roots_per_line = 0;
  double build_seconds = 0.0;
};

// Node-based resonant measure on a spectrum grid. k3 runs over grid nodes, k1 and k2 are
// interpolated. Samples are cached for output nodes at angle 0 and rotated to other angles;
// the curve of each unordered node pair is computed once and reused for both orders, so the
// weight of (k, k3) equals that of (k3, k).
class ResonantMeasure {
 public:
  ResonantMeasure(const Grid& grid, const QuadConfig& quad);

  const Grid& grid() const { return grid_; }
  const QuadConfig& quad() const { return quad_; }
  const MeasureStats& stats() const { return stats_; }

  struct View {
    const MeasureAtom* begin;
    const MeasureAtom* end;
  };
  View atoms(int i, int i3, int dm) const {
    std::size_t c = class_index(i, i3, dm);
    return {atoms_.data() + offsets_[c], atoms_.data() + offsets_[c + 1]};
  }

  // Visit every sample contributing to output node (i, m). fn(atom, i3, m3, m1, m2) gets the
  // k3 node and the absolute angular indices of the k1, k2 stencils; its return value is
  // weighted by the k3 node area and accumulated with compensated summation.
  template <class Fn>
  double integrate(int i, int m, Fn&& fn) const {
    const int nt = grid_.n_theta();
    CompensatedSum total;
    for (int i3 = 0; i3 < grid_.n_r(); ++i3) {
      const double A3 = grid_.area(i3);
      for (int dm = 0; dm < nt; ++dm) {
        View v = atoms(i, i3, dm);
        if (v.begin == v.end) continue;
        const int m3 = (m + dm) % nt;
        CompensatedSum s;
        for (const MeasureAtom* a = v.begin; a != v.end; ++a) {
          const int m1 = (a->m1 + m) % nt;
          const int m2 = (a->m2 + m) % nt;
          s.add(fn(*a, i3, m3, m1, m2));
        }
        total.add(A3 * s.value());
      }
    }
    return total.value();
  }

  // same traversal with N accumulators; fn returns std::array<double, N>
  template <std::size_t N, class Fn>
  std::array<double, N> integrate_many(int i, int m, Fn&& fn) const {
    const int nt = grid_.n_theta();
    std::array<CompensatedSum, N> total;
    for (int i3 = 0; i3 < grid_.n_r(); ++i3) {
      const double A3 = grid_.area(i3);
      for (int dm = 0; dm < nt; ++dm) {
        View v = atoms(i, i3, dm);
        if (v.begin == v.end) continue;
        const int m3 = (m + dm) % nt;
        std::array<CompensatedSum, N> s;
        for (const MeasureAtom* a = v.begin; a != v.end; ++a) {
          const int m1 = (a->m1 + m) % nt;
          const int m2 = (a->m2 + m) % nt;
          const std::array<double, N> x = fn(*a, i3, m3, m1, m2);
          for (std::size_t q = 0; q < N; ++q) s[q].add(x[q]);
        }
        for (std::size_t q = 0; q < N; ++q) total[q].add(A3 * s[q].value());
      }
    }
    std::array<double, N> out;
    for (std::size_t q = 0; q < N; ++q) out[q] = total[q].value();
    return out;
  }

  // value of a field at the k1 / k2 point of an atom (cubic, signed)
  double at_k1(const Field& f, const MeasureAtom& a, int m1) const {
    return cubic_stencil(f.values, grid_.n_r(), grid_.n_theta(), a.i1, m1, a.a1, a.b1);
  }
  double at_k2(const Field& f, const MeasureAtom& a, int m2) const {
    return cubic_stencil(f.values, grid_.n_r(), grid_.n_theta(), a.i2, m2, a.a2, a.b2);
  }
  // same, clipped at 0 for coefficient spectra so gain terms keep their sign
  double pos_k1(const Field& f, const MeasureAtom& a, int m1) const {
    return std::max(0.0, at_k1(f, a, m1));
  }
  double pos_k2(const Field& f, const MeasureAtom& a, int m2) const {
    return std::max(0.0, at_k2(f, a, m2));
  }

 private:
  std::size_t class_index(int i, int i3, int dm) const {
    return (static_cast<std::size_t>(i) * grid_.n_r() + i3) * grid_.n_theta() + dm;
  }

  Grid grid_;
  QuadConfig quad_;
  std::vector<MeasureAtom> atoms_;
  std::vector<std::size_t> offsets_;
  MeasureStats stats_;
};

// shares one measure per (grid, quad) pair
std::shared_ptr<const ResonantMeasure> shared_measure(const Grid& grid, const QuadConfig& quad);

// quadrature used on the node measure unless overridden
QuadConfig default_measure_quad();

}  // namespace gwk

#include "gwk/measure.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <tuple>

#include "gwk/errors.hpp"
#include "gwk/kernel.hpp"
#include "gwk/parallel.hpp"

namespace gwk {

namespace {

bool fill_stencil(const Grid& g, const Wavevector& p, std::int16_t& i, std::int16_t& m, float& a,
                  float& b) {
  const Stencil s = g.stencil(p);
  if (!s.inside) return false;
  i = static_cast<std::int16_t>(s.i0);
  m = static_cast<std::int16_t>(s.m0);
  a = static_cast<float>(s.a);
  b = static_cast<float>(s.b);
  return true;
}

struct ClassWork {
  std::vector<MeasureAtom> direct;
  std::vector<MeasureAtom> reverse;
  std::size_t n_roots = 0;
  std::size_t dropped = 0;
  std::size_t max_per_line = 0;
};

}  // namespace

ResonantMeasure::ResonantMeasure(const Grid& grid, const QuadConfig& quad) : grid_(grid), quad_(quad) {
  quad.validate();
  if (grid.n_r() < 4) throw ConfigError("measure: n_r must be >= 4 for the cubic stencil");
  const auto t0 = std::chrono::steady_clock::now();
  const int nr = grid.n_r(), nt = grid.n_theta();
  const double r_lo = grid.config().r_min * (1.0 - 1e-12);
  const double r_hi = grid.config().r_max * (1.0 + 1e-12);
  const ConePartition part(quad.n_cones);

  struct Canon {
    int i, i3, dm;
  };
  std::vector<Canon> canon;
  for (int i = 0; i < nr; ++i)
    for (int i3 = i; i3 < nr; ++i3)
      for (int dm = 0; dm < nt; ++dm) {
        if (i == i3 && (dm < 1 || dm > nt / 2)) continue;
        canon.push_back({i, i3, dm});
      }

  std::vector<ClassWork> work(canon.size());
  parallel_for(canon.size(), [&](std::size_t c) {
    const auto [i, i3, dm] = canon[c];
    ClassWork& w = work[c];
    const Wavevector k = vec2(grid.radius(i), 0.0);
    const Wavevector k3 = grid.node(i3, dm);
    if (!(norm(k3 - k) > quad.exclusion_radius)) return;
    const double R = std::min(grid.config().r_max, resonant_curve_extent(k, k3)) * (1.0 + 1e-9);
    const double ell = quad.line_scale > 0 ? quad.line_scale
                                           : 0.5 * std::min(grid.radius(i), grid.radius(i3));
    std::vector<double> ts, dts;
    transverse_rule(R, quad.n_transverse, ell, ts, dts);
    const auto nodes = scan_nodes(R, quad.n_scan, ell);
    const bool self_reverse = i == i3 && 2 * dm == nt;
    const double half = self_reverse ? 0.5 : 1.0;
    const int shift = (nt - dm) % nt;
    const double ri = grid.radius(i), r3 = grid.radius(i3);

    for (int j = 0; j < part.size(); ++j) {
      for (int l = 0; l < quad.n_transverse; ++l) {
        const RootSet rs = resonance_roots_on(k, k3, part, j, ts[l], nodes, quad);
        w.max_per_line = std::max(w.max_per_line, rs.size());
        for (std::size_t q = 0; q < rs.size(); ++q) {
          ++w.n_roots;
          const Wavevector k2 = ts[l] * part.normal(j) + rs.roots[q] * part.axis(j);
          const Wavevector k1 = k2 + k3 - k;
          const double r1 = norm(k1), r2 = norm(k2);
          if (r1 < r_lo || r1 > r_hi || r2 < r_lo || r2 > r_hi) {
            ++w.dropped;
            continue;
          }
          const bool to_direct = r2 < r3;
          const bool to_reverse = r1 < ri;
          if (!to_direct && !to_reverse) continue;
          MeasureAtom a{};
          if (!fill_stencil(grid, k1, a.i1, a.m1, a.a1, a.b1) ||
              !fill_stencil(grid, k2, a.i2, a.m2, a.a2, a.b2)) {
            ++w.dropped;
            continue;
          }
          a.wT = half * dts[l] / rs.jacobians[q] * kernel_sq(k, k1, k2, k3);
          a.r1 = r1;
          a.r2 = r2;
          const std::uint8_t trivial = rs.is_trivial[q] ? MeasureAtom::kTrivial : 0;
          if (to_direct) {
            a.flags = static_cast<std::uint8_t>((r1 < ri ? MeasureAtom::kChi10 : 0) | trivial);
            w.direct.push_back(a);
          }
          if (to_reverse) {
            // roles k <-> k3, k1 <-> k2, rotated by -dm so the new output node sits at angle 0
            MeasureAtom b = a;
            b.r1 = r2;
            b.r2 = r1;
            b.i1 = a.i2;
            b.a1 = a.a2;
            b.b1 = a.b2;
            b.m1 = static_cast<std::int16_t>((a.m2 + shift) % nt);
            b.i2 = a.i1;
            b.a2 = a.a1;
            b.b2 = a.b1;
            b.m2 = static_cast<std::int16_t>((a.m1 + shift) % nt);
            b.flags = static_cast<std::uint8_t>((r2 < r3 ? MeasureAtom::kChi10 : 0) | trivial);
            (self_reverse ? w.direct : w.reverse).push_back(b);
          }
        }
      }
    }
  });

  // scatter into class slots; canonical and reverse slots never coincide except self-reverse
  const std::size_t n_classes = static_cast<std::size_t>(nr) * nr * nt;
  std::vector<std::pair<std::size_t, std::size_t>> src(n_classes, {SIZE_MAX, 0});
  for (std::size_t c = 0; c < canon.size(); ++c) {
    const auto [i, i3, dm] = canon[c];
    src[class_index(i, i3, dm)] = {c, 0};
    if (!(i == i3 && 2 * dm == nt)) src[class_index(i3, i, (nt - dm) % nt)] = {c, 1};
  }
  offsets_.assign(n_classes + 1, 0);
  std::size_t total = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    offsets_[c] = total;
    if (src[c].first == SIZE_MAX) continue;
    const ClassWork& w = work[src[c].first];
    total += src[c].second == 0 ? w.direct.size() : w.reverse.size();
  }
  offsets_[n_classes] = total;
  atoms_.reserve(total);
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (src[c].first == SIZE_MAX) continue;
    ClassWork& w = work[src[c].first];
    auto& v = src[c].second == 0 ? w.direct : w.reverse;
    atoms_.insert(atoms_.end(), v.begin(), v.end());
    if (!v.empty()) ++stats_.n_classes;
  }
  for (auto& w : work) {
    stats_.n_roots += w.n_roots;
    stats_.dropped_outside += w.dropped;
    stats_.max_roots_per_line = std::max(stats_.max_roots_per_line, w.max_per_line);
  }
  stats_.n_atoms = atoms_.size();
  stats_.build_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::shared_ptr<const ResonantMeasure> shared_measure(const Grid& grid, const QuadConfig& quad) {
  using Key = std::tuple<double, double, int, int, int, int, double, double, double, int, double>;
  auto key_of = [](const Grid& g, const QuadConfig& q) {
    const auto& c = g.config();
    return Key{c.r_min, c.r_max, c.n_r, c.n_theta, q.n_transverse, q.n_scan, q.exclusion_radius,
               q.resonance_tol, q.bisection_tol, q.n_cones, q.line_scale};
  };
  static std::mutex mtx;
  static std::vector<std::pair<Key, std::shared_ptr<const ResonantMeasure>>> cache;
  const Key key = key_of(grid, quad);
  {
    std::lock_guard<std::mutex> lock(mtx);
    for (auto& e : cache)
      if (e.first == key) return e.second;
  }
  auto mu = std::make_shared<const ResonantMeasure>(grid, quad);
  std::lock_guard<std::mutex> lock(mtx);
  for (auto& e : cache)
    if (e.first == key) return e.second;
  if (cache.size() >= 3) cache.erase(cache.begin());
  cache.emplace_back(key, mu);
  return mu;
}

QuadConfig default_measure_quad() {
  QuadConfig q;
  q.n_transverse = 48;
  q.n_scan = 96;
  return q;
}

}  // namespace gwk

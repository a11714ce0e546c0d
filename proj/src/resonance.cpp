#include "gwk/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gwk/numerics.hpp"
#include "gwk/parallel.hpp"

namespace gwk {

double delta_omega(const Wavevector& k, const Wavevector& k2, const Wavevector& k3) {
  return dispersion(k) + dispersion(k2 + k3 - k) - dispersion(k2) - dispersion(k3);
}

Wavevector grad_delta_omega(const Wavevector& k, const Wavevector& k2, const Wavevector& k3) {
  const Wavevector k1 = k2 + k3 - k;
  if (!(norm(k1) > 0 && norm(k2) > 0)) throw DomainError("grad_delta_omega: |k1| or |k2| is zero");
  return group_velocity(k1) - group_velocity(k2);
}

double grad_lower_bound(const Wavevector& k, const Wavevector& k2, const Wavevector& k3) {
  const double w1 = dispersion(k2 + k3 - k), w2 = dispersion(k2);
  return norm(k3 - k) / (2.0 * w1 * w2 * (w1 + w2));
}

ConePartition::ConePartition(int n_cones) : n_(n_cones) {
  if (n_cones < 4) throw ConfigError("ConePartition: need at least 4 cones");
  for (int j = 0; j < n_; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / n_;
    axes_.push_back(vec2(std::cos(phi), std::sin(phi)));
    normals_.push_back(vec2(-std::sin(phi), std::cos(phi)));
  }
}

double ConePartition::half_angle() const { return std::numbers::pi / n_; }

int ConePartition::sector_of(const Wavevector& v) const {
  const double h = half_angle();
  const double x = (std::atan2(v[1], v[0]) + h) / (2.0 * h);
  int idx = static_cast<int>(std::floor(x)) % n_;
  if (idx < 0) idx += n_;
  return idx;
}

void QuadConfig::validate() const {
  if (n_k3_radial < 2 || n_k3_angular < 2 || n_transverse < 2 || n_scan < 2)
    throw ConfigError("quad: all counts must be >= 2");
  if (!(resonance_tol > 0) || !(bisection_tol > 0)) throw ConfigError("quad: tolerances must be > 0");
  if (!(exclusion_radius > 0)) throw ConfigError("quad: exclusion_radius must be > 0");
  if (!(transverse_halfwidth > 0)) throw ConfigError("quad: transverse_halfwidth must be > 0");
  if (!(k3_r_min > 0) || !(k3_r_max > k3_r_min)) throw ConfigError("quad: invalid k3 radial range");
  if (n_cones < 4) throw ConfigError("quad: n_cones must be >= 4");
  if (line_scale < 0) throw ConfigError("quad: line_scale must be >= 0");
}

std::vector<double> scan_nodes(double R, int n, double line_scale) {
  std::vector<double> s(n);
  if (line_scale <= 0) {
    for (int i = 0; i < n; ++i) s[i] = -R + 2.0 * R * i / (n - 1);
  } else {
    const double U = std::asinh(R / line_scale);
    for (int i = 0; i < n; ++i) s[i] = line_scale * std::sinh(-U + 2.0 * U * i / (n - 1));
  }
  return s;
}

void transverse_rule(double R, int n, double line_scale, std::vector<double>& t,
                     std::vector<double>& dt) {
  t.resize(n);
  dt.resize(n);
  if (line_scale <= 0) {
    const double h = 2.0 * R / n;
    for (int l = 0; l < n; ++l) {
      t[l] = -R + (l + 0.5) * h;
      dt[l] = h;
    }
  } else {
    const double U = std::asinh(R / line_scale);
    const double h = 2.0 * U / n;
    for (int l = 0; l < n; ++l) {
      const double u = -U + (l + 0.5) * h;
      t[l] = line_scale * std::sinh(u);
      dt[l] = line_scale * std::cosh(u) * h;
    }
  }
}

RootSet resonance_roots_on(const Wavevector& k, const Wavevector& k3, const ConePartition& part,
                           int j, double t, const std::vector<double>& s_nodes,
                           const QuadConfig& cfg, bool filter_sector) {
  RootSet out;
  const Wavevector e = part.axis(j);
  const Wavevector en = part.normal(j);
  const Wavevector base = t * en;
  auto f = [&](double s) { return delta_omega(k, base + s * e, k3); };
  const double stop = 1e-3 * cfg.resonance_tol;
  const double k_scale = std::max(1.0, norm(k));

  auto accept = [&](double s, double fs) {
    if (!(std::abs(fs) <= cfg.resonance_tol)) return;
    const Wavevector k2 = base + s * e;
    const Wavevector k1 = k2 + k3 - k;
    if (!(norm(k2) > 0 && norm(k1) > 0)) return;
    const Wavevector g = group_velocity(k1) - group_velocity(k2);
    if (filter_sector && part.sector_of(g) != j) return;
    out.roots.push_back(s);
    out.jacobians.push_back(std::abs(dot(e, g)));
    out.is_trivial.push_back(norm(k2 - k) <= 1e-9 * k_scale);
  };

  const std::size_t n = s_nodes.size();
  std::vector<double> fv(n);
  for (std::size_t i = 0; i < n; ++i) fv[i] = f(s_nodes[i]);
  for (std::size_t i = 0; i < n; ++i) {
    if (fv[i] == 0.0) {
      accept(s_nodes[i], 0.0);
      continue;
    }
    if (i + 1 >= n || fv[i + 1] == 0.0 || (fv[i] < 0) == (fv[i + 1] < 0)) continue;
    double lo = s_nodes[i], hi = s_nodes[i + 1], flo = fv[i], fhi = fv[i + 1];
    // Illinois false position, falling back to bisection when the bracket stalls
    int side = 0;
    for (int it = 0; it < 200; ++it) {
      double mid = (lo * fhi - hi * flo) / (fhi - flo);
      const double w = hi - lo;
      if (!(mid > lo + 0.01 * w && mid < hi - 0.01 * w) || it % 8 == 7) mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        flo = fhi = 0.0;
        break;
      }
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
        if (side == -1) fhi *= 0.5;
        side = -1;
      } else {
        hi = mid;
        fhi = fm;
        if (side == 1) flo *= 0.5;
        side = 1;
      }
      if (hi - lo <= cfg.bisection_tol * std::max(1.0, std::abs(mid)) || std::abs(fm) <= stop) break;
    }
    // the halving above only damps the bracket weights; report true residuals
    flo = f(lo);
    fhi = f(hi);
    if (std::abs(flo) <= std::abs(fhi))
      accept(lo, flo);
    else
      accept(hi, fhi);
  }
  return out;
}

RootSet resonance_roots(const Wavevector& k, const Wavevector& k3, const ConePartition& part, int j,
                        double t, const QuadConfig& cfg) {
  if (!(norm(k3 - k) > cfg.exclusion_radius))
    throw PreconditionError("resonance_roots: k3 inside the exclusion ball around k");
  const auto nodes = scan_nodes(cfg.transverse_halfwidth, cfg.n_scan, cfg.line_scale);
  return resonance_roots_on(k, k3, part, j, t, nodes, cfg);
}

double resonant_curve_extent(const Wavevector& k, const Wavevector& k3) {
  const double dw = std::abs(dispersion(k3) - dispersion(k));
  if (dw == 0.0) return std::numeric_limits<double>::infinity();
  const double q = norm(k3 - k) / dw;
  return q * q;
}

namespace {

struct K3Cell {
  Wavevector k3;
  double area;
};

void add_cell(std::vector<K3Cell>& cells, const Wavevector& k, const QuadConfig& cfg, double r0,
              double r1, double t0, double t1, int depth) {
  const double rc = std::sqrt(r0 * r1);
  const double tc = 0.5 * (t0 + t1);
  const Wavevector k3 = rc * vec2(std::cos(tc), std::sin(tc));
  const double diam = std::max(r1 - r0, rc * (t1 - t0));
  const double dist = norm(k3 - k);
  if (depth < 4 && dist < 2.0 * diam) {
    add_cell(cells, k, cfg, r0, rc, t0, tc, depth + 1);
    add_cell(cells, k, cfg, r0, rc, tc, t1, depth + 1);
    add_cell(cells, k, cfg, rc, r1, t0, tc, depth + 1);
    add_cell(cells, k, cfg, rc, r1, tc, t1, depth + 1);
    return;
  }
  if (dist <= cfg.exclusion_radius) return;
  // midpoint rule in (log r, theta): the cell weight is rc^2 du dtheta
  cells.push_back({k3, rc * rc * std::log(r1 / r0) * (t1 - t0)});
}

std::string describe(const Wavevector& k, const Wavevector& k1, const Wavevector& k2,
                     const Wavevector& k3) {
  std::ostringstream os;
  os.precision(17);
  os << "k=(" << k[0] << "," << k[1] << ") k1=(" << k1[0] << "," << k1[1] << ") k2=(" << k2[0]
     << "," << k2[1] << ") k3=(" << k3[0] << "," << k3[1] << ")";
  return os.str();
}

}  // namespace

double reduce_integral(const Integrand& F, const Wavevector& k, const ConePartition& part,
                       const QuadConfig& cfg) {
  cfg.validate();
  std::vector<K3Cell> cells;
  const double ratio = cfg.k3_r_max / cfg.k3_r_min;
  for (int e = 0; e < cfg.n_k3_radial; ++e) {
    const double r0 = cfg.k3_r_min * std::pow(ratio, double(e) / cfg.n_k3_radial);
    const double r1 = cfg.k3_r_min * std::pow(ratio, double(e + 1) / cfg.n_k3_radial);
    for (int q = 0; q < cfg.n_k3_angular; ++q) {
      const double t0 = 2.0 * std::numbers::pi * q / cfg.n_k3_angular;
      const double t1 = 2.0 * std::numbers::pi * (q + 1) / cfg.n_k3_angular;
      add_cell(cells, k, cfg, r0, r1, t0, t1, 0);
    }
  }

  std::vector<double> cell_value(cells.size(), 0.0);
  parallel_for(cells.size(), [&](std::size_t c) {
    const Wavevector& k3 = cells[c].k3;
    double R = std::min(cfg.transverse_halfwidth, resonant_curve_extent(k, k3) * (1.0 + 1e-9));
    std::vector<double> ts, dts;
    transverse_rule(R, cfg.n_transverse, cfg.line_scale, ts, dts);
    const auto nodes = scan_nodes(R, cfg.n_scan, cfg.line_scale);
    CompensatedSum sum;
    for (int j = 0; j < part.size(); ++j) {
      for (int l = 0; l < cfg.n_transverse; ++l) {
        const RootSet rs = resonance_roots_on(k, k3, part, j, ts[l], nodes, cfg);
        for (std::size_t r = 0; r < rs.size(); ++r) {
          if (cfg.skip_trivial_branch && rs.is_trivial[r]) continue;
          const Wavevector k2 = ts[l] * part.normal(j) + rs.roots[r] * part.axis(j);
          const Wavevector k1 = k2 + k3 - k;
          const double v = F(k, k1, k2, k3);
          if (!std::isfinite(v)) throw IntegrandError("non-finite integrand at " + describe(k, k1, k2, k3));
          if (v != 0.0) sum.add(v * dts[l] / rs.jacobians[r]);
        }
      }
    }
    cell_value[c] = cells[c].area * sum.value();
  });
  return compensated_sum(cell_value);
}

double reduce_integral_k2_outer(const Integrand& F, const Wavevector& k, const ConePartition& part,
                                const QuadConfig& cfg) {
  Integrand G = [&F](const Wavevector& a, const Wavevector& b, const Wavevector& c,
                     const Wavevector& d) { return F(a, b, d, c); };
  return reduce_integral(G, k, part, cfg);
}

double mollified_oracle(const Integrand& F, const Wavevector& k, double sigma,
                        const QuadConfig& cfg, const OracleDomain* domain) {
  if (!(sigma > 0)) throw ConfigError("mollified_oracle: sigma must be > 0");
  OracleDomain dom;
  if (domain) {
    dom = *domain;
  } else {
    dom.k2_center = vec2(0, 0);
    dom.k2_half = cfg.transverse_halfwidth;
    dom.k3_center = vec2(0, 0);
    dom.k3_half = cfg.k3_r_max;
    dom.n = cfg.n_scan;
  }
  const int n = dom.n;
  const double h2 = 2.0 * dom.k2_half / n;
  const double h3 = 2.0 * dom.k3_half / n;
  const double norm_c = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  const double cut = 40.0 * sigma;
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t a) {
    CompensatedSum row;
    for (int b = 0; b < n; ++b) {
      const Wavevector k3 = dom.k3_center + vec2(-dom.k3_half + (a + 0.5) * h3,
                                                 -dom.k3_half + (b + 0.5) * h3);
      if (norm(k3 - k) <= cfg.exclusion_radius) continue;
      CompensatedSum inner;
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          const Wavevector k2 = dom.k2_center + vec2(-dom.k2_half + (c + 0.5) * h2,
                                                     -dom.k2_half + (d + 0.5) * h2);
          const double om = delta_omega(k, k2, k3);
          if (std::abs(om) > cut) continue;
          const double v = F(k, k2 + k3 - k, k2, k3);
          if (v != 0.0) inner.add(v * std::exp(-0.5 * om * om / (sigma * sigma)));
        }
      }
      row.add(inner.value());
    }
    rows[a] = row.value();
  });
  return compensated_sum(rows) * norm_c * h2 * h2 * h3 * h3;
}

double mollified_oracle_extrapolated(const Integrand& F, const Wavevector& k, double sigma,
                                     const QuadConfig& cfg, const OracleDomain* domain) {
  const double coarse = mollified_oracle(F, k, sigma, cfg, domain);
  const double fine = mollified_oracle(F, k, 0.5 * sigma, cfg, domain);
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> radial_solve(const Wavevector& k, const Wavevector& k1, double theta2,
                                 double r_max, int n_scan) {
  if (!(norm(k) > 0)) throw DomainError("radial_solve: zero k");
  if (r_max <= 0) r_max = 2.0 * (norm(k) + norm(k1)) + 1.0;
  const Wavevector e = vec2(std::cos(theta2), std::sin(theta2));
  const double w0 = dispersion(k) + dispersion(k1);
  const Wavevector p = k + k1;
  auto f = [&](double r) { return w0 - dispersion(r * e) - dispersion(p - r * e); };
  std::vector<double> rs(n_scan + 1);
  rs[0] = r_max * 1e-12;
  for (int i = 1; i <= n_scan; ++i) rs[i] = r_max * i / n_scan;
  std::vector<double> fv(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) fv[i] = f(rs[i]);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    if (fv[i] == 0.0) {
      out.push_back(rs[i]);
      continue;
    }
    if ((fv[i] < 0) == (fv[i + 1] < 0) || fv[i + 1] == 0.0) {
      if (fv[i + 1] == 0.0 && i + 2 == rs.size()) out.push_back(rs[i + 1]);
      continue;
    }
    double lo = rs[i], hi = rs[i + 1], flo = fv[i];
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    const double r = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
    if (std::abs(f(r)) <= 1e-10) out.push_back(r);
  }
  return out;
}

}  // namespace gwk

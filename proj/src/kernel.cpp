#include "gwk/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "gwk/parallel.hpp"
#include "gwk/resonance.hpp"

namespace gwk {

namespace {

constexpr double kPi2x16 = 16.0 * std::numbers::pi * std::numbers::pi;

struct Tols {
  double num;
  double den;
};

Tols tolerances(double n1, double n2, double n3, double n4) {
  double scale = std::max({n1, n2, n3, n4});
  return {detail::kSingularRel * std::pow(scale, 5), detail::kSingularRel * scale};
}

}  // namespace

ResonantQuadruple ResonantQuadruple::from(const Wavevector& k, const Wavevector& k2,
                                          const Wavevector& k3) {
  ResonantQuadruple q;
  q.k = k;
  q.k2 = k2;
  q.k3 = k3;
  q.k1 = k2 + k3 - k;
  q.omega_defect = dispersion(k) + dispersion(q.k1) - dispersion(k2) - dispersion(k3);
  return q;
}

std::array<double, 3> pieces_k1k(const Wavevector& k1, const Wavevector& k, const Wavevector& k2,
                                 const Wavevector& k3) {
  const double n1 = norm(k1), n = norm(k), n2 = norm(k2), n3 = norm(k3);
  if (!(n1 > 0 && n > 0 && n2 > 0 && n3 > 0)) throw DomainError("pieces_k1k: zero wavevector");
  const double w1 = std::sqrt(n1), w = std::sqrt(n), w2 = std::sqrt(n2), w3 = std::sqrt(n3);
  const Tols tol = tolerances(n1, n, n2, n3);
  const double pre = -1.0 / (kPi2x16 * std::sqrt(std::sqrt(n1 * n * n2 * n3)));

  const double fm1k = f_minus(k1, k), fm23 = f_minus(k2, k3);
  const double fp13 = f_plus(k1, k3), fpk2 = f_plus(k, k2);
  const double fp12 = f_plus(k1, k2), fpk3 = f_plus(k, k3);
  const double A = w2 * w3 * fm1k + w1 * w * fm23;
  const double B = w * w2 * fp13 + w1 * w3 * fpk2;
  const double C = w * w3 * fp12 + w1 * w2 * fpk3;
  const double P1 = fm1k * fm23;
  const double P2 = fp12 * fpk3;
  const double P3 = fp13 * fpk2;
  const double c1 = n1 - dot(k1, k) / n;
  const double c3 = n1 + dot(k1, k3) / n3;
  const double D1 = -2.0 * w1 * w;
  const double D3 = 2.0 * w1 * w3;

  const double s1 = (w1 + w) * (w1 + w);
  const double s2 = (w1 - w2) * (w1 - w2);
  const double s3 = (w1 - w3) * (w1 - w3);
  const double E1 = detail::rational_term(4 * s1 * P1, norm(k1 + k) - s1, tol.num, tol.den, 1);
  const double E2 = detail::rational_term(4 * s2 * P2, norm(k1 - k2) - s2, tol.num, tol.den, 2);
  const double E3 = detail::rational_term(4 * s3 * P3, norm(k1 - k3) - s3, tol.num, tol.den, 3);

  const double lead1 = 4 * w * w * P1 / D1, lead3 = 4 * w3 * w3 * P3 / D3;
  const double sub1 = 8 * w1 * w * P1 / D1, sub3 = -8 * w1 * w3 * P3 / D3;
  const double corr1 = 4 * w * w * P1 * c1 / (D1 * D1);
  const double corr3 = 4 * w3 * w3 * P3 * c3 / (D3 * D3);

  std::array<double, 3> out{};
  out[0] = pre * compensated_sum({-2 * w * w * A, -2 * w3 * w3 * B, lead1, lead3});
  out[1] = pre * compensated_sum({-12 * n1 * n * n2 * n3, -4 * w1 * w * A, 4 * w1 * w3 * B,
                                  f_plus(k1, k) * f_plus(k2, k3), f_minus(k1, k3) * f_minus(k, k2),
                                  sub1, corr1, sub3, corr3});
  out[2] = pre * compensated_sum({-2 * w1 * w1 * A, -2 * s2 * C, -2 * w1 * w1 * B,
                                  f_minus(k1, k2) * f_minus(k, k3), E1 - lead1 - sub1 - corr1, E2,
                                  E3 - lead3 - sub3 - corr3});
  return out;
}

std::array<double, 3> pieces_kk1(const Wavevector& k, const Wavevector& k1, const Wavevector& k2,
                                 const Wavevector& k3) {
  const double n1 = norm(k1), n = norm(k), n2 = norm(k2), n3 = norm(k3);
  if (!(n1 > 0 && n > 0 && n2 > 0 && n3 > 0)) throw DomainError("pieces_kk1: zero wavevector");
  const double w1 = std::sqrt(n1), w = std::sqrt(n), w2 = std::sqrt(n2), w3 = std::sqrt(n3);
  const Tols tol = tolerances(n1, n, n2, n3);
  const double pre = -1.0 / (kPi2x16 * std::sqrt(std::sqrt(n1 * n * n2 * n3)));

  const double fmk1 = f_minus(k, k1), fm23 = f_minus(k2, k3);
  const double fpk2 = f_plus(k, k2), fp13 = f_plus(k1, k3);
  const double fpk3 = f_plus(k, k3), fp12 = f_plus(k1, k2);
  const double A = w2 * w3 * fmk1 + w * w1 * fm23;
  const double B = w1 * w3 * fpk2 + w * w2 * fp13;
  const double C = w1 * w2 * fpk3 + w * w3 * fp12;
  const double P1 = fmk1 * fm23;
  const double P2 = fpk2 * fp13;
  const double P3 = fpk3 * fp12;
  const double c1 = n1 - dot(k1, k) / n;
  const double c2 = n2 + dot(k2, k) / n;
  const double D1 = -2.0 * w1 * w;
  const double D2 = 2.0 * w * w2;

  const double s1 = (w + w1) * (w + w1);
  const double s2 = (w - w2) * (w - w2);
  const double s3 = (w - w3) * (w - w3);
  const double E1 = detail::rational_term(4 * s1 * P1, norm(k + k1) - s1, tol.num, tol.den, 1);
  const double E2 = detail::rational_term(4 * s2 * P2, norm(k - k2) - s2, tol.num, tol.den, 2);
  const double E3 = detail::rational_term(4 * s3 * P3, norm(k - k3) - s3, tol.num, tol.den, 3);

  const double lead1 = 4 * w * w * P1 / D1, lead2 = 4 * w * w * P2 / D2;
  const double sub1 = 8 * w1 * w * P1 / D1, sub2 = -8 * w * w2 * P2 / D2;
  const double corr1 = 4 * w * w * P1 * c1 / (D1 * D1);
  const double corr2 = 4 * w * w * P2 * c2 / (D2 * D2);

  std::array<double, 3> out{};
  out[0] = pre * compensated_sum({-2 * w * w * A, -2 * w * w * B, lead1, lead2});
  out[1] = pre * compensated_sum({-12 * n1 * n * n2 * n3, -4 * w1 * w * A, 4 * w * w2 * B,
                                  f_plus(k, k1) * f_plus(k2, k3), f_minus(k, k2) * f_minus(k1, k3),
                                  sub1, corr1, sub2, corr2});
  out[2] = pre * compensated_sum({-2 * w1 * w1 * A, -2 * w2 * w2 * B, -2 * s3 * C,
                                  f_minus(k1, k2) * f_minus(k, k3), E1 - lead1 - sub1 - corr1, E3,
                                  E2 - lead2 - sub2 - corr2});
  return out;
}

double principal_part(const ResonantQuadruple& q) {
  const AngularPair ab = angular_pair(q.k1, q.k2, q.k);
  const double d = ab.alpha - ab.beta;
  const double nk = norm(q.k);
  const double w12 = dispersion(q.k1) * dispersion(q.k2);
  return d * d * nk * std::sqrt(nk) * w12 * std::sqrt(w12) / kPi2x16;
}

bool in_localized_regime(const ResonantQuadruple& q) {
  const double n3 = norm(q.k3);
  if (!(n3 > 0)) return false;
  return cutoff_phi(norm(q.k1) / n3) > 0.0 && cutoff_phi(norm(q.k2) / n3) > 0.0;
}

KernelBreakdown decompose(const ResonantQuadruple& q) {
  if (!in_localized_regime(q))
    throw PreconditionError("decompose: quadruple outside the cutoff-localized regime");
  KernelBreakdown b;
  b.t_pre = {amplitude_pre(q.k1, q.k, q.k2, q.k3), amplitude_pre(q.k, q.k1, q.k2, q.k3),
             amplitude_pre(q.k2, q.k3, q.k1, q.k), amplitude_pre(q.k3, q.k2, q.k1, q.k)};
  b.t_sym = 0.25 * compensated_sum({b.t_pre[0], b.t_pre[1], b.t_pre[2], b.t_pre[3]});

  const auto a = pieces_k1k(q.k1, q.k, q.k2, q.k3);
  const auto a_rel = pieces_k1k(q.k2, q.k3, q.k1, q.k);
  const auto c = pieces_kk1(q.k, q.k1, q.k2, q.k3);
  const auto c_rel = pieces_kk1(q.k3, q.k2, q.k1, q.k);
  for (int j = 0; j < 3; ++j) {
    b.pieces[0][j] = 0.5 * (a[j] + a_rel[j]);
    b.pieces[1][j] = 0.5 * (c[j] + c_rel[j]);
  }
  const double m = principal_part(q);
  b.principal = {m, -m, m, -m};
  b.residuals = {b.pieces[0][0] - b.principal[0], b.pieces[0][1] - b.principal[1],
                 b.pieces[1][0] - b.principal[2], b.pieces[1][1] - b.principal[3]};
  return b;
}

AsymptoticDenominator asymptotic_denominator(const Wavevector& k1, const Wavevector& k) {
  const double n1 = norm(k1), n = norm(k);
  if (!(n1 > 0 && n > 0)) throw DomainError("asymptotic_denominator: zero wavevector");
  if (n1 > n / 20.0) throw PreconditionError("asymptotic_denominator: needs |k1| <= |k|/20");
  const double w1 = std::sqrt(n1), w = std::sqrt(n);
  const double lead = 1.0 / (-2.0 * w1 * w);
  const double c = n1 - dot(k1, k) / n;
  const double corrected = lead + c * lead * lead;
  const double den = norm(k1 + k) - (w1 + w) * (w1 + w);
  if (std::abs(den) < detail::kSingularRel * n) throw SingularityError("asymptotic_denominator", 1);
  return {lead, corrected, 1.0 / den};
}

ScanReport growth_scan(const ScanConfig& scan) {
  if (scan.k_values.size() < 3) throw ConfigError("growth_scan: need at least 3 sweep points");
  if (scan.k1_magnitude <= 0 || scan.n_k1_angles < 1 || scan.n_theta2 < 1)
    throw ConfigError("growth_scan: invalid sampling family");
  for (double kv : scan.k_values)
    if (!(kv > 0)) throw ConfigError("growth_scan: sweep values must be positive");

  ScanReport rep;
  rep.rows.resize(scan.k_values.size());
  std::vector<double> cq(scan.k_values.size(), 0.0);
  parallel_for(scan.k_values.size(), [&](std::size_t idx) {
    const double K = scan.k_values[idx];
    const Wavevector k = vec2(K, 0.0);
    ScanRow row;
    row.k_mag = K;
    const double eps = scan.k1_magnitude;
    for (int a = 0; a < scan.n_k1_angles; ++a) {
      const double ang = 2.0 * std::numbers::pi * a / scan.n_k1_angles + scan.angle_offset;
      const Wavevector k1 = eps * vec2(std::cos(ang), std::sin(ang));
      for (int l = 0; l < scan.n_theta2; ++l) {
        const double th = 2.0 * std::numbers::pi * l / scan.n_theta2 + 0.5 * scan.angle_offset;
        for (double r : radial_solve(k, k1, th, 4.0 * eps, scan.n_radial_scan)) {
          const Wavevector k2 = r * vec2(std::cos(th), std::sin(th));
          const ResonantQuadruple q = ResonantQuadruple::from(k, k2, k + k1 - k2);
          if (!in_localized_regime(q)) continue;
          const KernelBreakdown b = decompose(q);
          const double ksq = b.t_sym * b.t_sym;
          row.sup_kernel_sq = std::max(row.sup_kernel_sq, ksq);
          row.sup_r1 = std::max({row.sup_r1, std::abs(b.residuals[0]), std::abs(b.residuals[2])});
          row.sup_r2 = std::max({row.sup_r2, std::abs(b.residuals[1]), std::abs(b.residuals[3])});
          row.sup_t3 = std::max({row.sup_t3, std::abs(b.pieces[0][2]), std::abs(b.pieces[1][2])});
          const double s = norm(q.k1) * norm(q.k1) + norm(q.k2) * norm(q.k2);
          cq[idx] = std::max(cq[idx], ksq / (s * s * K * K));
          ++row.n_samples;
        }
      }
    }
    rep.rows[idx] = row;
  });
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const ScanRow& a, const ScanRow& b) { return a.k_mag < b.k_mag; });
  std::vector<double> x, y0, y1, y2, y3;
  for (const auto& r : rep.rows) {
    x.push_back(r.k_mag);
    y0.push_back(r.sup_kernel_sq);
    y1.push_back(r.sup_r1);
    y2.push_back(r.sup_r2);
    y3.push_back(r.sup_t3);
  }
  rep.slope_kernel_sq = fit_loglog(x, y0).slope;
  rep.slope_r1 = fit_loglog(x, y1).slope;
  rep.slope_r2 = fit_loglog(x, y2).slope;
  rep.slope_t3 = fit_loglog(x, y3).slope;
  rep.fitted_cq = *std::max_element(cq.begin(), cq.end());
  return rep;
}

void write_scan_csv(std::ostream& os, const ScanReport& report) {
  os << "k,sup_kernel_sq,sup_R1,sup_R2,sup_T3,n_samples\n";
  os.precision(17);
  for (const auto& r : report.rows)
    os << r.k_mag << ',' << r.sup_kernel_sq << ',' << r.sup_r1 << ',' << r.sup_r2 << ','
       << r.sup_t3 << ',' << r.n_samples << '\n';
}

}  // namespace gwk

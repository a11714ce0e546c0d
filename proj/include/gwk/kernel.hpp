#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gwk/kinematics.hpp"
#include "gwk/numerics.hpp"

namespace gwk {

namespace detail {

// rational term of the amplitude with the removable 0/0 set to zero
inline double rational_term(double num, double den, double num_tol, double den_tol, int which) {
  if (std::abs(den) < den_tol) {
    if (std::abs(num) < num_tol) return 0.0;
    throw SingularityError("amplitude: singular rational term " + std::to_string(which), which);
  }
  return num / den;
}

inline constexpr double kSingularRel = 1e-12;

}  // namespace detail

namespace detail {

template <class R, int D>
struct VecR {
  std::array<R, D> c{};
};

template <class R, int D>
VecR<R, D> widen(const Vec<D>& v) {
  VecR<R, D> w;
  for (int i = 0; i < D; ++i) w.c[i] = v[i];
  return w;
}

template <class R, int D>
R dotr(const VecR<R, D>& a, const VecR<R, D>& b) {
  R s = 0;
  for (int i = 0; i < D; ++i) s += a.c[i] * b.c[i];
  return s;
}

template <class R, int D>
R normr(const VecR<R, D>& a) {
  using std::sqrt;
  return sqrt(dotr(a, a));
}

template <class R, int D>
VecR<R, D> combine(const VecR<R, D>& a, const VecR<R, D>& b, int sb) {
  VecR<R, D> r;
  for (int i = 0; i < D; ++i) r.c[i] = a.c[i] + sb * b.c[i];
  return r;
}

template <class R>
R rational_term_r(const R& num, const R& den, const R& num_tol, const R& den_tol, int which) {
  using std::abs;
  if (abs(den) < den_tol) {
    if (abs(num) < num_tol) return R(0);
    throw SingularityError("amplitude: singular rational term " + std::to_string(which), which);
  }
  return num / den;
}

template <class R>
struct Bracket {
  R value;
  R magnitude;  // sum of |terms|, for the conditioning estimate
  R prefactor;
};

template <class R, int D>
Bracket<R> amplitude_bracket(const Vec<D>& k1d, const Vec<D>& k2d, const Vec<D>& k3d, const Vec<D>& k4d) {
  using std::abs;
  using std::max;
  using std::pow;
  using std::sqrt;
  const auto k1 = widen<R>(k1d), k2 = widen<R>(k2d), k3 = widen<R>(k3d), k4 = widen<R>(k4d);
  const R n1 = normr(k1), n2 = normr(k2), n3 = normr(k3), n4 = normr(k4);
  if (!(n1 > 0 && n2 > 0 && n3 > 0 && n4 > 0)) throw DomainError("amplitude_pre: zero wavevector");
  const R w1 = sqrt(n1), w2 = sqrt(n2), w3 = sqrt(n3), w4 = sqrt(n4);
  const R scale = max(max(n1, n2), max(n3, n4));
  const R den_tol = kSingularRel * scale;
  const R num_tol = kSingularRel * pow(scale, 5);

  auto fm = [](const VecR<R, D>& x, const R& nx, const VecR<R, D>& y, const R& ny) { return R(dotr(x, y) - nx * ny); };
  auto fp = [](const VecR<R, D>& x, const R& nx, const VecR<R, D>& y, const R& ny) { return R(dotr(x, y) + nx * ny); };
  const R fm12 = fm(k1, n1, k2, n2), fm34 = fm(k3, n3, k4, n4);
  const R fp13 = fp(k1, n1, k3, n3), fp24 = fp(k2, n2, k4, n4);
  const R fp14 = fp(k1, n1, k4, n4), fp23 = fp(k2, n2, k3, n3);
  const R fp12 = fp(k1, n1, k2, n2), fp34 = fp(k3, n3, k4, n4);
  const R fm13 = fm(k1, n1, k3, n3), fm24 = fm(k2, n2, k4, n4);
  const R fm14 = fm(k1, n1, k4, n4), fm23 = fm(k2, n2, k3, n3);

  const R s12 = (w1 + w2) * (w1 + w2);
  const R d13 = (w1 - w3) * (w1 - w3);
  const R d14 = (w1 - w4) * (w1 - w4);

  const R terms[10] = {
      R(-12 * n1 * n2 * n3 * n4),
      R(-2 * s12 * (w3 * w4 * fm12 + w1 * w2 * fm34)),
      R(-2 * d13 * (w2 * w4 * fp13 + w1 * w3 * fp24)),
      R(-2 * d14 * (w2 * w3 * fp14 + w1 * w4 * fp23)),
      R(fp12 * fp34),
      R(fm13 * fm24),
      R(fm14 * fm23),
      rational_term_r<R>(4 * s12 * fm12 * fm34, normr(combine(k1, k2, 1)) - s12, num_tol, den_tol, 1),
      rational_term_r<R>(4 * d13 * fp13 * fp24, normr(combine(k1, k3, -1)) - d13, num_tol, den_tol, 2),
      rational_term_r<R>(4 * d14 * fp14 * fp23, normr(combine(k1, k4, -1)) - d14, num_tol, den_tol, 3)};
  Bracket<R> b{R(0), R(0), R(0)};
  for (const R& t : terms) {
    b.value += t;
    b.magnitude += abs(t);
  }
  const R pi = boost::math::constants::pi<R>();
  b.prefactor = 16 * pi * pi * sqrt(sqrt(n1 * n2 * n3 * n4));
  return b;
}

}  // namespace detail

// Pre-symmetrized amplitude T~_{k1 k2}^{k3 k4}. The bracket cancels by orders of magnitude
// near zeros of the amplitude; it is evaluated in long double and, when the cancellation
// would eat more than ~7 of its 19 digits, again in 50-digit arithmetic.
template <int D>
double amplitude_pre(const Vec<D>& k1, const Vec<D>& k2, const Vec<D>& k3, const Vec<D>& k4) {
  const auto b = detail::amplitude_bracket<long double>(k1, k2, k3, k4);
  if (std::abs(b.value) * 1e7L >= b.magnitude) return static_cast<double>(-b.value / b.prefactor);
  using Wide = boost::multiprecision::cpp_bin_float_50;
  const auto w = detail::amplitude_bracket<Wide>(k1, k2, k3, k4);
  return static_cast<double>(Wide(-w.value / w.prefactor));
}

// symmetrized amplitude T_{k1 k}^{k2 k3}
template <int D>
double amplitude_sym(const Vec<D>& k1, const Vec<D>& k, const Vec<D>& k2, const Vec<D>& k3) {
  return 0.25 * compensated_sum({amplitude_pre(k1, k, k2, k3), amplitude_pre(k, k1, k2, k3),
                                 amplitude_pre(k2, k3, k1, k), amplitude_pre(k3, k2, k1, k)});
}

// T_{k,k1,k2,k3} = |T_{k1 k}^{k2 k3}|^2
template <int D>
double kernel_sq(const Vec<D>& k, const Vec<D>& k1, const Vec<D>& k2, const Vec<D>& k3) {
  double t = amplitude_sym(k1, k, k2, k3);
  return t * t;
}

struct ResonantQuadruple {
  Wavevector k, k1, k2, k3;
  double omega_defect = 0.0;

  // k1 is always k2 + k3 - k
  static ResonantQuadruple from(const Wavevector& k, const Wavevector& k2, const Wavevector& k3);
};

struct KernelBreakdown {
  // T~_{k1k}, T~_{kk1}, T~_{k2k3}, T~_{k3k2}
  std::array<double, 4> t_pre{};
  double t_sym = 0.0;
  // pieces[0][j] = T_{k1k,j+1}, pieces[1][j] = T_{kk1,j+1}
  std::array<std::array<double, 3>, 2> pieces{};
  // M_{k1k,1}, M_{k1k,2}, M_{kk1,1}, M_{kk1,2}
  std::array<double, 4> principal{};
  // R_{k1k,1}, R_{k1k,2}, R_{kk1,1}, R_{kk1,2}
  std::array<double, 4> residuals{};

  double half_k1k() const { return 0.5 * (t_pre[0] + t_pre[2]); }
  double half_kk1() const { return 0.5 * (t_pre[1] + t_pre[3]); }
};

// the three scale pieces of T~_{k1 k}^{k2 k3} and of T~_{k k1}^{k2 k3}
std::array<double, 3> pieces_k1k(const Wavevector& k1, const Wavevector& k, const Wavevector& k2,
                                 const Wavevector& k3);
std::array<double, 3> pieces_kk1(const Wavevector& k, const Wavevector& k1, const Wavevector& k2,
                                 const Wavevector& k3);

double principal_part(const ResonantQuadruple& q);

bool in_localized_regime(const ResonantQuadruple& q);

KernelBreakdown decompose(const ResonantQuadruple& q);

struct AsymptoticDenominator {
  double leading;
  double corrected;
  double exact;
};

AsymptoticDenominator asymptotic_denominator(const Wavevector& k1, const Wavevector& k);

struct ScanConfig {
  std::vector<double> k_values{8, 16, 32, 64, 128};
  double k1_magnitude = 0.04;
  int n_k1_angles = 12;
  int n_theta2 = 36;
  int n_radial_scan = 2000;
  // k1 sweep offset so no sample is exactly collinear with k
  double angle_offset = 0.1;
};

struct ScanRow {
  double k_mag = 0.0;
  double sup_kernel_sq = 0.0;
  double sup_r1 = 0.0;
  double sup_r2 = 0.0;
  double sup_t3 = 0.0;
  int n_samples = 0;
};

struct ScanReport {
  std::vector<ScanRow> rows;
  double slope_kernel_sq = 0.0;
  double slope_r1 = 0.0;
  double slope_r2 = 0.0;
  double slope_t3 = 0.0;
  double fitted_cq = 0.0;  // max of sup_kernel_sq / ((|k1|^2+|k2|^2)^2 |k|^2)
};

ScanReport growth_scan(const ScanConfig& scan);

void write_scan_csv(std::ostream& os, const ScanReport& report);

}  // namespace gwk

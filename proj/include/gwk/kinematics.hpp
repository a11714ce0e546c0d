#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "gwk/errors.hpp"

namespace gwk {

template <int D>
struct Vec {
  static_assert(D >= 2);
  std::array<double, D> c{};

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < D; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < D; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < D; ++i) c[i] *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }
  friend bool operator==(const Vec&, const Vec&) = default;
};

using Wavevector = Vec<2>;

inline Wavevector vec2(double x, double y) { return Wavevector{{x, y}}; }

template <int D>
double dot(const Vec<D>& a, const Vec<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i) s += a[i] * b[i];
  return s;
}

// plain sqrt: libm hypot is several times slower and wavevectors never approach overflow
template <int D>
double norm(const Vec<D>& a) {
  return std::sqrt(dot(a, a));
}

inline double clamp_cos(double x) { return std::clamp(x, -1.0, 1.0); }

// omega(k) = sqrt|k|, g = 1
template <int D>
double dispersion(const Vec<D>& k) {
  return std::sqrt(norm(k));
}

template <int D>
Vec<D> group_velocity(const Vec<D>& k) {
  double r = norm(k);
  if (!(r > 0.0)) throw DomainError("group_velocity: zero wavevector");
  return k * (1.0 / (2.0 * r * std::sqrt(r)));
}

enum class Sign { Plus, Minus };

template <int D>
double f_pm(const Vec<D>& x, const Vec<D>& y, Sign s) {
  double p = norm(x) * norm(y);
  return s == Sign::Plus ? dot(x, y) + p : dot(x, y) - p;
}

template <int D>
double f_plus(const Vec<D>& x, const Vec<D>& y) {
  return dot(x, y) + norm(x) * norm(y);
}

template <int D>
double f_minus(const Vec<D>& x, const Vec<D>& y) {
  return dot(x, y) - norm(x) * norm(y);
}

struct AngularPair {
  double alpha;
  double beta;
};

// alpha = k1^.k^, beta = k2^.k^
template <int D>
AngularPair angular_pair(const Vec<D>& k1, const Vec<D>& k2, const Vec<D>& k) {
  double n1 = norm(k1), n2 = norm(k2), n = norm(k);
  if (!(n1 > 0.0 && n2 > 0.0 && n > 0.0))
    throw DomainError("angular_pair: zero wavevector");
  return {clamp_cos(dot(k1, k) / (n1 * n)), clamp_cos(dot(k2, k) / (n2 * n))};
}

inline constexpr double kCutoffLow = 1.0 / 40.0;
inline constexpr double kCutoffHigh = 1.0 / 20.0;

// 1 below 1/40, 0 above 1/20, quintic smoothstep in between
inline double cutoff_phi(double lambda) {
  if (lambda < 0.0 || std::isnan(lambda)) throw DomainError("cutoff_phi: negative argument");
  if (lambda <= kCutoffLow) return 1.0;
  if (lambda >= kCutoffHigh) return 0.0;
  double t = (lambda - kCutoffLow) / (kCutoffHigh - kCutoffLow);
  double s = t * t * t * (t * (6.0 * t - 15.0) + 10.0);
  return 1.0 - s;
}

// lower bound for |v(a) - v(b)|
template <int D>
double group_velocity_gap_bound(const Vec<D>& a, const Vec<D>& b) {
  double na = norm(a), nb = norm(b);
  return norm(a - b) / (2.0 * std::sqrt(na * nb) * (std::sqrt(na) + std::sqrt(nb)));
}

}  // namespace gwk

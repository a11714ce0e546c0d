#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "gwk/kinematics.hpp"

namespace gwk {

struct GridConfig {
  double r_min = 0.05;
  double r_max = 16.0;
  int n_r = 32;
  int n_theta = 24;

  void validate() const;
  // nested refinement: every old node stays a node
  GridConfig refined() const { return {r_min, r_max, 2 * n_r - 1, 2 * n_theta}; }
};

// bilinear weights in (log r, theta); m wraps periodically
struct Stencil {
  int i0 = 0;
  int m0 = 0;
  double a = 0.0;  // radial fraction
  double b = 0.0;  // angular fraction
  bool inside = false;
};

class Grid {
 public:
  Grid() = default;
  explicit Grid(const GridConfig& cfg);

  const GridConfig& config() const { return cfg_; }
  int n_r() const { return cfg_.n_r; }
  int n_theta() const { return cfg_.n_theta; }
  std::size_t size() const { return static_cast<std::size_t>(cfg_.n_r) * cfg_.n_theta; }
  std::size_t index(int i, int m) const { return static_cast<std::size_t>(i) * cfg_.n_theta + m; }

  double radius(int i) const { return radii_[i]; }
  double theta(int m) const { return dtheta_ * m; }
  double du() const { return du_; }
  double dtheta() const { return dtheta_; }
  Wavevector node(int i, int m) const;
  // polar quadrature weight r^2 du dtheta, halved on the two boundary rings
  double area(int i) const { return areas_[i]; }

  Stencil stencil(const Wavevector& k) const;

  bool operator==(const Grid& o) const {
    return cfg_.r_min == o.cfg_.r_min && cfg_.r_max == o.cfg_.r_max && cfg_.n_r == o.cfg_.n_r &&
           cfg_.n_theta == o.cfg_.n_theta;
  }

 private:
  GridConfig cfg_{};
  double du_ = 0.0;
  double dtheta_ = 0.0;
  std::vector<double> radii_;
  std::vector<double> areas_;
};

// values on a grid; spectra are non-negative, operator outputs are signed
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

  double& at(int i, int m) { return values[grid.index(i, m)]; }
  double at(int i, int m) const { return values[grid.index(i, m)]; }
  double max_abs() const;
  double min_value() const;
  bool is_nonnegative() const { return min_value() >= 0.0; }
};

using SpectrumGrid = Field;
using OperatorField = Field;

inline double japanese(double r) { return std::sqrt(r * r + 1.0); }
// <k>^s
inline double weight_pow(double r, double s) { return std::pow(r * r + 1.0, 0.5 * s); }

inline double lerp_stencil(const std::vector<double>& v, int n_theta, int i0, int m0, int m1,
                           double a, double b) {
  const std::size_t r0 = static_cast<std::size_t>(i0) * n_theta;
  const std::size_t r1 = r0 + n_theta;
  const double x0 = v[r0 + m0] + b * (v[r0 + m1] - v[r0 + m0]);
  const double x1 = v[r1 + m0] + b * (v[r1 + m1] - v[r1 + m0]);
  return x0 + a * (x1 - x0);
}

// 4-point Lagrange weights at position p in [0, 3] relative to nodes 0..3
inline void lagrange4(double p, double w[4]) {
  const double d0 = p, d1 = p - 1.0, d2 = p - 2.0, d3 = p - 3.0;
  w[0] = -d1 * d2 * d3 / 6.0;
  w[1] = d0 * d2 * d3 / 2.0;
  w[2] = -d0 * d1 * d3 / 2.0;
  w[3] = d0 * d1 * d2 / 6.0;
}

// tensor cubic in (log r, theta), written as a correction to the base node so constants are
// reproduced bit-exactly; one-sided stencils at the radial ends
inline double cubic_stencil(const std::vector<double>& v, int n_r, int n_theta, int i0, int m0,
                            double a, double b) {
  const int ib = std::clamp(i0 - 1, 0, n_r - 4);
  double wr[4], wt[4];
  lagrange4(i0 + a - ib, wr);
  lagrange4(b + 1.0, wt);
  const double v0 = v[static_cast<std::size_t>(i0) * n_theta + m0];
  double sum = 0.0;
  for (int q = 0; q < 4; ++q) {
    int m = m0 - 1 + q;
    m = m < 0 ? m + n_theta : (m >= n_theta ? m - n_theta : m);
    double col = 0.0;
    for (int p = 0; p < 4; ++p) col += wr[p] * (v[static_cast<std::size_t>(ib + p) * n_theta + m] - v0);
    sum += wt[q] * col;
  }
  return v0 + sum;
}

double interpolate_signed(const Field& f, const Wavevector& k);
// clamps tiny negative interpolants to 0
double interpolate(const Field& f, const Wavevector& k);

Grid build_grid(const GridConfig& cfg);

// C-infinity radial plateau: 1 on [lo, hi], tapering to 0 on [lo/2, lo] and [hi, 2 hi]
double radial_bump(double r, double lo, double hi);

struct InitialFamily {
  std::string name = "gaussian_bump";  // gaussian_bump | rayleigh_jeans | constant_bump | zero
  double amplitude = 1.0;
  Wavevector center = vec2(2.0, 0.0);
  double sigma = 0.5;
  double c = 1.0;
  double bump_lo = -1.0;  // <= 0: grid r_min
  double bump_hi = -1.0;  // <= 0: grid r_max
};

Field sample_initial(const InitialFamily& family, const Grid& grid);

double weighted_norm(const Field& f, int p, double s);  // p = 0 means infinity
inline constexpr int kInf = 0;

struct Moments {
  double action = 0.0;
  double energy = 0.0;
  Wavevector momentum{};
};

Moments moments(const Field& f);

// weights from the admissible class, d = 2
inline constexpr double kWeightL2 = 32.0;    // 22 + 5d
inline constexpr double kWeightLinf = 20.0;  // 12 + 4d
inline constexpr double kWeightCoef = 14.0;  // 10 + 2d
inline constexpr double kWeightContraction = 6.0;  // 2d + 2

struct AdmissibilityReport {
  double norm_2_w = 0.0;
  double norm_inf_w = 0.0;
  bool is_admissible = false;
};

AdmissibilityReport admissibility(const Field& f);

void write_csv(std::ostream& os, const Field& f, const std::string& comment = {});
Field read_csv(std::istream& is, const GridConfig& cfg);
void write_binary(std::ostream& os, const Field& f);
Field read_binary(std::istream& is);

}  // namespace gwk

#pragma once

#include <functional>
#include <vector>

#include "gwk/kinematics.hpp"

namespace gwk {

// omega + omega(k2+k3-k) - omega2 - omega3
double delta_omega(const Wavevector& k, const Wavevector& k2, const Wavevector& k3);

// gradient in k2, equal to v(k1) - v(k2)
Wavevector grad_delta_omega(const Wavevector& k, const Wavevector& k2, const Wavevector& k3);

// |k3-k| / (2 w1 w2 (w1+w2)) at k1 = k2+k3-k
double grad_lower_bound(const Wavevector& k, const Wavevector& k2, const Wavevector& k3);

class ConePartition {
 public:
  explicit ConePartition(int n_cones = 8);

  int size() const { return n_; }
  const Wavevector& axis(int j) const { return axes_[j]; }
  // e_j rotated by +90 degrees
  const Wavevector& normal(int j) const { return normals_[j]; }
  double half_angle() const;
  // sector j covers angles [phi_j - h, phi_j + h)
  int sector_of(const Wavevector& v) const;

 private:
  int n_;
  std::vector<Wavevector> axes_;
  std::vector<Wavevector> normals_;
};

struct QuadConfig {
  int n_k3_radial = 32;
  int n_k3_angular = 24;
  double k3_r_min = 0.05;
  double k3_r_max = 16.0;
  int n_transverse = 64;
  double transverse_halfwidth = 16.0;
  int n_scan = 128;
  double exclusion_radius = 1e-3;
  double resonance_tol = 1e-10;
  double bisection_tol = 1e-14;
  bool skip_trivial_branch = false;
  int n_cones = 8;
  // > 0: lines and scan nodes are placed by t = l sinh(u) with this l
  double line_scale = 0.0;

  void validate() const;
};

struct RootSet {
  std::vector<double> roots;
  std::vector<double> jacobians;  // |e_j . grad Omega| at each root
  std::vector<bool> is_trivial;
  std::size_t size() const { return roots.size(); }
};

// scan positions along one line, uniform or sinh-stretched over [-R, R]
std::vector<double> scan_nodes(double R, int n, double line_scale);

// transverse offsets and widths (midpoint rule in the mapped variable)
void transverse_rule(double R, int n, double line_scale, std::vector<double>& t,
                     std::vector<double>& dt);

// roots on k2(s) = s e_j + t e_j^perp whose gradient lies in sector j
RootSet resonance_roots(const Wavevector& k, const Wavevector& k3, const ConePartition& part, int j,
                        double t, const QuadConfig& cfg);

// same, with an explicit s-range and node list
RootSet resonance_roots_on(const Wavevector& k, const Wavevector& k3, const ConePartition& part,
                           int j, double t, const std::vector<double>& s_nodes,
                           const QuadConfig& cfg, bool filter_sector = true);

// bound on |k1|, |k2| along the resonant curve of (k, k3); infinite when |k| = |k3|
double resonant_curve_extent(const Wavevector& k, const Wavevector& k3);

using Integrand = std::function<double(const Wavevector& k, const Wavevector& k1,
                                       const Wavevector& k2, const Wavevector& k3)>;

double reduce_integral(const Integrand& F, const Wavevector& k, const ConePartition& part,
                       const QuadConfig& cfg);

// k2-outer form: the integrand relabelled k2 <-> k3, which leaves the measure invariant
double reduce_integral_k2_outer(const Integrand& F, const Wavevector& k, const ConePartition& part,
                                const QuadConfig& cfg);

struct OracleDomain {
  Wavevector k2_center{};
  double k2_half = 1.0;
  Wavevector k3_center{};
  double k3_half = 1.0;
  int n = 64;
};

// Gaussian-mollified delta on a dense k2 x k3 tensor grid
double mollified_oracle(const Integrand& F, const Wavevector& k, double sigma,
                        const QuadConfig& cfg, const OracleDomain* domain = nullptr);

// Richardson extrapolation in sigma^2 from sigma and sigma/2
double mollified_oracle_extrapolated(const Integrand& F, const Wavevector& k, double sigma,
                                     const QuadConfig& cfg, const OracleDomain* domain = nullptr);

// radii r with k2 = r(cos t2, sin t2), k3 = k + k1 - k2 resonant
std::vector<double> radial_solve(const Wavevector& k, const Wavevector& k1, double theta2,
                                 double r_max = -1.0, int n_scan = 4000);

}  // namespace gwk

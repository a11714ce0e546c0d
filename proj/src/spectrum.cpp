#include "gwk/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gwk/errors.hpp"
#include "gwk/numerics.hpp"

namespace gwk {

namespace {
constexpr double kSnap = 1e-9;

double snap(double x) {
  const double r = std::round(x);
  return std::abs(x - r) <= kSnap ? r : x;
}

// C-infinity step, 0 for x <= 0, 1 for x >= 1
double smooth_step(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}
}  // namespace

void GridConfig::validate() const {
  if (!(r_min > 0) || !(r_max > r_min) || !std::isfinite(r_max))
    throw ConfigError("grid: need 0 < r_min < r_max < inf");
  if (n_r < 2) throw ConfigError("grid: n_r must be >= 2");
  if (n_theta < 4 || n_theta % 2 != 0) throw ConfigError("grid: n_theta must be even and >= 4");
  if (n_r > 32767 || n_theta > 32767) throw ConfigError("grid: dimensions too large");
}

Grid::Grid(const GridConfig& cfg) : cfg_(cfg) {
  cfg.validate();
  du_ = std::log(cfg.r_max / cfg.r_min) / (cfg.n_r - 1);
  dtheta_ = 2.0 * std::numbers::pi / cfg.n_theta;
  radii_.resize(cfg.n_r);
  areas_.resize(cfg.n_r);
  for (int i = 0; i < cfg.n_r; ++i) {
    radii_[i] = i == cfg.n_r - 1 ? cfg.r_max : cfg.r_min * std::exp(i * du_);
    areas_[i] = radii_[i] * radii_[i] * du_ * dtheta_;
  }
  areas_.front() *= 0.5;
  areas_.back() *= 0.5;
}

Wavevector Grid::node(int i, int m) const {
  const double t = theta(m);
  return radii_[i] * vec2(std::cos(t), std::sin(t));
}

Stencil Grid::stencil(const Wavevector& k) const {
  Stencil s;
  const double r = norm(k);
  if (!(r > 0)) return s;
  const double u = snap(std::log(r / cfg_.r_min) / du_);
  if (u < 0 || u > cfg_.n_r - 1) return s;
  int i0 = static_cast<int>(std::floor(u));
  if (i0 > cfg_.n_r - 2) i0 = cfg_.n_r - 2;
  double th = std::atan2(k[1], k[0]);
  if (th < 0) th += 2.0 * std::numbers::pi;
  const double v = snap(th / dtheta_);
  const double fv = std::floor(v);
  int m0 = static_cast<int>(fv) % cfg_.n_theta;
  if (m0 < 0) m0 += cfg_.n_theta;
  s.i0 = i0;
  s.m0 = m0;
  s.a = u - i0;
  s.b = v - fv;
  s.inside = true;
  return s;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Field::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values) m = std::min(m, v);
  return values.empty() ? 0.0 : m;
}

double interpolate_signed(const Field& f, const Wavevector& k) {
  const Stencil s = f.grid.stencil(k);
  if (!s.inside) return 0.0;
  const int nt = f.grid.n_theta();
  return lerp_stencil(f.values, nt, s.i0, s.m0, (s.m0 + 1) % nt, s.a, s.b);
}

double interpolate(const Field& f, const Wavevector& k) {
  return std::max(0.0, interpolate_signed(f, k));
}

Grid build_grid(const GridConfig& cfg) { return Grid(cfg); }

double radial_bump(double r, double lo, double hi) {
  if (r < lo) return smooth_step((r - 0.5 * lo) / (0.5 * lo));
  if (r > hi) return 1.0 - smooth_step((r - hi) / hi);
  return 1.0;
}

Field sample_initial(const InitialFamily& fam, const Grid& grid) {
  Field f(grid);
  const double lo = fam.bump_lo > 0 ? fam.bump_lo : grid.config().r_min;
  const double hi = fam.bump_hi > 0 ? fam.bump_hi : grid.config().r_max;
  if (!(hi > lo)) throw ConfigError("initial: bump_hi must exceed bump_lo");
  if (fam.name == "zero") return f;
  if (fam.name == "gaussian_bump") {
    if (!(fam.amplitude >= 0) || !std::isfinite(fam.amplitude))
      throw ConfigError("initial: amplitude must be finite and >= 0");
    if (!(fam.sigma > 0)) throw ConfigError("initial: sigma must be > 0");
    for (int i = 0; i < grid.n_r(); ++i)
      for (int m = 0; m < grid.n_theta(); ++m) {
        const Wavevector d = grid.node(i, m) - fam.center;
        f.at(i, m) = fam.amplitude * std::exp(-dot(d, d) / (2.0 * fam.sigma * fam.sigma));
      }
    return f;
  }
  const bool rj = fam.name == "rayleigh_jeans";
  if (!rj && fam.name != "constant_bump") throw ConfigError("initial: unknown family '" + fam.name + "'");
  if (!(fam.c >= 0) || !std::isfinite(fam.c)) throw ConfigError("initial: c must be finite and >= 0");
  for (int i = 0; i < grid.n_r(); ++i) {
    const double r = grid.radius(i);
    const double v = fam.c * radial_bump(r, lo, hi) / (rj ? std::sqrt(r) : 1.0);
    for (int m = 0; m < grid.n_theta(); ++m) f.at(i, m) = v;
  }
  return f;
}

double weighted_norm(const Field& f, int p, double s) {
  const Grid& g = f.grid;
  if (p == kInf) {
    double m = 0.0;
    for (int i = 0; i < g.n_r(); ++i) {
      const double w = weight_pow(g.radius(i), s);
      for (int j = 0; j < g.n_theta(); ++j) m = std::max(m, w * std::abs(f.at(i, j)));
    }
    return m;
  }
  if (p != 1 && p != 2) throw ConfigError("weighted_norm: p must be 1, 2 or infinity");
  CompensatedSum sum;
  for (int i = 0; i < g.n_r(); ++i) {
    const double w = weight_pow(g.radius(i), s);
    CompensatedSum ring;
    for (int j = 0; j < g.n_theta(); ++j) {
      const double v = w * std::abs(f.at(i, j));
      ring.add(p == 1 ? v : v * v);
    }
    sum.add(g.area(i) * ring.value());
  }
  return p == 1 ? sum.value() : std::sqrt(sum.value());
}

Moments moments(const Field& f) {
  const Grid& g = f.grid;
  CompensatedSum n, e, px, py;
  for (int i = 0; i < g.n_r(); ++i) {
    const double A = g.area(i);
    const double w = std::sqrt(g.radius(i));
    for (int m = 0; m < g.n_theta(); ++m) {
      const double v = A * f.at(i, m);
      const Wavevector k = g.node(i, m);
      n.add(v);
      e.add(w * v);
      px.add(k[0] * v);
      py.add(k[1] * v);
    }
  }
  return {n.value(), e.value(), vec2(px.value(), py.value())};
}

AdmissibilityReport admissibility(const Field& f) {
  AdmissibilityReport r;
  r.norm_2_w = weighted_norm(f, 2, kWeightL2);
  r.norm_inf_w = weighted_norm(f, kInf, kWeightLinf);
  r.is_admissible = std::isfinite(r.norm_2_w) && std::isfinite(r.norm_inf_w) && f.is_nonnegative();
  return r;
}

void write_csv(std::ostream& os, const Field& f, const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << "\n";
  os << "r,theta,value\n";
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  for (int i = 0; i < f.grid.n_r(); ++i)
    for (int m = 0; m < f.grid.n_theta(); ++m)
      os << f.grid.radius(i) << "," << f.grid.theta(m) << "," << f.at(i, m) << "\n";
  os.precision(old);
}

Field read_csv(std::istream& is, const GridConfig& cfg) {
  Grid g(cfg);
  Field f(g);
  std::vector<char> seen(g.size(), 0);
  std::string line;
  bool header = false;
  std::size_t count = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::istringstream ls(line);
    double r, t, v;
    char c1, c2;
    if (!(ls >> r >> c1 >> t >> c2 >> v) || c1 != ',' || c2 != ',')
      throw ConfigError("read_csv: malformed row '" + line + "'");
    const double u = std::log(r / cfg.r_min) / g.du();
    const int i = static_cast<int>(std::lround(u));
    const int m = static_cast<int>(std::lround(t / g.dtheta()));
    if (i < 0 || i >= g.n_r() || m < 0 || m >= g.n_theta() || std::abs(u - i) > 1e-6)
      throw ConfigError("read_csv: row does not match a grid node: '" + line + "'");
    if (!seen[g.index(i, m)]) ++count;
    seen[g.index(i, m)] = 1;
    f.at(i, m) = v;
  }
  if (count != g.size()) throw ConfigError("read_csv: missing grid nodes");
  return f;
}

namespace {
void put_u32(std::ostream& os, std::uint32_t x) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
  os.write(b, 4);
}
void put_f64(std::ostream& os, double d) {
  const auto x = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
  os.write(b, 8);
}
std::uint64_t get_bytes(std::istream& is, int n) {
  unsigned char b[8] = {};
  if (!is.read(reinterpret_cast<char*>(b), n)) throw ConfigError("read_binary: truncated input");
  std::uint64_t x = 0;
  for (int i = 0; i < n; ++i) x |= std::uint64_t(b[i]) << (8 * i);
  return x;
}
constexpr std::uint32_t kBinaryVersion = 1;
}  // namespace

void write_binary(std::ostream& os, const Field& f) {
  os.write("GWKE", 4);
  put_u32(os, kBinaryVersion);
  put_u32(os, static_cast<std::uint32_t>(f.grid.n_r()));
  put_u32(os, static_cast<std::uint32_t>(f.grid.n_theta()));
  put_f64(os, f.grid.config().r_min);
  put_f64(os, f.grid.config().r_max);
  for (double v : f.values) put_f64(os, v);
}

Field read_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "GWKE") throw ConfigError("read_binary: bad magic");
  if (get_bytes(is, 4) != kBinaryVersion) throw ConfigError("read_binary: unsupported version");
  GridConfig cfg;
  cfg.n_r = static_cast<int>(get_bytes(is, 4));
  cfg.n_theta = static_cast<int>(get_bytes(is, 4));
  cfg.r_min = std::bit_cast<double>(get_bytes(is, 8));
  cfg.r_max = std::bit_cast<double>(get_bytes(is, 8));
  Field f{Grid(cfg)};
  for (double& v : f.values) v = std::bit_cast<double>(get_bytes(is, 8));
  return f;
}

}  // namespace gwk

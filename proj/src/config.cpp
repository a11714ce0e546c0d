#include "gwk/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gwk/errors.hpp"
#include "gwk/rng.hpp"

namespace gwk {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  return x;
}

int to_i32(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < -2147483647LL || x > 2147483647LL) throw ConfigError("config: '" + key + "' out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& k, auto member) {
      t[k] = [k, member](RunConfig& c, const std::string& v) { member(c) = to_double(k, v); };
    };
    auto integer = [&t](const std::string& k, auto member) {
      t[k] = [k, member](RunConfig& c, const std::string& v) { member(c) = to_i32(k, v); };
    };
    auto boolean = [&t](const std::string& k, auto member) {
      t[k] = [k, member](RunConfig& c, const std::string& v) { member(c) = to_bool(k, v); };
    };

    num("grid.r_min", [](RunConfig& c) -> double& { return c.grid.r_min; });
    num("grid.r_max", [](RunConfig& c) -> double& { return c.grid.r_max; });
    integer("grid.n_r", [](RunConfig& c) -> int& { return c.grid.n_r; });
    integer("grid.n_theta", [](RunConfig& c) -> int& { return c.grid.n_theta; });

    for (const char* sec : {"quad", "measure"}) {
      const std::string s = sec;
      auto q = [s](RunConfig& c) -> QuadConfig& { return s == "quad" ? c.quad : c.measure; };
      integer(s + ".n_transverse", [q](RunConfig& c) -> int& { return q(c).n_transverse; });
      integer(s + ".n_scan", [q](RunConfig& c) -> int& { return q(c).n_scan; });
      integer(s + ".n_cones", [q](RunConfig& c) -> int& { return q(c).n_cones; });
      num(s + ".exclusion_radius", [q](RunConfig& c) -> double& { return q(c).exclusion_radius; });
      num(s + ".resonance_tol", [q](RunConfig& c) -> double& { return q(c).resonance_tol; });
      num(s + ".bisection_tol", [q](RunConfig& c) -> double& { return q(c).bisection_tol; });
      num(s + ".line_scale", [q](RunConfig& c) -> double& { return q(c).line_scale; });
    }
    integer("quad.n_k3_radial", [](RunConfig& c) -> int& { return c.quad.n_k3_radial; });
    integer("quad.n_k3_angular", [](RunConfig& c) -> int& { return c.quad.n_k3_angular; });
    num("quad.k3_r_min", [](RunConfig& c) -> double& { return c.quad.k3_r_min; });
    num("quad.k3_r_max", [](RunConfig& c) -> double& { return c.quad.k3_r_max; });
    num("quad.transverse_halfwidth", [](RunConfig& c) -> double& { return c.quad.transverse_halfwidth; });
    boolean("quad.skip_trivial_branch", [](RunConfig& c) -> bool& { return c.quad.skip_trivial_branch; });

    t["scan.k_values"] = [](RunConfig& c, const std::string& v) { c.scan.k_values = to_list("scan.k_values", v); };
    num("scan.k1_magnitude", [](RunConfig& c) -> double& { return c.scan.k1_magnitude; });
    integer("scan.n_k1_angles", [](RunConfig& c) -> int& { return c.scan.n_k1_angles; });
    integer("scan.n_theta2", [](RunConfig& c) -> int& { return c.scan.n_theta2; });
    integer("scan.n_radial_scan", [](RunConfig& c) -> int& { return c.scan.n_radial_scan; });
    num("scan.angle_offset", [](RunConfig& c) -> double& { return c.scan.angle_offset; });

    t["solver.t_final"] = [](RunConfig& c, const std::string& v) {
      if (v == "auto")
        c.solver.t_final.reset();
      else
        c.solver.t_final = to_double("solver.t_final", v);
    };
    integer("solver.n_steps", [](RunConfig& c) -> int& { return c.solver.n_steps; });
    integer("solver.max_iter", [](RunConfig& c) -> int& { return c.solver.max_iter; });
    num("solver.contraction_tol", [](RunConfig& c) -> double& { return c.solver.contraction_tol; });
    num("solver.max_ratio", [](RunConfig& c) -> double& { return c.solver.max_ratio; });
    num("solver.envelope_slack", [](RunConfig& c) -> double& { return c.solver.envelope_slack; });
    num("solver.duhamel_slack", [](RunConfig& c) -> double& { return c.solver.duhamel_slack; });
    integer("solver.n_constant_samples", [](RunConfig& c) -> int& { return c.solver.n_constant_samples; });

    t["initial.family"] = [](RunConfig& c, const std::string& v) { c.initial.name = v; };
    num("initial.amplitude", [](RunConfig& c) -> double& { return c.initial.amplitude; });
    num("initial.sigma", [](RunConfig& c) -> double& { return c.initial.sigma; });
    num("initial.c", [](RunConfig& c) -> double& { return c.initial.c; });
    num("initial.bump_lo", [](RunConfig& c) -> double& { return c.initial.bump_lo; });
    num("initial.bump_hi", [](RunConfig& c) -> double& { return c.initial.bump_hi; });
    t["initial.center"] = [](RunConfig& c, const std::string& v) {
      const auto xs = to_list("initial.center", v);
      if (xs.size() != 2) throw ConfigError("config: 'initial.center' expects two numbers");
      c.initial.center = vec2(xs[0], xs[1]);
    };

    integer("verify.n_symmetry", [](RunConfig& c) -> int& { return c.verify.n_symmetry; });
    integer("verify.n_kinematic", [](RunConfig& c) -> int& { return c.verify.n_kinematic; });
    integer("verify.n_root_lines", [](RunConfig& c) -> int& { return c.verify.n_root_lines; });
    integer("verify.n_completeness_lines", [](RunConfig& c) -> int& { return c.verify.n_completeness_lines; });
    integer("verify.n_oracle", [](RunConfig& c) -> int& { return c.verify.n_oracle; });
    integer("verify.n_operator_pairs", [](RunConfig& c) -> int& { return c.verify.n_operator_pairs; });
    integer("verify.base_n_r", [](RunConfig& c) -> int& { return c.verify.base_n_r; });
    integer("verify.base_n_theta", [](RunConfig& c) -> int& { return c.verify.base_n_theta; });
    num("verify.interior_lo", [](RunConfig& c) -> double& { return c.verify.interior_lo; });
    num("verify.interior_hi", [](RunConfig& c) -> double& { return c.verify.interior_hi; });
    num("verify.equilibrium_threshold", [](RunConfig& c) -> double& { return c.verify.equilibrium_threshold; });
    num("verify.oracle_sigma", [](RunConfig& c) -> double& { return c.verify.oracle_sigma; });
    integer("verify.oracle_n", [](RunConfig& c) -> int& { return c.verify.oracle_n; });

    t["run.seed"] = [](RunConfig& c, const std::string& v) {
      std::uint64_t x = 0;
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("config: 'run.seed' expects an unsigned integer");
      c.seed = x;
    };
    t["run.threads"] = [](RunConfig& c, const std::string& v) {
      c.threads = v == "auto" ? 0 : to_i32("run.threads", v);
    };
    t["run.output_dir"] = [](RunConfig& c, const std::string& v) { c.output_dir = v; };
    return t;
  }();
  return table;
}

}  // namespace

void RunConfig::require(const std::string& section, const std::string& why) const {
  if (!has(section)) throw ConfigError("config: missing [" + section + "] section (needed for " + why + ")");
}

void RunConfig::validate() const {
  grid.validate();
  quad.validate();
  measure.validate();
  solver.validate();
  if (scan.k_values.size() < 3) throw ConfigError("scan: need at least 3 |k| values");
  if (threads < 0) throw ConfigError("run: threads must be >= 0");
  if (verify.base_n_r < 4 || verify.base_n_theta < 4 || verify.base_n_theta % 2)
    throw ConfigError("verify: base grid too small");
  if (!(verify.interior_hi > verify.interior_lo)) throw ConfigError("verify: empty interior mask");
}

RunConfig parse_config(std::istream& is) {
  RunConfig cfg;
  cfg.from_file = true;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections.insert(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(cfg, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

std::string canonical_text(const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "grid " << c.grid.r_min << " " << c.grid.r_max << " " << c.grid.n_r << " " << c.grid.n_theta << "\n";
  for (const QuadConfig* q : {&c.quad, &c.measure})
    os << "quad " << q->n_k3_radial << " " << q->n_k3_angular << " " << q->k3_r_min << " " << q->k3_r_max
       << " " << q->n_transverse << " " << q->transverse_halfwidth << " " << q->n_scan << " "
       << q->exclusion_radius << " " << q->resonance_tol << " " << q->bisection_tol << " "
       << q->skip_trivial_branch << " " << q->n_cones << " " << q->line_scale << "\n";
  os << "scan";
  for (double k : c.scan.k_values) os << " " << k;
  os << " | " << c.scan.k1_magnitude << " " << c.scan.n_k1_angles << " " << c.scan.n_theta2 << " "
     << c.scan.n_radial_scan << " " << c.scan.angle_offset << "\n";
  os << "solver ";
  if (c.solver.t_final)
    os << *c.solver.t_final;
  else
    os << "auto";
  os << " " << c.solver.n_steps << " " << c.solver.max_iter << " " << c.solver.contraction_tol << " "
     << c.solver.max_ratio << " " << c.solver.envelope_slack << " " << c.solver.duhamel_slack << " "
     << c.solver.n_constant_samples << "\n";
  os << "initial " << c.initial.name << " " << c.initial.amplitude << " " << c.initial.center[0] << " "
     << c.initial.center[1] << " " << c.initial.sigma << " " << c.initial.c << " " << c.initial.bump_lo
     << " " << c.initial.bump_hi << "\n";
  const auto& v = c.verify;
  os << "verify " << v.n_symmetry << " " << v.n_kinematic << " " << v.n_root_lines << " "
     << v.n_completeness_lines << " " << v.n_oracle << " " << v.n_operator_pairs << " " << v.base_n_r << " "
     << v.base_n_theta << " " << v.interior_lo << " " << v.interior_hi << " " << v.equilibrium_threshold
     << " " << v.oracle_sigma << " " << v.oracle_n << "\n";
  os << "seed " << c.seed << "\n";
  return os.str();
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text(cfg))));
  return buf;
}

}  // namespace gwk

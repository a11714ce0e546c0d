// gwk: batch entry points for the kinetic-equation library.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gwk/config.hpp"
#include "gwk/errors.hpp"
#include "gwk/kernel.hpp"
#include "gwk/measure.hpp"
#include "gwk/operators.hpp"
#include "gwk/parallel.hpp"
#include "gwk/resonance.hpp"
#include "gwk/solver.hpp"
#include "gwk/spectrum.hpp"
#include "gwk/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gwk;

namespace {

enum Exit { kPass = 0, kPropertyFailure = 1, kUsage = 2, kNumerical = 3 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> threads;
  std::string out;
  bool refine = false;
};

struct Context {
  RunConfig cfg;
  std::string hash;
  fs::path out;

  std::string stamp() const { return "config_hash=" + hash + " seed=" + std::to_string(cfg.seed); }

  json header() const {
    json j;
    j["config_hash"] = hash;
    j["seed"] = cfg.seed;
    return j;
  }

  void write_json(const std::string& name, const json& j) const {
    std::ofstream(out / name) << j.dump(2) << "\n";
  }
};

// doubles every quadrature resolution knob
QuadConfig doubled(QuadConfig q) {
  q.n_transverse *= 2;
  q.n_scan *= 2;
  q.n_k3_radial *= 2;
  q.n_k3_angular *= 2;
  return q;
}

Context make_context(const Options& o) {
  Context c;
  c.cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.seed) c.cfg.seed = *o.seed;
  if (o.threads) {
    if (*o.threads == "auto") {
      c.cfg.threads = 0;
    } else {
      try {
        c.cfg.threads = std::stoi(*o.threads);
      } catch (const std::exception&) {
        throw ConfigError("--threads expects an integer or 'auto'");
      }
    }
  }
  if (!o.out.empty()) c.cfg.output_dir = o.out;
  c.cfg.validate();
  c.hash = config_hash(c.cfg);
  c.out = c.cfg.output_dir;
  fs::create_directories(c.out);
  set_thread_count(c.cfg.threads);
  return c;
}

Wavevector parse_vec(const std::string& s) {
  std::stringstream ss(s);
  double x = 0, y = 0;
  char comma = 0;
  if (!(ss >> x >> comma >> y) || comma != ',') throw ConfigError("expected a wavevector as 'x,y', got '" + s + "'");
  return vec2(x, y);
}

json moments_json(const Moments& m) {
  return {{"action", m.action}, {"energy", m.energy}, {"momentum", {m.momentum[0], m.momentum[1]}}};
}

// ---------------------------------------------------------------------------- commands

int cmd_verify(const Options& o, std::vector<std::string> suites) {
  Context c = make_context(o);
  if (suites.empty()) suites = suite_names();
  for (const auto& s : suites) {
    const auto names = suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) throw ConfigError("unknown suite '" + s + "'");
    for (const auto& sec : required_sections(s)) c.cfg.require(sec, "suite " + s);
  }
  json report = c.header();
  report["suites"] = json::array();
  bool all = true;
  for (const auto& s : suites) {
    const SuiteResult r = run_suite(s, c.cfg);
    report["suites"].push_back(to_json(r));
    all = all && r.pass;
    std::printf("%-18s %s  %.1f s%s%s\n", s.c_str(), r.pass ? "pass" : "FAIL", r.seconds,
                r.error.empty() ? "" : "  ", r.error.c_str());
    std::fflush(stdout);
  }
  report["pass"] = all;
  report["n_suites"] = suites.size();
  c.write_json("verify_report.json", report);
  return all ? kPass : kPropertyFailure;
}

int cmd_scan(const Options& o) {
  Context c = make_context(o);
  c.cfg.require("scan", "scan");
  const ScanReport r = growth_scan(c.cfg.scan);
  {
    std::ofstream g(c.out / "growth.csv");
    g << "# " << c.stamp() << "\n";
    g.precision(17);
    g << "k,sup_kernel_sq,n_samples\n";
    for (const auto& row : r.rows) g << row.k_mag << "," << row.sup_kernel_sq << "," << row.n_samples << "\n";
  }
  {
    std::ofstream g(c.out / "residuals.csv");
    g << "# " << c.stamp() << "\n";
    g.precision(17);
    g << "k,sup_r1,sup_r2,sup_t3\n";
    for (const auto& row : r.rows) g << row.k_mag << "," << row.sup_r1 << "," << row.sup_r2 << "," << row.sup_t3 << "\n";
  }
  json j = c.header();
  j["slope_kernel_sq"] = r.slope_kernel_sq;
  j["slope_r1"] = r.slope_r1;
  j["slope_r2"] = r.slope_r2;
  j["slope_t3"] = r.slope_t3;
  j["fitted_cq"] = r.fitted_cq;
  j["slope_kernel_sq_within_bound"] = r.slope_kernel_sq <= 2.1;
  c.write_json("scan_summary.json", j);
  std::printf("slope_kernel_sq %.4f  r1 %.4f  r2 %.4f  t3 %.4f  C_Q %.4g\n", r.slope_kernel_sq, r.slope_r1,
              r.slope_r2, r.slope_t3, r.fitted_cq);
  return kPass;
}

struct Collision {
  Field f, q;
  Moments m;
  double interior_max = 0, interior_scale = 0;
};

Collision collide_on(const Context& c, const Grid& grid, const QuadConfig& quad, const std::string& input) {
  Collision out;
  if (input.empty()) {
    out.f = sample_initial(c.cfg.initial, grid);
  } else {
    std::ifstream in(input);
    if (!in) throw ConfigError("cannot open input field '" + input + "'");
    out.f = read_csv(in, grid.config());
  }
  const auto mu = shared_measure(grid, quad);
  out.q = collision_apply(out.f, *mu);
  out.m = moments(out.q);
  Field loss = collision_frequency_field(out.f, *mu, true);
  for (int i = 0; i < grid.n_r(); ++i) {
    const double r = grid.radius(i);
    if (r <= c.cfg.verify.interior_lo || r >= c.cfg.verify.interior_hi) continue;
    for (int m = 0; m < grid.n_theta(); ++m) {
      out.interior_max = std::max(out.interior_max, std::abs(out.q.at(i, m)));
      out.interior_scale = std::max(out.interior_scale, std::abs(loss.at(i, m) * out.f.at(i, m)));
    }
  }
  return out;
}

json collision_json(const Collision& r) {
  json j;
  j["moments"] = moments_json(r.m);
  j["max_abs"] = r.q.max_abs();
  j["interior_max_abs"] = r.interior_max;
  j["interior_loss_scale"] = r.interior_scale;
  j["interior_relative"] = r.interior_scale > 0 ? r.interior_max / r.interior_scale : 0.0;
  return j;
}

int cmd_collide(const Options& o, const std::string& input) {
  Context c = make_context(o);
  c.cfg.require("grid", "collide");
  const Grid grid(c.cfg.grid);
  const Collision base = collide_on(c, grid, c.cfg.measure, input);
  {
    std::ofstream f(c.out / "collision.csv");
    write_csv(f, base.q, c.stamp());
  }
  json j = c.header();
  j["family"] = input.empty() ? c.cfg.initial.name : "file:" + input;
  j["base"] = collision_json(base);
  j["noise_threshold"] = c.cfg.verify.equilibrium_threshold;
  j["interior_below_noise_threshold"] = j["base"]["interior_relative"].get<double>() <= c.cfg.verify.equilibrium_threshold;
  if (o.refine) {
    if (!input.empty()) throw ConfigError("--refine resamples the initial family and cannot use --input");
    QuadConfig q = c.cfg.measure;
    q.n_transverse *= 2;
    q.n_scan *= 2;
    const Collision fine = collide_on(c, Grid(c.cfg.grid.refined()), q, input);
    j["refined"] = collision_json(fine);
    auto ratio = [](double a, double b) { return b != 0 ? std::abs(a) / std::abs(b) : 0.0; };
    j["refinement_ratio"] = {{"action", ratio(base.m.action, fine.m.action)},
                             {"energy", ratio(base.m.energy, fine.m.energy)},
                             {"momentum", ratio(norm(base.m.momentum), norm(fine.m.momentum))},
                             {"interior_max_abs", ratio(base.interior_max, fine.interior_max)}};
  }
  c.write_json("collision_moments.json", j);
  std::printf("max|Q| %.6g  interior max %.6g  action %.6g  energy %.6g\n", base.q.max_abs(), base.interior_max,
              base.m.action, base.m.energy);
  return kPass;
}

int cmd_evolve(const Options& o) {
  Context c = make_context(o);
  c.cfg.require("grid", "evolve");
  c.cfg.require("solver", "evolve");
  const Grid grid(c.cfg.grid);
  const QuadConfig quad = o.refine ? doubled(c.cfg.measure) : c.cfg.measure;
  const auto mu = shared_measure(grid, quad);
  const Field f0 = sample_initial(c.cfg.initial, grid);
  const SolverResult r = iterate(f0, c.cfg.solver, *mu, Rng(c.cfg.seed).child("evolve"));
  {
    std::ofstream d(c.out / "diagnostics.csv");
    write_diagnostics_csv(d, r, c.stamp());
  }
  fs::create_directories(c.out / "snapshots");
  for (std::size_t s = 0; s < r.solution.trajectory.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof name, "step_%03zu.csv", s);
    std::ofstream f(c.out / "snapshots" / name);
    std::ostringstream tag;
    tag.precision(17);
    tag << c.stamp() << " iterate=" << r.solution.n << " time=" << r.solution.times[s];
    write_csv(f, r.solution.trajectory[s], tag.str());
  }
  double worst = 0;
  for (double q : r.ratios) worst = std::max(worst, q);
  json j = c.header();
  j["constants"] = {{"c_b", r.constants.c_b},
                    {"c_tilde_a", r.constants.c_tilde_a},
                    {"c_tilde_b", r.constants.c_tilde_b},
                    {"c_f", r.constants.c_f}};
  j["lifespan"] = {{"t1", r.life.t1},
                   {"t_contraction", r.life.t_contraction},
                   {"t", r.life.t},
                   {"unbounded", r.life.unbounded}};
  j["t_final"] = r.t_final;
  j["iterates"] = r.solution.n;
  j["distances"] = r.distances;
  j["contraction_ratios"] = r.ratios;
  j["max_contraction_ratio"] = worst;
  j["converged"] = r.converged;
  j["positivity_ok"] = r.positivity_ok;
  j["envelope_ok"] = r.envelope_ok;
  j["max_envelope_ratio"] = r.max_envelope_ratio;
  j["duhamel_ok"] = r.duhamel_ok;
  c.write_json("lifespan.json", j);
  const bool ok = r.positivity_ok && r.envelope_ok && r.duhamel_ok && worst <= c.cfg.solver.max_ratio;
  std::printf("T %.6g  t_final %.6g  iterates %d  max ratio %.4g  envelope %.4g  %s\n", r.life.t, r.t_final,
              r.solution.n, worst, r.max_envelope_ratio, ok ? "ok" : "property failure");
  return ok ? kPass : kPropertyFailure;
}

int cmd_roots(const Options& o, const std::string& k_s, const std::string& k3_s, int cone, double t) {
  Context c = make_context(o);
  const QuadConfig quad = o.refine ? doubled(c.cfg.quad) : c.cfg.quad;
  const Wavevector k = parse_vec(k_s), k3 = parse_vec(k3_s);
  const ConePartition part(quad.n_cones);
  if (cone < 0 || cone >= part.size()) throw ConfigError("--cone out of range");
  const RootSet rs = resonance_roots(k, k3, part, cone, t, quad);
  json j = c.header();
  j["k"] = {k[0], k[1]};
  j["k3"] = {k3[0], k3[1]};
  j["cone"] = cone;
  j["t"] = t;
  j["roots"] = json::array();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const Wavevector k2 = rs.roots[i] * part.axis(cone) + t * part.normal(cone);
    j["roots"].push_back({{"s", rs.roots[i]},
                          {"k2", {k2[0], k2[1]}},
                          {"jacobian", rs.jacobians[i]},
                          {"trivial", static_cast<bool>(rs.is_trivial[i])},
                          {"delta_omega", delta_omega(k, k2, k3)}});
  }
  c.write_json("roots.json", j);
  std::cout << j.dump(2) << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gravity-wave kinetic equation: verification, scans, collision operator, solver"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "config file (sectioned key = value)");
  app.add_option("--seed", o.seed, "override run.seed");
  app.add_option("--threads", o.threads, "worker threads, or 'auto'");
  app.add_option("--out", o.out, "output directory");
  app.add_flag("--refine", o.refine, "double the quadrature (refinement studies)");

  std::vector<std::string> suites;
  auto* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--suite", suites, "restrict to these suites");
  verify->fallthrough();
  auto* scan = app.add_subcommand("scan", "kernel growth scan");
  scan->fallthrough();
  std::string input;
  auto* collide = app.add_subcommand("collide", "evaluate Q[f] once");
  collide->add_option("--input", input, "field CSV on the configured grid");
  collide->fallthrough();
  auto* evolve = app.add_subcommand("evolve", "run the iteration scheme");
  evolve->fallthrough();
  std::string k_s, k3_s;
  int cone = 0;
  double t = 0.0;
  auto* roots = app.add_subcommand("roots", "print the root set of one scan line");
  roots->add_option("--k", k_s, "x,y")->required();
  roots->add_option("--k3", k3_s, "x,y")->required();
  roots->add_option("--cone", cone, "cone index");
  roots->add_option("--t", t, "transverse offset");
  roots->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*verify) return cmd_verify(o, suites);
    if (*scan) return cmd_scan(o);
    if (*collide) return cmd_collide(o, input);
    if (*evolve) return cmd_evolve(o);
    if (*roots) return cmd_roots(o, k_s, k3_s, cone, t);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "precondition: %s\n", e.what());
    return kUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kUsage;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const SingularityError& e) {
    std::fprintf(stderr, "singularity: %s\n", e.what());
    return kNumerical;
  } catch (const IntegrandError& e) {
    std::fprintf(stderr, "integrand failure: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  }
  return kUsage;
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>

#include "gwk/kernel.hpp"
#include "gwk/resonance.hpp"
#include "gwk/solver.hpp"
#include "gwk/spectrum.hpp"

namespace gwk {

// knobs of the property suites; tolerances are fixed in code, only workloads are tunable
struct VerifyConfig {
  int n_symmetry = 1000;
  int n_kinematic = 10000;
  int n_root_lines = 10000;
  int n_completeness_lines = 100;
  int n_oracle = 20;
  int n_operator_pairs = 50;
  // coarse grid for refinement studies and algebraic identities
  int base_n_r = 16;
  int base_n_theta = 12;
  double interior_lo = 0.5;
  double interior_hi = 2.0;
  // equilibrium residual, relative to the loss-term scale nu~ f on the interior
  double equilibrium_threshold = 1e-4;
  double oracle_sigma = 0.04;
  int oracle_n = 64;
};

struct RunConfig {
  GridConfig grid;
  QuadConfig quad;
  QuadConfig measure = default_measure_quad();
  ScanConfig scan;
  SolverConfig solver;
  InitialFamily initial;
  VerifyConfig verify;
  std::uint64_t seed = 20240917;
  int threads = 0;
  std::string output_dir = "out";
  // sections that appeared in the parsed text; empty for built-in defaults
  std::set<std::string> sections;
  bool from_file = false;

  bool has(const std::string& section) const { return !from_file || sections.count(section) > 0; }
  void require(const std::string& section, const std::string& why) const;
  void validate() const;
};

RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

// canonical dump of every effective value; the hash is taken over this text
std::string canonical_text(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

}  // namespace gwk

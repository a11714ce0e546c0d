#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gwk/config.hpp"

namespace gwk {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation;  // "<=", ">=", "=="
  bool pass = false;
};

struct SuiteResult {
  std::string name;
  bool pass = true;
  double seconds = 0.0;
  std::vector<Check> checks;
  std::string error;  // set when the suite aborted on an exception

  void le(const std::string& what, double value, double tol);
  void ge(const std::string& what, double value, double tol);
  void eq(const std::string& what, bool holds);
};

std::vector<std::string> suite_names();
// config sections a suite reads; checked before anything runs
std::vector<std::string> required_sections(const std::string& suite);
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> suites;
  double budget_seconds;  // 0: none stated
};

const std::vector<Criterion>& acceptance_criteria();

// timings are left out unless asked for, so reports of repeated runs compare equal
nlohmann::json to_json(const SuiteResult& r, bool with_timing = false);

}  // namespace gwk

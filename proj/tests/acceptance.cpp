// Runs the 11 acceptance criteria and prints one line per criterion.
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include "gwk/config.hpp"
#include "gwk/parallel.hpp"
#include "gwk/verify.hpp"

int main(int argc, char** argv) {
  using namespace gwk;
  RunConfig cfg;
  std::string report;
  for (int a = 1; a < argc; ++a) {
    std::string s = argv[a];
    if (s == "--config" && a + 1 < argc)
      cfg = load_config(argv[++a]);
    else if (s == "--report" && a + 1 < argc)
      report = argv[++a];
    else {
      std::fprintf(stderr, "usage: acceptance [--config PATH] [--report PATH]\n");
      return 2;
    }
  }
  set_thread_count(cfg.threads);

  nlohmann::json j;
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.seed;
  bool all = true;
  for (const auto& c : acceptance_criteria()) {
    bool pass = true;
    double secs = 0;
    std::string failed;
    for (const auto& name : c.suites) {
      const SuiteResult r = run_suite(name, cfg);
      j["suites"].push_back(to_json(r));
      secs += r.seconds;
      for (const auto& ch : r.checks)
        if (!ch.pass) failed += " " + name + "." + ch.name;
      if (!r.error.empty()) failed += " " + name + " raised: " + r.error;
      pass = pass && r.pass;
    }
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      pass = false;
      failed += " runtime";
    }
    all = all && pass;
    std::printf("criterion %2d %-32s %s  (%.1f s%s%s)\n", c.id, c.title.c_str(), pass ? "PASS" : "FAIL",
                secs, failed.empty() ? "" : ";", failed.c_str());
    std::fflush(stdout);
  }
  if (!report.empty()) std::ofstream(report) << j.dump(2) << "\n";
  std::printf("acceptance: %s\n", all ? "all criteria pass" : "FAILURES");
  return all ? 0 : 1;
}

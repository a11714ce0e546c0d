#include <doctest.h>

#include <sstream>

#include "gwk/config.hpp"
#include "gwk/rng.hpp"

using namespace gwk;

namespace {
RunConfig parse(const std::string& s) {
  std::istringstream is(s);
  return parse_config(is);
}
}  // namespace

TEST_CASE("config parser reads sections, comments and lists") {
  const RunConfig c = parse(R"(
# comment
[grid]
n_r = 20   # trailing
n_theta = 16
[scan]
k_values = 4, 8, 16, 32
[solver]
t_final = auto
[initial]
family = rayleigh_jeans
center = 1.5, -0.5
[run]
seed = 99
threads = auto
)");
  CHECK(c.grid.n_r == 20);
  CHECK(c.grid.n_theta == 16);
  CHECK(c.scan.k_values == std::vector<double>{4, 8, 16, 32});
  CHECK_FALSE(c.solver.t_final.has_value());
  CHECK(c.initial.name == "rayleigh_jeans");
  CHECK(c.initial.center[0] == 1.5);
  CHECK(c.initial.center[1] == -0.5);
  CHECK(c.seed == 99);
  CHECK(c.threads == 0);
  CHECK(c.has("grid"));
  CHECK_FALSE(c.has("quad"));
  CHECK_THROWS_AS(c.require("quad", "test"), ConfigError);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("[grid]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("n_r = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[grid\n"), ConfigError);
  CHECK_THROWS_AS(parse("[grid]\nn_r = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("[run]\nseed = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[scan]\nk_values =\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("[grid]\nr_min = 2\nr_max = 1\n").validate(), ConfigError);
}

TEST_CASE("defaults need no sections") {
  RunConfig c;
  CHECK(c.has("grid"));
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config hash tracks effective values only") {
  const RunConfig a = parse("[grid]\nn_r = 32\n");
  const RunConfig b = parse("# same values\n[grid]\nn_r=32\n");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  RunConfig c = a;
  c.seed += 1;
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("rng child streams are independent of siblings") {
  Rng r(5);
  Rng a1 = r.child("a");
  Rng a2 = Rng(5).child("a");
  CHECK(a1.next() == a2.next());
  CHECK(Rng(5).child("a").next() != Rng(5).child("b").next());
  Rng u(9);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("configs/default.cfg spells out the built-in defaults") {
  const RunConfig file = load_config(GWK_SOURCE_DIR "/configs/default.cfg");
  CHECK(canonical_text(file) == canonical_text(RunConfig{}));
  CHECK(file.threads == RunConfig{}.threads);
  CHECK(file.output_dir == RunConfig{}.output_dir);
}

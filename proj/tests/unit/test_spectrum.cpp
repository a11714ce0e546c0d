#include <doctest.h>

#include <sstream>

#include "common.hpp"
#include "gwk/spectrum.hpp"

using namespace gwk;

namespace {

Field sample(const Grid& g, double (*fn)(const Wavevector&)) {
  Field f(g);
  for (int i = 0; i < g.n_r(); ++i)
    for (int m = 0; m < g.n_theta(); ++m) f.at(i, m) = fn(g.node(i, m));
  return f;
}

double smooth(const Wavevector& k) { return std::exp(-0.3 * norm(k)) * (1.5 + 0.4 * k[0] / (norm(k) + 1e-300)); }

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g({0.1, 10.0, 21, 16});
  CHECK(g.radius(0) == doctest::Approx(0.1));
  CHECK(g.radius(20) == doctest::Approx(10.0));
  CHECK(g.radius(10) == doctest::Approx(1.0));
  CHECK(g.size() == 21 * 16);
  const Grid fine(g.config().refined());
  for (int i = 0; i < g.n_r(); ++i) CHECK(fine.radius(2 * i) == doctest::Approx(g.radius(i)).epsilon(1e-14));
  GridConfig bad{1.0, 0.5, 8, 8};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("interpolation is exact at nodes and at least second order") {
  double prev = 0.0;
  Rng rng(31);
  std::vector<Wavevector> pts;
  for (int s = 0; s < 400; ++s) {
    const double r = std::exp(rng.uniform(std::log(0.2), std::log(5.0))), t = rng.uniform(0, 2 * M_PI);
    pts.push_back(vec2(r * std::cos(t), r * std::sin(t)));
  }
  for (int level = 0; level < 3; ++level) {
    const int nr = 8 << level, nt = 8 << level;
    const Grid g({0.1, 10.0, nr + 1, nt});
    const Field f = sample(g, smooth);
    for (int i = 0; i < g.n_r(); i += 3)
      for (int m = 0; m < g.n_theta(); m += 3) CHECK(interpolate_signed(f, g.node(i, m)) == f.at(i, m));
    double err = 0.0;
    for (const auto& k : pts) err = std::max(err, std::abs(interpolate_signed(f, k) - smooth(k)));
    if (level > 0) CHECK(std::log2(prev / err) >= 1.8);
    prev = err;
  }
}

TEST_CASE("interpolation vanishes outside the grid annulus") {
  const Grid g({0.5, 4.0, 9, 8});
  const Field f(g, 1.0);
  CHECK(interpolate(f, vec2(0.1, 0.0)) == 0.0);
  CHECK(interpolate(f, vec2(5.0, 0.0)) == 0.0);
  CHECK(interpolate(f, vec2(1.3, 0.7)) == 1.0);
}

TEST_CASE("weighted norms and moments") {
  const Grid g({0.1, 4.0, 17, 16});
  const Field one(g, 1.0);
  CHECK(weighted_norm(one, kInf, 0) == 1.0);
  CHECK(weighted_norm(one, kInf, 2) == doctest::Approx(17.0));  // <4>^2
  // unweighted L1 of 1 over the annulus
  CHECK(weighted_norm(one, 1, 0) == doctest::Approx(M_PI * (16.0 - 0.01)).epsilon(2e-2));
  const Moments m = moments(one);
  CHECK(m.action == doctest::Approx(weighted_norm(one, 1, 0)));
  CHECK(std::abs(m.momentum[0]) < 1e-10);
  CHECK(std::abs(m.momentum[1]) < 1e-10);
}

TEST_CASE("initial families") {
  const Grid g({0.1, 8.0, 17, 16});
  InitialFamily z;
  z.name = "zero";
  CHECK(sample_initial(z, g).max_abs() == 0.0);
  InitialFamily gb;
  const Field f = sample_initial(gb, g);
  CHECK(f.is_nonnegative());
  CHECK(f.max_abs() > 0.1);
  InitialFamily rj;
  rj.name = "rayleigh_jeans";
  rj.bump_lo = 0.5;
  rj.bump_hi = 2.0;
  const Field r = sample_initial(rj, g);
  for (int i = 0; i < g.n_r(); ++i) {
    const double rad = g.radius(i);
    if (rad > 0.5 && rad < 2.0) CHECK(r.at(i, 3) == doctest::Approx(rj.c / std::sqrt(rad)));
    if (rad < 0.25 || rad > 4.0) CHECK(r.at(i, 3) == 0.0);
  }
  InitialFamily bad;
  bad.name = "nope";
  CHECK_THROWS(sample_initial(bad, g));
}

TEST_CASE("radial bump") {
  CHECK(radial_bump(1.0, 0.5, 2.0) == 1.0);
  CHECK(radial_bump(0.2, 0.5, 2.0) == 0.0);
  CHECK(radial_bump(5.0, 0.5, 2.0) == 0.0);
  const double v = radial_bump(0.3, 0.5, 2.0);
  CHECK(v > 0.0);
  CHECK(v < 1.0);
}

TEST_CASE("csv and binary round trips") {
  const Grid g({0.1, 8.0, 9, 8});
  InitialFamily gb;
  const Field f = sample_initial(gb, g);
  std::stringstream cs;
  write_csv(cs, f, "hash");
  CHECK(cs.str().rfind("# hash", 0) == 0);
  const Field c = read_csv(cs, g.config());
  CHECK(c.values == f.values);
  std::stringstream bs;
  write_binary(bs, f);
  const Field b = read_binary(bs);
  CHECK(b.grid == f.grid);
  CHECK(b.values == f.values);
  std::stringstream wrong;
  write_csv(wrong, f);
  CHECK_THROWS(read_csv(wrong, GridConfig{0.1, 8.0, 10, 8}));
}

TEST_CASE("admissibility") {
  const Grid g({0.1, 8.0, 9, 8});
  InitialFamily gb;
  const auto a = admissibility(sample_initial(gb, g));
  CHECK(a.is_admissible);
  CHECK(a.norm_2_w > 0);
  Field neg(g, 0.0);
  neg.values[3] = -1.0;
  CHECK_FALSE(admissibility(neg).is_admissible);
}

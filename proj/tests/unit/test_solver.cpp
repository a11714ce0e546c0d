#include <doctest.h>

#include "common.hpp"
#include "gwk/operators.hpp"
#include "gwk/solver.hpp"

using namespace gwk;

TEST_CASE("phi1 and its difference") {
  CHECK(phi1(0.0) == 1.0);
  CHECK(phi1(1.0) == doctest::Approx(std::expm1(1.0)));
  for (double b : {-3.0, -0.5, -0.05, 0.0, 1e-8, 0.07, 2.0}) {
    for (double h : {1e-3, -1e-6, 1e-12, 0.04}) {
      // long double reference, valid where the difference does not cancel below ~1e-19 relative
      const long double a = static_cast<long double>(b) + h;
      auto p = [](long double z) { return z == 0 ? 1.0L : std::expm1(z) / z; };
      const long double ref = p(a) - p(static_cast<long double>(b));
      const double tol = h > 1e-9 || h < -1e-9 ? 1e-9 : 1e-5;
      CHECK(std::abs(phi1_diff(b, h) - static_cast<double>(ref)) <= tol * std::abs(static_cast<double>(ref)));
    }
  }
}

TEST_CASE("lifespan of zero data is unbounded") {
  const Grid g(testing::small_grid());
  const Lifespan L = lifespan(Field(g, 0.0), ConstantsEstimate{1, 1, 1, 1});
  CHECK(L.unbounded);
}

TEST_CASE("lifespan formula") {
  const Grid g(testing::small_grid());
  InitialFamily gb;
  const Field f0 = sample_initial(gb, g);
  ConstantsEstimate c{1e-3, 2e-3, 3e-3, 4e-3};
  const Lifespan L = lifespan(f0, c);
  const double N = std::max(weighted_norm(f0, 2, kWeightL2), weighted_norm(f0, kInf, kWeightLinf));
  CHECK(L.t1 == doctest::Approx(1.0 / (10.0 * 6e-3 * N * N)));
  CHECK(L.t == std::min(L.t1, L.t_contraction));
  CHECK_FALSE(L.unbounded);
}

TEST_CASE("difference recursion reproduces f_{n+1} - f_n") {
  const auto mu = testing::small_measure();
  const Grid& g = mu->grid();
  InitialFamily gb;
  gb.amplitude = 0.05;
  const Field f0 = sample_initial(gb, g);
  std::vector<double> times;
  for (int s = 0; s <= 4; ++s) times.push_back(0.5 * s);
  IterationState it = constant_trajectory(f0, times);
  for (int n = 2; n <= 4; ++n) {
    IterationState next = propagate_linear(it, f0, *mu, n);
    for (std::size_t s = 0; s < times.size(); ++s) {
      const Field& a = next.trajectory[s];
      const Field& b = it.trajectory[s];
      double scale = 0, err = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double direct = a.values[i] - b.values[i];
        scale = std::max(scale, std::abs(direct));
        err = std::max(err, std::abs(direct - next.delta[s].values[i]));
      }
      // differences at these amplitudes sit well above rounding of f itself
      CHECK(err <= 1e-9 * scale + 1e-15 * f0.max_abs());
    }
    it = std::move(next);
  }
}

TEST_CASE("iterate guards and zero data") {
  const auto mu = testing::small_measure();
  const Grid& g = mu->grid();
  SolverConfig cfg;
  cfg.n_steps = 2;
  cfg.max_iter = 3;
  const SolverResult z = iterate(Field(g, 0.0), cfg, *mu, Rng(1));
  CHECK(z.life.unbounded);
  for (const Field& f : z.solution.trajectory) CHECK(f.max_abs() == 0.0);

  InitialFamily gb;
  const Field f0 = sample_initial(gb, g);
  cfg.t_final = 1e6;
  CHECK_THROWS_AS(iterate(f0, cfg, *mu, Rng(1)), ConfigError);
  Field neg(g, 0.0);
  neg.values[0] = -1;
  cfg.t_final.reset();
  CHECK_THROWS_AS(iterate(neg, cfg, *mu, Rng(1)), PreconditionError);
  SolverConfig bad;
  bad.max_iter = 1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

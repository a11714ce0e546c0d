#include <doctest.h>

#include "common.hpp"
#include "gwk/operators.hpp"

using namespace gwk;
using testing::rel;

namespace {

Field random_field(const Grid& g, Rng& rng, double lo, double hi) {
  Field f(g);
  for (double& v : f.values) v = rng.uniform(lo, hi);
  return f;
}

double max_rel_diff(const Field& a, const Field& b) {
  const double s = std::max(a.max_abs(), b.max_abs());
  double d = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return s > 0 ? d / s : d;
}

}  // namespace

TEST_CASE("measure is built and stores roots") {
  const auto mu = testing::small_measure();
  CHECK(mu->stats().n_atoms > 0);
  CHECK(mu->stats().max_roots_per_line <= 8);
  CHECK(shared_measure(mu->grid(), mu->quad()).get() == mu.get());
}

TEST_CASE("collision of zero data is zero") {
  const auto mu = testing::small_measure();
  const Field z(mu->grid(), 0.0);
  CHECK(collision_apply(z, *mu).max_abs() == 0.0);
}

TEST_CASE("operator identities") {
  const auto mu = testing::small_measure();
  const Grid& g = mu->grid();
  Rng rng(41);
  for (int s = 0; s < 3; ++s) {
    const Field f = random_field(g, rng, 0.0, 1.0);
    const Field h = random_field(g, rng, -1.0, 1.0);
    // consistency Q_f f = Q[f]
    CHECK(max_rel_diff(linearized_apply(f, f, *mu), collision_apply(f, *mu)) < 1e-12);
    // split at epsilon = 0 sums to Q_g h
    OperatorParams p;
    const Field d = split_apply(SplitPart::Dissipative, f, h, p, *mu);
    const Field b = split_apply(SplitPart::Bounded, f, h, p, *mu);
    Field sum(g);
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] = d.values[i] + b.values[i];
    CHECK(max_rel_diff(sum, linearized_apply(f, h, *mu)) < 1e-12);
    // dissipative part pairs non-positively with h
    CHECK(pairing(d, h) <= 1e-12 * pairing(h, h));
    // gain/loss form reproduces Q_g h
    const GainLoss gl = gain_loss(f, h, *mu);
    Field split(g);
    for (std::size_t i = 0; i < g.size(); ++i) split.values[i] = gl.gain.values[i] + gl.rate.values[i] * h.values[i];
    CHECK(max_rel_diff(split, linearized_apply(f, h, *mu)) < 1e-12);
  }
}

TEST_CASE("commutator tilde part is skew") {
  const auto mu = testing::small_measure();
  Rng rng(42);
  const Field f = random_field(mu->grid(), rng, 0.0, 1.0);
  const Field h = random_field(mu->grid(), rng, -1.0, 1.0);
  OperatorParams p;
  p.weight_a = 3.0;
  const Field t = commutator_apply(CommutatorPart::Tilde, f, h, p, *mu);
  CHECK(std::abs(pairing(h, t)) <= 1e-8 * pairing(h, h));
}

TEST_CASE("difference terms agree with direct differences") {
  const auto mu = testing::small_measure();
  const Grid& g = mu->grid();
  Rng rng(43);
  const Field gt = random_field(g, rng, 0.5, 1.0);
  const Field d = random_field(g, rng, -0.2, 0.2);
  Field gg(g);
  for (std::size_t i = 0; i < gg.values.size(); ++i) gg.values[i] = gt.values[i] + d.values[i];
  const Field h = random_field(g, rng, 0.0, 1.0);
  const Field e = random_field(g, rng, -1.0, 1.0);
  const IterateDifference dd = difference_terms(gg, gt, d, h, e, *mu);
  const GainLoss a = gain_loss(gg, h, *mu), b = gain_loss(gt, h, *mu), c = gain_loss(gg, e, *mu);
  Field dg(g), dr(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    dg.values[i] = a.gain.values[i] - b.gain.values[i];
    dr.values[i] = a.rate.values[i] - b.rate.values[i];
  }
  // values here are O(1), so direct differences are accurate to rounding
  CHECK(max_rel_diff(dd.gain_diff, dg) < 1e-10);
  CHECK(max_rel_diff(dd.rate_diff, dr) < 1e-10);
  CHECK(max_rel_diff(dd.gain_e, c.gain) < 1e-12);
}

TEST_CASE("operators reject fields on another grid") {
  const auto mu = testing::small_measure();
  const Field other(Grid(GridConfig{0.1, 6.0, 12, 8}), 1.0);
  CHECK_THROWS(collision_apply(other, *mu));
}

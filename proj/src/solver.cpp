#include "gwk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "gwk/errors.hpp"
#include "gwk/numerics.hpp"
#include "gwk/operators.hpp"

namespace gwk {

namespace {

Field random_unit(const Grid& g, Rng& rng) {
  Field h(g);
  for (double& v : h.values) v = rng.uniform(-1.0, 1.0);
  return h;
}

double intersection_norm(const Field& f) {
  return std::max(weighted_norm(f, 2, kWeightL2), weighted_norm(f, kInf, kWeightLinf));
}

Field difference(const Field& a, const Field& b) {
  Field d(a.grid);
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = a.values[i] - b.values[i];
  return d;
}

Field zero_like(const Field& f) { return Field(f.grid); }

}  // namespace

ConstantsEstimate estimate_constants(const Field& f0, int n_samples, const ResonantMeasure& mu,
                                     Rng rng) {
  if (n_samples < 1) throw ConfigError("estimate_constants: n_samples must be >= 1");
  ConstantsEstimate c;
  const double S = std::pow(weighted_norm(f0, kInf, kWeightCoef), 2);
  const double SF = std::pow(weighted_norm(f0, kInf, kWeightLinf), 2);
  if (S == 0.0) return c;
  const Grid& g = f0.grid;
  OperatorParams bounded;
  OperatorParams comm;
  comm.weight_a = kWeightLinf;

  Rng rb = rng.child("c_b"), ra = rng.child("c_tilde_a"), rt = rng.child("c_tilde_b"),
      rf = rng.child("c_f");
  for (int s = 0; s < n_samples; ++s) {
    {
      const Field h = random_unit(g, rb);
      const Field q = split_apply(SplitPart::Bounded, f0, h, bounded, mu);
      for (int p : {1, 2, kInf})
        c.c_b = std::max(c.c_b, weighted_norm(q, p, 0) / weighted_norm(h, p, 0) / S);
    }
    {
      const Field h = random_unit(g, ra);
      const Field q = commutator_apply(CommutatorPart::Remainder, f0, h, comm, mu);
      for (int p : {1, 2, kInf})
        c.c_tilde_a = std::max(c.c_tilde_a, weighted_norm(q, p, 0) / weighted_norm(h, p, 0) / S);
    }
    {
      const Field h = random_unit(g, rt);
      const Field q = commutator_apply(CommutatorPart::Tilde, f0, multiply_weight(h, kWeightLinf), comm, mu);
      c.c_tilde_b = std::max(c.c_tilde_b, weighted_norm(q, kInf, 0) / (S * weighted_norm(h, 2, kWeightL2)));
    }
    {
      const Field h = random_unit(g, rf);
      const Field q = forcing_apply(f0, f0, h, mu);
      c.c_f = std::max(c.c_f, weighted_norm(q, 2, 0) / weighted_norm(h, 2, 0) / SF);
    }
  }
  return c;
}

Lifespan lifespan(const Field& f0, const ConstantsEstimate& c) {
  Lifespan L;
  const double N = intersection_norm(f0);
  const double sum = c.c_b + c.c_tilde_a + c.c_tilde_b;
  const double inf = std::numeric_limits<double>::infinity();
  if (!std::isfinite(sum) || !std::isfinite(c.c_f)) throw NumericalError("lifespan: non-finite constants");
  if (N == 0.0 || (sum == 0.0 && c.c_f == 0.0)) {
    L.t1 = L.t_contraction = L.t = inf;
    L.unbounded = true;
    return L;
  }
  L.t1 = sum > 0 ? 1.0 / (10.0 * sum * N * N) : inf;
  const double E2 = 4.0 * N * N;
  if (c.c_f == 0.0)
    L.t_contraction = inf;
  else if (c.c_tilde_a == 0.0)
    L.t_contraction = 1.0 / (2.0 * c.c_f * E2);
  else
    L.t_contraction = std::log1p(c.c_tilde_a / (2.0 * c.c_f)) / (c.c_tilde_a * E2);
  L.t = std::min(L.t1, L.t_contraction);
  L.unbounded = !std::isfinite(L.t);
  return L;
}

void SolverConfig::validate() const {
  if (t_final && !(*t_final > 0)) throw ConfigError("solver: t_final must be > 0");
  if (n_steps < 1) throw ConfigError("solver: n_steps must be >= 1");
  if (max_iter < 2) throw ConfigError("solver: max_iter must be >= 2");
  if (!(contraction_tol > 0)) throw ConfigError("solver: contraction_tol must be > 0");
  if (!(max_ratio > 0)) throw ConfigError("solver: max_ratio must be > 0");
  if (n_constant_samples < 10) throw ConfigError("solver: n_constant_samples must be >= 10");
}

IterationState constant_trajectory(const Field& f0, const std::vector<double>& times) {
  IterationState s;
  s.n = 1;
  s.times = times;
  s.trajectory.assign(times.size(), f0);
  s.delta.assign(times.size(), f0);
  const std::size_t steps = times.empty() ? 0 : times.size() - 1;
  s.gains.assign(steps, zero_like(f0));
  s.rates.assign(steps, zero_like(f0));
  return s;
}

namespace {

StepDiagnostics diagnose(const Field& f, int n, int step, double t) {
  StepDiagnostics d;
  d.iterate = n;
  d.step = step;
  d.time = t;
  d.norm_2 = weighted_norm(f, 2, kWeightL2);
  d.norm_inf = weighted_norm(f, kInf, kWeightLinf);
  d.min_value = f.min_value();
  d.moments = moments(f);
  return d;
}

}  // namespace

IterationState propagate_linear(const IterationState& g_traj, const Field& f0,
                                const ResonantMeasure& mu, int iterate_index,
                                const ConstantsEstimate* constants) {
  if (g_traj.trajectory.size() != g_traj.times.size() || g_traj.times.empty())
    throw PreconditionError("propagate_linear: malformed coefficient trajectory");
  const std::size_t steps = g_traj.times.size() - 1;
  if (g_traj.delta.size() != g_traj.times.size() || g_traj.gains.size() != steps ||
      g_traj.rates.size() != steps)
    throw PreconditionError("propagate_linear: coefficient trajectory lacks difference data");
  if (!f0.is_nonnegative()) throw PreconditionError("propagate_linear: negative initial data");
  IterationState out;
  out.n = iterate_index;
  out.times = g_traj.times;
  out.trajectory.reserve(out.times.size());
  out.trajectory.push_back(f0);
  out.delta.reserve(out.times.size());
  out.delta.push_back(zero_like(f0));
  out.gains.reserve(steps);
  out.rates.reserve(steps);

  double S = 0.0;
  for (const Field& g : g_traj.trajectory) S = std::max(S, std::pow(weighted_norm(g, kInf, kWeightCoef), 2));
  const double growth = constants ? (constants->c_b + constants->c_tilde_a) * S : 0.0;
  const double source = constants ? constants->c_tilde_b * S : 0.0;
  double bound = weighted_norm(f0, kInf, kWeightLinf);

  StepDiagnostics d0 = diagnose(f0, iterate_index, 0, out.times[0]);
  d0.duhamel_bound = constants ? bound : 0.0;
  out.diagnostics.push_back(d0);

  for (std::size_t s = 0; s + 1 < out.times.size(); ++s) {
    const double dt = out.times[s + 1] - out.times[s];
    const Field& f = out.trajectory.back();
    const Field& e = out.delta.back();
    const Field& g = g_traj.trajectory[s];
    const Field& h = g_traj.trajectory[s];  // the coefficient is f_n itself
    const Field gt = difference(g, g_traj.delta[s]);
    const GainLoss gl = gain_loss(g, f, mu);
    const IterateDifference dd = difference_terms(g, gt, g_traj.delta[s], h, e, mu);
    Field next(f.grid), enext(f.grid);
    for (std::size_t i = 0; i < next.values.size(); ++i) {
      const double z = gl.rate.values[i] * dt;
      const double zt = g_traj.rates[s].values[i] * dt;
      const double dz = dd.rate_diff.values[i] * dt;
      const double p = phi1(z);
      next.values[i] = std::exp(z) * f.values[i] + dt * p * gl.gain.values[i];
      enext.values[i] = std::exp(z) * e.values[i] + dt * p * dd.gain_e.values[i] +
                        std::exp(zt) * std::expm1(dz) * h.values[i] +
                        dt * (p * dd.gain_diff.values[i] + phi1_diff(zt, dz) * g_traj.gains[s].values[i]);
    }
    const double scale = next.max_abs();
    const double lo = next.min_value();
    if (lo < -1e-12 * scale) {
      std::ostringstream os;
      os << "propagate_linear: positivity violated (min " << lo << ", scale " << scale << ")";
      throw NumericalError(os.str());
    }
    for (double& v : next.values) v = std::max(v, 0.0);
    if (constants) {
      const double z = growth * dt;
      bound = std::exp(z) * bound + dt * phi1(z) * source * weighted_norm(f, 2, kWeightL2);
    }
    StepDiagnostics d = diagnose(next, iterate_index, static_cast<int>(s + 1), out.times[s + 1]);
    d.min_value = std::min(d.min_value, lo);
    d.duhamel_bound = constants ? bound : 0.0;
    out.diagnostics.push_back(d);
    out.trajectory.push_back(std::move(next));
    out.delta.push_back(std::move(enext));
    out.gains.push_back(gl.gain);
    out.rates.push_back(gl.rate);
  }
  return out;
}

SolverResult iterate(const Field& f0, const SolverConfig& cfg, const ResonantMeasure& mu, Rng rng) {
  cfg.validate();
  if (!f0.is_nonnegative()) throw PreconditionError("iterate: negative initial data");
  SolverResult r;
  r.constants = estimate_constants(f0, cfg.n_constant_samples, mu, rng.child("constants"));
  r.life = lifespan(f0, r.constants);
  if (cfg.t_final) {
    if (!r.life.unbounded && *cfg.t_final > r.life.t) {
      std::ostringstream os;
      os.precision(17);
      os << "t_final exceeds the computed lifespan T = " << r.life.t;
      throw ConfigError(os.str());
    }
    r.t_final = *cfg.t_final;
  } else {
    r.t_final = r.life.unbounded ? 1.0 : r.life.t;
  }

  std::vector<double> times(cfg.n_steps + 1);
  for (int s = 0; s <= cfg.n_steps; ++s) times[s] = r.t_final * s / cfg.n_steps;

  const double n2 = weighted_norm(f0, 2, kWeightL2);
  const double ninf = weighted_norm(f0, kInf, kWeightLinf);
  double floor = 0.0;  // set from the first distance

  auto check_envelope = [&](const IterationState& st) {
    for (const auto& d : st.diagnostics) {
      double e = 0.0;
      if (n2 > 0) e = std::max(e, d.norm_2 / n2);
      if (ninf > 0) e = std::max(e, d.norm_inf / ninf);
      r.max_envelope_ratio = std::max(r.max_envelope_ratio, e);
      if (e > 2.0 * (1.0 + cfg.envelope_slack)) r.envelope_ok = false;
      if (d.min_value < -1e-12 * std::max(d.norm_inf, 0.0)) r.positivity_ok = false;
      if (st.n > 1 && d.norm_inf > d.duhamel_bound * (1.0 + cfg.duhamel_slack) + 1e-300)
        r.duhamel_ok = false;
    }
  };

  IterationState prev = constant_trajectory(f0, times);
  for (std::size_t s = 0; s < times.size(); ++s) prev.diagnostics.push_back(diagnose(f0, 1, static_cast<int>(s), times[s]));
  check_envelope(prev);
  r.log = prev.diagnostics;

  for (int n = 2; n <= cfg.max_iter; ++n) {
    IterationState cur = propagate_linear(prev, f0, mu, n, &r.constants);
    double dist = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s)
      dist = std::max(dist, weighted_norm(cur.delta[s], 2, kWeightContraction));
    cur.distance = dist;
    r.distances.push_back(dist);
    if (r.distances.size() == 1) floor = cfg.contraction_tol * dist;
    const std::size_t m = r.distances.size();
    // ratios d_{n+1}/d_n from n = 2, measured while the previous distance is above the floor
    if (m >= 3 && r.distances[m - 2] > floor) {
      cur.contraction_ratio = dist / r.distances[m - 2];
      r.ratios.push_back(cur.contraction_ratio);
      if (cur.contraction_ratio >= 1.0) {
        std::ostringstream os;
        os.precision(6);
        os << "iterate: distances not decreasing:";
        for (double x : r.distances) os << " " << x;
        throw NumericalError(os.str());
      }
    }
    for (auto& d : cur.diagnostics) {
      d.distance = dist;
      d.contraction_ratio = cur.contraction_ratio;
    }
    check_envelope(cur);
    r.log.insert(r.log.end(), cur.diagnostics.begin(), cur.diagnostics.end());
    prev = std::move(cur);
    if (dist <= floor) {
      r.converged = true;
      break;
    }
  }
  r.solution = std::move(prev);
  return r;
}

void write_diagnostics_csv(std::ostream& os, const SolverResult& r, const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << "\n";
  os << "iterate,step,time,norm_2_32,norm_inf_20,min_value,action,energy,momentum_x,momentum_y,"
        "duhamel_bound,distance,contraction_ratio\n";
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& d : r.log)
    os << d.iterate << "," << d.step << "," << d.time << "," << d.norm_2 << "," << d.norm_inf << ","
       << d.min_value << "," << d.moments.action << "," << d.moments.energy << ","
       << d.moments.momentum[0] << "," << d.moments.momentum[1] << "," << d.duhamel_bound << ","
       << d.distance << "," << d.contraction_ratio << "\n";
  os.precision(old);
}

}  // namespace gwk

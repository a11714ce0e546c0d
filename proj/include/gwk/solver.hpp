#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gwk/measure.hpp"
#include "gwk/rng.hpp"
#include "gwk/spectrum.hpp"

namespace gwk {

struct ConstantsEstimate {
  double c_b = 0.0;
  double c_tilde_a = 0.0;
  double c_tilde_b = 0.0;
  double c_f = 0.0;
};

ConstantsEstimate estimate_constants(const Field& f0, int n_samples, const ResonantMeasure& mu,
                                     Rng rng);

struct Lifespan {
  double t1 = 0.0;
  double t_contraction = 0.0;
  double t = 0.0;
  bool unbounded = false;
};

Lifespan lifespan(const Field& f0, const ConstantsEstimate& c);

struct StepDiagnostics {
  int iterate = 0;
  int step = 0;
  double time = 0.0;
  double norm_2 = 0.0;    // ||.||_{2,32}
  double norm_inf = 0.0;  // ||.||_{inf,20}
  double min_value = 0.0;
  Moments moments;
  double duhamel_bound = 0.0;
  double distance = 0.0;           // of this iterate to the previous one
  double contraction_ratio = 0.0;  // 0 when not measured
};

struct IterationState {
  int n = 1;
  std::vector<double> times;
  std::vector<Field> trajectory;
  std::vector<StepDiagnostics> diagnostics;
  // f_n - f_{n-1} per slice, carried by its own recursion so that it stays accurate far
  // below the rounding level of f_n itself; f_1 = f0 counts as the iterate of coefficient 0
  std::vector<Field> delta;
  // gain and rate used for step s when this trajectory was produced
  std::vector<Field> gains;
  std::vector<Field> rates;
  double distance = 0.0;  // sup_t ||f_n - f_{n-1}||_{2,6}
  double contraction_ratio = 0.0;
};

struct SolverConfig {
  std::optional<double> t_final;  // empty: lifespan
  int n_steps = 16;
  int max_iter = 8;
  double contraction_tol = 1e-100;  // relative to the first distance
  double max_ratio = 0.6;
  double envelope_slack = 0.05;
  double duhamel_slack = 0.10;
  int n_constant_samples = 10;

  void validate() const;
};

IterationState constant_trajectory(const Field& f0, const std::vector<double>& times);

// d/dt f = Q_{g(t)} f with the positivity-preserving exponential update
IterationState propagate_linear(const IterationState& g_traj, const Field& f0,
                                const ResonantMeasure& mu, int iterate_index,
                                const ConstantsEstimate* constants = nullptr);

struct SolverResult {
  IterationState solution;
  ConstantsEstimate constants;
  Lifespan life;
  double t_final = 0.0;
  std::vector<double> distances;
  std::vector<double> ratios;  // d_{n+1}/d_n for n >= 2
  bool converged = false;
  bool positivity_ok = true;
  bool envelope_ok = true;
  bool duhamel_ok = true;
  double max_envelope_ratio = 0.0;
  std::vector<StepDiagnostics> log;
};

SolverResult iterate(const Field& f0, const SolverConfig& cfg, const ResonantMeasure& mu, Rng rng);

void write_diagnostics_csv(std::ostream& os, const SolverResult& r, const std::string& comment = {});

}  // namespace gwk

#pragma once

#include "gwk/measure.hpp"
#include "gwk/resonance.hpp"
#include "gwk/spectrum.hpp"

namespace gwk {

struct OperatorParams {
  double epsilon = 0.0;
  double weight_a = 0.0;

  void validate() const;
};

// Q[f]
Field collision_apply(const Field& f, const ResonantMeasure& mu);
Field collision_apply(const Field& f, const QuadConfig& quad);

// Q_g h
Field linearized_apply(const Field& g, const Field& h, const ResonantMeasure& mu);

enum class SplitPart { Dissipative, Bounded };
Field split_apply(SplitPart part, const Field& g, const Field& h, const OperatorParams& params,
                  const ResonantMeasure& mu);

enum class CommutatorPart { Tilde, Remainder };
Field commutator_apply(CommutatorPart part, const Field& g, const Field& h,
                       const OperatorParams& params, const ResonantMeasure& mu);

// difference-forcing operator with weight 2(d+1); g_next plays g, g_prev plays g~
Field forcing_apply(const Field& g_next, const Field& g_prev, const Field& h,
                    const ResonantMeasure& mu);

// nu on the grid nodes; majorant = true gives nu~
Field collision_frequency_field(const Field& g, const ResonantMeasure& mu, bool majorant = false);

// nu at an arbitrary k through the generic reduction engine
double collision_frequency(const Field& g, const Wavevector& k, const QuadConfig& quad,
                           bool majorant = false);

// 2 chi_{2<3} chi_{1>=0} g1 g2 h3
Field gain_apply(const Field& g, const Field& h, const ResonantMeasure& mu);

// Q_g h = gain + rate h, gain = 2 g1 g2 h3 (>= 0 for h >= 0), rate = 2 g2 g3 - 2 g1 g2 - 2 g1 g3
struct GainLoss {
  Field gain;
  Field rate;  // mu - lambda
};
GainLoss gain_loss(const Field& g, const Field& h, const ResonantMeasure& mu);

// For coefficients g = gt + d, in one pass: (G_g - G_gt) h, rate(g) - rate(gt), and G_g e.
// Differences are formed bilinearly from d, so they keep their relative accuracy however
// small d is compared with g.
struct IterateDifference {
  Field gain_diff;
  Field rate_diff;
  Field gain_e;
};
IterateDifference difference_terms(const Field& g, const Field& gt, const Field& d, const Field& h,
                                   const Field& e, const ResonantMeasure& mu);

Field multiply_weight(const Field& f, double a);

// discrete L2 pairing sum A f h
double pairing(const Field& f, const Field& h);

}  // namespace gwk

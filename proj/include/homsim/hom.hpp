#pragma once
//
// Two-source Hong-Ou-Mandel interference on a balanced beam splitter with
// ideal threshold detectors, plus the leading-order closed-form predictions.
//

#include "homsim/fock.hpp"
#include "homsim/source.hpp"

namespace homsim {

/// Threshold-detector click probabilities behind the beam splitter.
struct HOMStats {
  double p_joint;  // both detectors click
  double p_d1;     // detector on output mode 0 clicks
  double p_d2;     // detector on output mode 1 clicks
};

/// Leading-order predictions for a pair of identical sources.
struct HOMPrediction {
  double g_hom;
  double v_a;  // visibility against a distinguishable reference
  double v_b;  // visibility from the correlator, 1 - 2 g_hom
  double p_joint;
  double p_d;  // either single-detector probability
};

/// Click statistics of any two-mode state on external modes 0 and 1.
HOMStats threshold_stats(const MixedState& two_mode_state);

/// Interferes two sources (built with disjoint error labels) on a 50:50
/// beam splitter; b is shifted to external mode 1.
HOMStats hom_stats(const SourceState& a, const SourceState& b);

/// Same experiment with source b made fully distinguishable by remapping its
/// target label to a fresh error label.
HOMStats reference_stats(const SourceState& a, const SourceState& b);

/// g_HOM = P(D1 and D2) / (P(D1) P(D2)). Errors on vanishing marginals.
double hom_correlator(const HOMStats& stats);

/// Method-A visibility: 1 - p_joint / p_joint_reference.
double visibility_a(const HOMStats& stats, const HOMStats& reference);

/// Method-B visibility: 1 - 2 g_HOM.
double visibility_b(const HOMStats& stats);

/// Leading-order predictions from the effective error, g2, and transmission.
HOMPrediction predict_hom(double eps_tilde, double g2, double eta);

}  // namespace homsim

#pragma once
//
// Imperfect single-photon source: exact channel propagation of a signal
// photon plus a partially admixed noise photon through loss, together with
// closed-form predictions for the photon-number distribution, the g2(0)
// autocorrelation, and the effective indistinguishability error of the
// single-photon component.
//

#include <string>
#include <vector>

#include "homsim/fock.hpp"
#include "homsim/interferometer.hpp"

namespace homsim {

/// agnostic: the noise photon enters through the emulator unitary with its
///   own indistinguishability error xi.
/// dichroic: the noise photon sits in a fully distinguishable spectral bin
///   and is merged directly into the signal mode (xi is forced to 1).
enum class SourceVariant { agnostic, dichroic };

struct SourceParams {
  double eta = 1.0;  // transmission efficiency, in [0, 1]
  double p = 0.0;    // noise-photon admixture probability, in [0, 1/2]
  double eps = 0.0;  // intrinsic indistinguishability error of the signal
  double xi = 1.0;   // indistinguishability error of the noise photon
  SourceVariant variant = SourceVariant::agnostic;
};

/// Range-checks the parameters; throws std::invalid_argument on violations.
/// eps > xi and a dichroic xi != 1 are physical-consistency issues: reported
/// as warnings, or thrown when strict_ordering is set.
std::vector<std::string> validate_params(const SourceParams& params,
                                         bool strict_ordering = false);

/// Mixed single photon on `mode`: target label with weight 1-err, the given
/// error label with weight err.
MixedState single_photon_mixture(double err, InternalLabel error_label, int mode = 0);

struct SourceState {
  MixedState state;                  // reduced state on external mode 0
  std::vector<NumberSector> sectors; // photon-number decomposition of `state`
  std::vector<int> error_ids;        // error labels consumed while building

  double probability(int n) const;
  const MixedState* sector(int n) const;  // nullptr when the sector is empty
};

/// Propagates the source exactly and reduces to the output mode. Consumes
/// two fresh error labels (signal first, then noise) from the allocator.
SourceState build_source(const SourceParams& params, LabelAllocator& labels);

struct PhotonNumberProbs {
  double p0, p1, p2;
};

/// Leading-order g2(0) of the source.
double predict_g2(const SourceParams& params);

/// Leading-order photon-number distribution for a given g2(0).
PhotonNumberProbs pn_from_g2(double eta, double g2, SourceVariant variant);

PhotonNumberProbs predict_pn(const SourceParams& params);

/// g2(0) = 2 P2 / (P1 + 2 P2)^2 from a measured distribution.
double g2_from_probabilities(double p1, double p2);

/// exact_consistency: solve the single-photon consistency condition with the
///   full P1 denominator.
/// first_order: expansion of the same condition to first order in g2.
/// xi_one_first_order: the compact xi = 1 special case
///   eps_tilde = eps + (1-eta)(1-eps) g2 / 2.
enum class EffectiveErrorFormula { exact_consistency, first_order, xi_one_first_order };

struct EffectiveError {
  double value;
  bool in_range;  // false when the formula lands outside [0, 1]
};

EffectiveError effective_error(const SourceParams& params, EffectiveErrorFormula formula);

/// Target-label deficit of the simulated single-photon sector:
/// 1 - <1_target| rho_1 |1_target>.
double simulated_effective_error(const SourceState& source);

/// Closed-form summary used by the CLI. Fields that require a non-vanishing
/// single-photon probability are NaN when eta = 0.
struct ClosedFormReport {
  PhotonNumberProbs pn;
  double g2;
  double eps_tilde_exact;        // consistency-condition value
  double eps_tilde_first_order;
  double purity;                 // (1 - eps_tilde_exact)^2
};

ClosedFormReport closed_form_report(const SourceParams& params);

/// Exact channel coefficients for each (signal, noise) label combination,
/// paired with their leading-order values, for cross-checking.
struct ChannelCoefficient {
  std::string branch;
  std::string term;
  double exact;
  double leading_order;
};

std::vector<ChannelCoefficient> channel_output_coefficients(double eta, double p);

}  // namespace homsim

#include "homsim/source.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace homsim {

namespace {

// the dichroic model fixes the noise photon as fully distinguishable
SourceParams canonical(const SourceParams& params) {
  SourceParams q = params;
  if (q.variant == SourceVariant::dichroic) q.xi = 1.0;
  return q;
}

void check_range(double v, double lo, double hi, const char* name) {
  if (!(v >= lo && v <= hi))
    throw std::invalid_argument(std::string("source: ") + name + " must lie in [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace

std::vector<std::string> validate_params(const SourceParams& params, bool strict_ordering) {
  check_range(params.eta, 0.0, 1.0, "eta");
  check_range(params.p, 0.0, 0.5, "p");
  check_range(params.eps, 0.0, 1.0, "eps");
  check_range(params.xi, 0.0, 1.0, "xi");
  std::vector<std::string> warnings;
  if (params.eps > params.xi) {
    if (strict_ordering)
      throw std::invalid_argument("source: eps > xi violates the model ordering");
    warnings.push_back("eps > xi: the noise photon is modeled as no more "
                       "distinguishable than the signal photon");
  }
  if (params.variant == SourceVariant::dichroic && params.xi != 1.0) {
    if (strict_ordering)
      throw std::invalid_argument("source: the dichroic variant requires xi = 1");
    warnings.push_back("dichroic variant forces xi = 1; the supplied xi is ignored");
  }
  return warnings;
}

MixedState single_photon_mixture(double err, InternalLabel error_label, int mode) {
  check_range(err, 0.0, 1.0, "error weight");
  std::vector<WeightedPure> members;
  if (err < 1.0)
    members.push_back({1.0 - err, PureState::single_photon(mode, InternalLabel::target())});
  if (err > 0.0) members.push_back({err, PureState::single_photon(mode, error_label)});
  return MixedState(std::move(members));
}

double SourceState::probability(int n) const {
  for (const auto& s : sectors)
    if (s.photon_number == n) return s.probability;
  return 0.0;
}

const MixedState* SourceState::sector(int n) const {
  for (const auto& s : sectors)
    if (s.photon_number == n && s.state) return &*s.state;
  return nullptr;
}

SourceState build_source(const SourceParams& params, LabelAllocator& labels) {
  validate_params(params);
  SourceParams q = canonical(params);
  InternalLabel signal_err = labels.fresh();
  InternalLabel noise_err = labels.fresh();

  MixedState reduced = MixedState::vacuum();
  if (q.variant == SourceVariant::agnostic) {
    MixedState signal = single_photon_mixture(q.eps, signal_err, 0);
    MixedState noise = single_photon_mixture(q.xi, noise_err, 1);
    MixedState joint = tensor_product(signal, noise);  // mode 2 stays vacuum
    MixedState out = apply_unitary(emulator_unitary(q.eta, q.p), joint);
    reduced = partial_trace(out, {0});
  } else {
    // with probability p a fully distinguishable noise photon joins the
    // signal mode; loss then acts on each photon independently
    std::vector<WeightedPure> branches;
    auto add_branch = [&](double w, OccupationState occ) {
      if (w > 0.0) branches.push_back({w, PureState::basis(std::move(occ))});
    };
    InternalLabel t = InternalLabel::target();
    add_branch((1.0 - q.p) * (1.0 - q.eps), OccupationState::single(0, t));
    add_branch((1.0 - q.p) * q.eps, OccupationState::single(0, signal_err));
    add_branch(q.p * (1.0 - q.eps), OccupationState::single(0, t).add(0, noise_err));
    add_branch(q.p * q.eps, OccupationState::single(0, signal_err).add(0, noise_err));
    MixedState merged(std::move(branches));
    MixedState out = apply_unitary(beam_splitter(q.eta), merged);
    reduced = partial_trace(out, {0});
  }

  auto sectors = number_decompose(reduced, 0);
  if (sectors.size() > 3)
    throw std::logic_error("build_source: more than two photons in the output mode");
  return SourceState{std::move(reduced), std::move(sectors),
                     {signal_err.error_id(), noise_err.error_id()}};
}

double predict_g2(const SourceParams& params) {
  validate_params(params);
  SourceParams q = canonical(params);
  if (q.variant == SourceVariant::agnostic)
    return 2.0 * q.p * (1.0 + (1.0 - q.eps) * (1.0 - q.xi));
  return 2.0 * q.p / ((1.0 + q.p) * (1.0 + q.p));
}

PhotonNumberProbs pn_from_g2(double eta, double g2, SourceVariant variant) {
  check_range(eta, 0.0, 1.0, "eta");
  if (g2 < 0.0) throw std::invalid_argument("source: g2 must be non-negative");
  if (variant == SourceVariant::agnostic) {
    double p0 = 1.0 - eta + 0.5 * eta * eta * g2;
    double p1 = eta - eta * eta * g2;
    return {p0, p1, 1.0 - p0 - p1};
  }
  double p0 = 1.0 - eta - 0.5 * eta * g2 + 0.5 * eta * eta * g2;
  double p1 = eta + 0.5 * eta * g2 - eta * eta * g2;
  return {p0, p1, 1.0 - p0 - p1};
}

PhotonNumberProbs predict_pn(const SourceParams& params) {
  SourceParams q = canonical(params);
  return pn_from_g2(q.eta, predict_g2(q), q.variant);
}

double g2_from_probabilities(double p1, double p2) {
  if (p1 < 0.0 || p2 < 0.0)
    throw std::invalid_argument("g2_from_probabilities: probabilities must be non-negative");
  double mean = p1 + 2.0 * p2;
  if (mean <= 0.0)
    throw std::invalid_argument("g2_from_probabilities: zero mean photon number");
  return 2.0 * p2 / (mean * mean);
}

EffectiveError effective_error(const SourceParams& params, EffectiveErrorFormula formula) {
  validate_params(params);
  SourceParams q = canonical(params);
  double g2 = predict_g2(q);
  double k = 1.0 + (1.0 - q.eps) * (1.0 - q.xi);
  double v = 0.0;
  switch (formula) {
    case EffectiveErrorFormula::exact_consistency: {
      double p1 = q.eta - q.eta * q.eta * g2;
      if (p1 <= 0.0)
        throw std::invalid_argument("effective_error: single-photon probability vanishes");
      v = q.eta * (q.eps + 0.5 * (q.xi - q.eps - q.eta * (q.xi + q.eps)) / k * g2) / p1;
      break;
    }
    case EffectiveErrorFormula::first_order:
      v = q.eps + 0.5 * (1.0 - q.eta) * (q.xi - q.eps) / k * g2 +
          q.eta * q.eps * (1.0 - q.eps) * (1.0 - q.xi) / k * g2;
      break;
    case EffectiveErrorFormula::xi_one_first_order:
      v = q.eps + 0.5 * (1.0 - q.eta) * (1.0 - q.eps) * g2;
      break;
  }
  return {v, v >= 0.0 && v <= 1.0};
}

double simulated_effective_error(const SourceState& source) {
  const MixedState* rho1 = source.sector(1);
  if (!rho1 || source.probability(1) <= 0.0)
    throw std::invalid_argument("simulated_effective_error: no single-photon component");
  return 1.0 - population(*rho1, OccupationState::single(0, InternalLabel::target()));
}

ClosedFormReport closed_form_report(const SourceParams& params) {
  ClosedFormReport r{};
  r.pn = predict_pn(params);
  r.g2 = predict_g2(params);
  double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    r.eps_tilde_exact = effective_error(params, EffectiveErrorFormula::exact_consistency).value;
    r.purity = (1.0 - r.eps_tilde_exact) * (1.0 - r.eps_tilde_exact);
  } catch (const std::invalid_argument&) {
    r.eps_tilde_exact = nan;
    r.purity = nan;
  }
  r.eps_tilde_first_order = effective_error(params, EffectiveErrorFormula::first_order).value;
  return r;
}

std::vector<ChannelCoefficient> channel_output_coefficients(double eta, double p) {
  check_range(eta, 0.0, 1.0, "eta");
  check_range(p, 0.0, 0.5, "p");
  InternalLabel t = InternalLabel::target();
  InternalLabel e0 = InternalLabel::error(0);
  InternalLabel e1 = InternalLabel::error(1);
  UnitaryMatrix u = emulator_unitary(eta, p);

  auto reduced_for = [&](InternalLabel signal, InternalLabel noise) {
    PureState in = PureState::basis(OccupationState::single(0, signal).add(1, noise));
    return partial_trace(apply_unitary(u, MixedState::pure(in)), {0});
  };
  auto pop1 = [](const MixedState& rho, InternalLabel l) {
    return population(rho, OccupationState::single(0, l));
  };

  std::vector<ChannelCoefficient> out;
  double e2 = eta * eta;

  {
    MixedState rho = reduced_for(t, t);
    out.push_back({"identical pair", "vacuum", population(rho, OccupationState{}),
                   1.0 - eta + 2.0 * e2 * p});
    out.push_back({"identical pair", "one photon", pop1(rho, t), eta * (1.0 - 4.0 * eta * p)});
    out.push_back({"identical pair", "two photons",
                   population(rho, OccupationState::single(0, t).add(0, t)), 2.0 * e2 * p});
  }
  {
    MixedState rho = reduced_for(t, e0);
    out.push_back({"noise distinguishable", "vacuum", population(rho, OccupationState{}),
                   1.0 - eta + e2 * p});
    out.push_back({"noise distinguishable", "one photon (signal label)", pop1(rho, t),
                   eta * (1.0 - p) - e2 * p});
    out.push_back({"noise distinguishable", "one photon (noise label)", pop1(rho, e0),
                   eta * (1.0 - eta) * p});
    out.push_back({"noise distinguishable", "two photons",
                   population(rho, OccupationState::single(0, t).add(0, e0)), e2 * p});
  }
  {
    MixedState rho = reduced_for(e0, t);
    out.push_back({"signal distinguishable", "vacuum", population(rho, OccupationState{}),
                   1.0 - eta + e2 * p});
    out.push_back({"signal distinguishable", "one photon (signal label)", pop1(rho, e0),
                   eta * (1.0 - p) - e2 * p});
    out.push_back({"signal distinguishable", "one photon (noise label)", pop1(rho, t),
                   eta * (1.0 - eta) * p});
    out.push_back({"signal distinguishable", "two photons",
                   population(rho, OccupationState::single(0, e0).add(0, t)), e2 * p});
  }
  {
    MixedState rho = reduced_for(e0, e1);
    out.push_back({"mutually distinguishable pair", "vacuum",
                   population(rho, OccupationState{}), 1.0 - eta + e2 * p});
    out.push_back({"mutually distinguishable pair", "one photon (either error label)",
                   pop1(rho, e0) + pop1(rho, e1), eta * (1.0 - 2.0 * eta * p)});
    out.push_back({"mutually distinguishable pair", "two photons",
                   population(rho, OccupationState::single(0, e0).add(0, e1)), e2 * p});
  }
  return out;
}

}  // namespace homsim

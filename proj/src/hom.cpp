#include "homsim/hom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace homsim {

HOMStats threshold_stats(const MixedState& two_mode_state) {
  std::vector<double> joint, d1, d2;
  for (const auto& [w, psi] : two_mode_state.members()) {
    for (const auto& [occ, amp] : psi.amplitudes()) {
      double pr = w * std::norm(amp);
      int n1 = occ.photons_in_mode(0);
      int n2 = occ.photons_in_mode(1);
      if (n1 > 0) d1.push_back(pr);
      if (n2 > 0) d2.push_back(pr);
      if (n1 > 0 && n2 > 0) joint.push_back(pr);
    }
  }
  HOMStats stats{stable_sum(std::move(joint)), stable_sum(std::move(d1)),
                 stable_sum(std::move(d2))};
  if (stats.p_joint < 0.0 ||
      stats.p_joint > std::min(stats.p_d1, stats.p_d2) + kNormTol)
    throw std::logic_error("threshold_stats: inconsistent click probabilities");
  return stats;
}

namespace {

HOMStats interfere(const MixedState& a, const MixedState& b) {
  MixedState right = map_modes(b, [](int m) { return m + 1; });
  MixedState joint = tensor_product(a, right);
  return threshold_stats(apply_unitary(beam_splitter(0.5), joint));
}

void check_disjoint(const SourceState& a, const SourceState& b) {
  std::set<int> ia = error_ids(a.state);
  std::set<int> ib = error_ids(b.state);
  for (int id : ia)
    if (ib.count(id))
      throw std::invalid_argument("hom_stats: sources share error label " +
                                  std::to_string(id) +
                                  "; build them from one allocator");
}

}  // namespace

HOMStats hom_stats(const SourceState& a, const SourceState& b) {
  check_disjoint(a, b);
  return interfere(a.state, b.state);
}

HOMStats reference_stats(const SourceState& a, const SourceState& b) {
  check_disjoint(a, b);
  int fresh = 0;
  for (int id : error_ids(a.state)) fresh = std::max(fresh, id + 1);
  for (int id : error_ids(b.state)) fresh = std::max(fresh, id + 1);
  for (int id : a.error_ids) fresh = std::max(fresh, id + 1);
  for (int id : b.error_ids) fresh = std::max(fresh, id + 1);
  MixedState b_distinct = map_labels(b.state, [&](InternalLabel l) {
    return l.is_target() ? InternalLabel::error(fresh) : l;
  });
  return interfere(a.state, b_distinct);
}

double hom_correlator(const HOMStats& stats) {
  if (stats.p_d1 <= 0.0 || stats.p_d2 <= 0.0)
    throw std::invalid_argument("hom_correlator: vanishing single-detector probability");
  return stats.p_joint / (stats.p_d1 * stats.p_d2);
}

double visibility_a(const HOMStats& stats, const HOMStats& reference) {
  if (reference.p_joint <= 0.0)
    throw std::invalid_argument("visibility_a: vanishing reference coincidence rate");
  return 1.0 - stats.p_joint / reference.p_joint;
}

double visibility_b(const HOMStats& stats) { return 1.0 - 2.0 * hom_correlator(stats); }

HOMPrediction predict_hom(double eps_tilde, double g2, double eta) {
  if (!(eps_tilde >= 0.0 && eps_tilde <= 1.0))
    throw std::invalid_argument("predict_hom: eps_tilde must lie in [0, 1]");
  if (!(g2 >= 0.0 && g2 <= 1.0))
    throw std::invalid_argument("predict_hom: g2 must lie in [0, 1]");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("predict_hom: eta must lie in [0, 1]");
  double x2 = (1.0 - eps_tilde) * (1.0 - eps_tilde);  // single-photon overlap
  double x4 = x2 * x2;
  HOMPrediction pred{};
  pred.g_hom = 0.5 * (1.0 - x2 + g2 + 0.5 * eta * (1.0 - x4));
  pred.v_a = x2 / (1.0 + g2);
  pred.v_b = x2 - g2 - 0.5 * eta * (1.0 - x4);
  pred.p_joint = 0.5 * eta * eta * (1.0 - x2 + g2);
  pred.p_d = eta - 0.25 * eta * eta * (1.0 + x2 + g2);
  return pred;
}

}  // namespace homsim

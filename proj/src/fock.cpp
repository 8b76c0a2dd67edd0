#include "homsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace homsim {

double stable_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += t;
  return acc;
}

Complex stable_sum(std::vector<Complex> terms) {
  std::sort(terms.begin(), terms.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  Complex acc = 0.0;
  for (const Complex& t : terms) acc += t;
  return acc;
}

InternalLabel InternalLabel::error(int id) {
  if (id < 0) throw std::invalid_argument("InternalLabel: error id must be >= 0");
  return InternalLabel{id};
}

int InternalLabel::error_id() const {
  if (is_target()) throw std::logic_error("InternalLabel: target label has no error id");
  return code_;
}

OccupationState OccupationState::single(int mode, InternalLabel label) {
  OccupationState s;
  s.add(mode, label);
  return s;
}

OccupationState& OccupationState::add(int mode, InternalLabel label, int count) {
  if (count <= 0) throw std::invalid_argument("OccupationState: count must be positive");
  occ_[PhotonMode{mode, label}] += count;
  return *this;
}

int OccupationState::count(int mode, InternalLabel label) const {
  auto it = occ_.find(PhotonMode{mode, label});
  return it == occ_.end() ? 0 : it->second;
}

int OccupationState::total_photons() const {
  int n = 0;
  for (const auto& [slot, c] : occ_) n += c;
  return n;
}

int OccupationState::photons_in_mode(int mode) const {
  int n = 0;
  for (const auto& [slot, c] : occ_)
    if (slot.mode == mode) n += c;
  return n;
}

namespace {

void prune(PureState::AmplitudeMap& amps) {
  for (auto it = amps.begin(); it != amps.end();) {
    if (std::abs(it->second) < kPruneThreshold)
      it = amps.erase(it);
    else
      ++it;
  }
}

double squared_norm_of(const PureState::AmplitudeMap& amps) {
  std::vector<double> terms;
  terms.reserve(amps.size());
  for (const auto& [occ, a] : amps) terms.push_back(std::norm(a));
  return stable_sum(std::move(terms));
}

}  // namespace

PureState PureState::vacuum() { return basis(OccupationState{}); }

PureState PureState::basis(OccupationState occ) {
  AmplitudeMap amps;
  amps[std::move(occ)] = 1.0;
  return PureState(std::move(amps));
}

PureState PureState::single_photon(int mode, InternalLabel label) {
  return basis(OccupationState::single(mode, label));
}

PureState PureState::normalized(AmplitudeMap amps) {
  double n2 = squared_norm_of(amps);
  if (n2 <= 0.0) throw std::invalid_argument("PureState: cannot normalize zero state");
  double s = std::sqrt(n2);
  for (auto& [occ, a] : amps) a /= s;
  prune(amps);
  return PureState(std::move(amps));
}

PureState PureState::checked(AmplitudeMap amps) {
  prune(amps);
  double n2 = squared_norm_of(amps);
  if (std::abs(n2 - 1.0) > kNormTol)
    throw std::logic_error("PureState: normalization drift (|norm^2 - 1| = " +
                           std::to_string(std::abs(n2 - 1.0)) + ")");
  return PureState(std::move(amps));
}

Complex PureState::amplitude(const OccupationState& occ) const {
  auto it = amps_.find(occ);
  return it == amps_.end() ? Complex{0.0} : it->second;
}

double PureState::squared_norm() const { return squared_norm_of(amps_); }

MixedState::MixedState(std::vector<WeightedPure> members) {
  std::vector<double> ws;
  for (auto& m : members) {
    if (m.weight < 0.0)
      throw std::invalid_argument("MixedState: negative member weight");
    if (m.weight == 0.0) continue;
    ws.push_back(m.weight);
    members_.push_back(std::move(m));
  }
  if (members_.empty()) throw std::invalid_argument("MixedState: no members");
  double total = stable_sum(std::move(ws));
  if (std::abs(total - 1.0) > kNormTol)
    throw std::invalid_argument("MixedState: weights sum to " + std::to_string(total));
}

MixedState MixedState::pure(PureState s) {
  return MixedState({WeightedPure{1.0, std::move(s)}});
}

MixedState MixedState::vacuum() { return pure(PureState::vacuum()); }

double MixedState::total_weight() const {
  std::vector<double> ws;
  ws.reserve(members_.size());
  for (const auto& m : members_) ws.push_back(m.weight);
  return stable_sum(std::move(ws));
}

Complex inner_product(const PureState& a, const PureState& b) {
  // iterate the smaller map, look up in the larger
  const auto& small = a.amplitudes().size() <= b.amplitudes().size() ? a : b;
  const auto& large = (&small == &a) ? b : a;
  std::vector<Complex> terms;
  for (const auto& [occ, amp] : small.amplitudes()) {
    Complex other = large.amplitude(occ);
    if (other == Complex{0.0}) continue;
    Complex aa = (&small == &a) ? amp : other;
    Complex bb = (&small == &a) ? other : amp;
    terms.push_back(std::conj(aa) * bb);
  }
  return stable_sum(std::move(terms));
}

MixedState tensor_product(const MixedState& a, const MixedState& b) {
  std::set<int> ma = occupied_modes(a);
  std::set<int> mb = occupied_modes(b);
  for (int m : ma)
    if (mb.count(m))
      throw std::invalid_argument("tensor_product: external mode " + std::to_string(m) +
                                  " occupied by both factors");
  std::vector<WeightedPure> out;
  out.reserve(a.members().size() * b.members().size());
  for (const auto& [wa, sa] : a.members()) {
    for (const auto& [wb, sb] : b.members()) {
      PureState::AmplitudeMap amps;
      for (const auto& [oa, ca] : sa.amplitudes()) {
        for (const auto& [ob, cb] : sb.amplitudes()) {
          OccupationState merged = oa;
          for (const auto& [slot, c] : ob.slots()) merged.add(slot.mode, slot.label, c);
          amps[std::move(merged)] = ca * cb;
        }
      }
      out.push_back({wa * wb, PureState::checked(std::move(amps))});
    }
  }
  return MixedState(std::move(out));
}

MixedState partial_trace(const MixedState& state, const std::set<int>& keep) {
  if (keep.empty())
    throw std::invalid_argument("partial_trace: keep set must not be empty");
  std::vector<WeightedPure> out;
  for (const auto& [w, psi] : state.members()) {
    // group amplitudes by the traced-out occupation pattern; each group
    // collapses to one conditional pure state
    std::map<OccupationState, PureState::AmplitudeMap> groups;
    for (const auto& [occ, amp] : psi.amplitudes()) {
      OccupationState kept, traced;
      for (const auto& [slot, c] : occ.slots())
        (keep.count(slot.mode) ? kept : traced).add(slot.mode, slot.label, c);
      groups[std::move(traced)][std::move(kept)] = amp;
    }
    for (auto& [traced, amps] : groups) {
      double n2 = squared_norm_of(amps);
      if (n2 <= 0.0) continue;
      double s = std::sqrt(n2);
      for (auto& [occ, a] : amps) a /= s;
      out.push_back({w * n2, PureState::checked(std::move(amps))});
    }
  }
  return MixedState(std::move(out));
}

double trace_purity(const MixedState& state) { return mutual_overlap(state, state); }

double mutual_overlap(const MixedState& a, const MixedState& b) {
  std::vector<double> terms;
  terms.reserve(a.members().size() * b.members().size());
  for (const auto& [wa, sa] : a.members())
    for (const auto& [wb, sb] : b.members())
      terms.push_back(wa * wb * std::norm(inner_product(sa, sb)));
  return stable_sum(std::move(terms));
}

std::vector<NumberSector> number_decompose(const MixedState& state, int mode) {
  for (const auto& [w, psi] : state.members())
    for (const auto& [occ, amp] : psi.amplitudes())
      for (const auto& [slot, c] : occ.slots())
        if (slot.mode != mode)
          throw std::invalid_argument("number_decompose: state occupies mode " +
                                      std::to_string(slot.mode) + ", expected only mode " +
                                      std::to_string(mode));

  std::map<int, std::vector<WeightedPure>> sector_members;
  int n_max = 0;
  for (const auto& [w, psi] : state.members()) {
    std::map<int, PureState::AmplitudeMap> split;
    for (const auto& [occ, amp] : psi.amplitudes()) split[occ.total_photons()][occ] = amp;
    for (auto& [n, amps] : split) {
      double n2 = squared_norm_of(amps);
      if (n2 <= 0.0) continue;
      double s = std::sqrt(n2);
      for (auto& [occ, a] : amps) a /= s;
      sector_members[n].push_back({w * n2, PureState::checked(std::move(amps))});
      n_max = std::max(n_max, n);
    }
  }

  std::vector<NumberSector> sectors;
  std::vector<double> probs;
  for (int n = 0; n <= n_max; ++n) {
    auto it = sector_members.find(n);
    if (it == sector_members.end()) {
      sectors.push_back({n, 0.0, std::nullopt});
      continue;
    }
    std::vector<double> ws;
    for (const auto& m : it->second) ws.push_back(m.weight);
    double pn = stable_sum(std::move(ws));
    probs.push_back(pn);
    std::vector<WeightedPure> mm;
    mm.reserve(it->second.size());
    for (auto& m : it->second) mm.push_back({m.weight / pn, std::move(m.state)});
    sectors.push_back({n, pn, MixedState(std::move(mm))});
  }
  if (std::abs(stable_sum(std::move(probs)) - 1.0) > kNormTol)
    throw std::logic_error("number_decompose: sector probabilities do not sum to 1");
  return sectors;
}

double population(const MixedState& state, const OccupationState& occ) {
  std::vector<double> terms;
  terms.reserve(state.members().size());
  for (const auto& [w, psi] : state.members())
    terms.push_back(w * std::norm(psi.amplitude(occ)));
  return stable_sum(std::move(terms));
}

std::set<int> occupied_modes(const MixedState& state) {
  std::set<int> modes;
  for (const auto& [w, psi] : state.members())
    for (const auto& [occ, amp] : psi.amplitudes())
      for (const auto& [slot, c] : occ.slots()) modes.insert(slot.mode);
  return modes;
}

std::set<int> error_ids(const MixedState& state) {
  std::set<int> ids;
  for (const auto& [w, psi] : state.members())
    for (const auto& [occ, amp] : psi.amplitudes())
      for (const auto& [slot, c] : occ.slots())
        if (!slot.label.is_target()) ids.insert(slot.label.error_id());
  return ids;
}

namespace {

MixedState map_slots(const MixedState& state,
                     const std::function<PhotonMode(PhotonMode)>& f,
                     const char* what) {
  std::vector<WeightedPure> out;
  out.reserve(state.members().size());
  for (const auto& [w, psi] : state.members()) {
    PureState::AmplitudeMap amps;
    for (const auto& [occ, amp] : psi.amplitudes()) {
      OccupationState mapped;
      int slots_before = 0;
      for (const auto& [slot, c] : occ.slots()) {
        PhotonMode target = f(slot);
        mapped.add(target.mode, target.label, c);
        ++slots_before;
      }
      if (static_cast<int>(mapped.slots().size()) != slots_before)
        throw std::invalid_argument(std::string(what) + ": map is not injective on occupied slots");
      if (!amps.emplace(std::move(mapped), amp).second)
        throw std::invalid_argument(std::string(what) + ": map merges distinct basis states");
    }
    out.push_back({w, PureState::checked(std::move(amps))});
  }
  return MixedState(std::move(out));
}

}  // namespace

MixedState map_modes(const MixedState& state, const std::function<int(int)>& f) {
  return map_slots(
      state, [&](PhotonMode slot) { return PhotonMode{f(slot.mode), slot.label}; },
      "map_modes");
}

MixedState map_labels(const MixedState& state,
                      const std::function<InternalLabel(InternalLabel)>& f) {
  return map_slots(
      state, [&](PhotonMode slot) { return PhotonMode{slot.mode, f(slot.label)}; },
      "map_labels");
}

}  // namespace homsim

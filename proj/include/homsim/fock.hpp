#pragma once
//
// Sparse Fock-state algebra for few-photon simulations.
//
// Photons occupy external (circuit) modes and additionally carry an internal
// label that encodes distinguishability: either the shared target mode or one
// of a family of mutually orthogonal error modes. Photons with different
// labels never interfere; photons with the same label are fully identical.
//

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace homsim {

using Complex = std::complex<double>;

/// Normalization invariants hold to this bound on every constructed state.
inline constexpr double kNormTol = 1e-12;

/// Amplitudes below this magnitude are pruned after each operation.
inline constexpr double kPruneThreshold = 1e-15;

/// Sums terms in a canonical order, making the result independent of the
/// order in which the terms were produced (label renamings, map iteration).
double stable_sum(std::vector<double> terms);
Complex stable_sum(std::vector<Complex> terms);

class InternalLabel {
 public:
  static constexpr InternalLabel target() { return InternalLabel{-1}; }
  static InternalLabel error(int id);

  constexpr bool is_target() const { return code_ < 0; }
  int error_id() const;  // only valid for error labels

  friend auto operator<=>(InternalLabel, InternalLabel) = default;

 private:
  constexpr explicit InternalLabel(int code) : code_(code) {}
  int code_;
};

/// Hands out globally fresh error labels. Use one allocator per simulation
/// run so that independently sampled error modes never collide.
class LabelAllocator {
 public:
  InternalLabel fresh() { return InternalLabel::error(next_++); }
  int next_id() const { return next_; }

 private:
  int next_ = 0;
};

/// A single-photon slot: external mode index plus internal label.
struct PhotonMode {
  int mode;
  InternalLabel label;

  friend auto operator<=>(const PhotonMode&, const PhotonMode&) = default;
};

/// Fock basis element: a finite multiset of occupied slots.
class OccupationState {
 public:
  OccupationState() = default;  // vacuum
  static OccupationState single(int mode, InternalLabel label);

  OccupationState& add(int mode, InternalLabel label, int count = 1);
  int count(int mode, InternalLabel label) const;
  int total_photons() const;
  int photons_in_mode(int mode) const;  // summed over labels
  bool is_vacuum() const { return occ_.empty(); }

  const std::map<PhotonMode, int>& slots() const { return occ_; }

  friend auto operator<=>(const OccupationState&, const OccupationState&) = default;

 private:
  std::map<PhotonMode, int> occ_;
};

/// Normalized superposition of occupation states, stored sparsely.
class PureState {
 public:
  using AmplitudeMap = std::map<OccupationState, Complex>;

  static PureState vacuum();
  static PureState basis(OccupationState occ);
  static PureState single_photon(int mode, InternalLabel label);

  /// Scales the given amplitudes to unit norm. Throws on zero norm.
  static PureState normalized(AmplitudeMap amps);

  /// Prunes tiny amplitudes and verifies the map is already normalized;
  /// drift beyond kNormTol indicates an internal bug and throws.
  static PureState checked(AmplitudeMap amps);

  const AmplitudeMap& amplitudes() const { return amps_; }
  Complex amplitude(const OccupationState& occ) const;
  double squared_norm() const;

 private:
  explicit PureState(AmplitudeMap amps) : amps_(std::move(amps)) {}
  AmplitudeMap amps_;
};

struct WeightedPure {
  double weight;
  PureState state;
};

/// Classical mixture of pure states. Weights are positive and sum to one
/// within kNormTol; zero-weight members are dropped on construction.
class MixedState {
 public:
  explicit MixedState(std::vector<WeightedPure> members);
  static MixedState pure(PureState s);
  static MixedState vacuum();

  const std::vector<WeightedPure>& members() const { return members_; }
  double total_weight() const;

 private:
  std::vector<WeightedPure> members_;
};

/// One photon-number sector of a single-mode state. `state` is absent when
/// the sector has zero probability.
struct NumberSector {
  int photon_number;
  double probability;
  std::optional<MixedState> state;
};

Complex inner_product(const PureState& a, const PureState& b);

/// Kronecker product of two mixtures living on disjoint external modes.
MixedState tensor_product(const MixedState& a, const MixedState& b);

/// Traces out every external mode not in `keep`; the result is the
/// renormalized restriction, grouped by the traced-out occupation pattern.
MixedState partial_trace(const MixedState& state, const std::set<int>& keep);

double trace_purity(const MixedState& state);

/// Tr[rho_a rho_b] for two ensembles on identically indexed modes.
double mutual_overlap(const MixedState& a, const MixedState& b);

/// Splits a state occupying only `mode` into photon-number sectors 0..n_max.
std::vector<NumberSector> number_decompose(const MixedState& state, int mode);

/// Diagonal density-matrix element <occ|rho|occ>.
double population(const MixedState& state, const OccupationState& occ);

std::set<int> occupied_modes(const MixedState& state);
std::set<int> error_ids(const MixedState& state);

/// Relabels external modes. The map must be injective on occupied modes.
MixedState map_modes(const MixedState& state, const std::function<int(int)>& f);

/// Relabels internal labels. The map must be injective on the labels in use.
MixedState map_labels(const MixedState& state,
                      const std::function<InternalLabel(InternalLabel)>& f);

}  // namespace homsim

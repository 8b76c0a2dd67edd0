#pragma once
//
// Recovering the effective and intrinsic indistinguishability errors from a
// measured HOM visibility and g2(0).
//

#include <stdexcept>

namespace homsim {

/// a: visibility referenced against a distinguishable source pair.
/// b: visibility obtained from the correlator as 1 - 2 g_HOM.
enum class Method { a, b };

struct Measurement {
  double visibility;  // may be slightly negative for noisy data
  Method method;
  double g2;                   // measured g2(0), >= 0
  double xi_assumption = 1.0;  // assumed noise-photon error for Method B
};

/// The measured pair (visibility, g2) is incompatible with the model.
class InconsistentMeasurement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point slack on recovered overlaps: values within this distance
/// outside [0, 1] are clamped and flagged instead of rejected.
inline constexpr double kDomainTol = 1e-9;

struct ExtractionFlags {
  bool clamped_effective = false;
  bool clamped_intrinsic = false;
  bool intrinsic_unsupported = false;  // Method A with xi_assumption != 1
};

struct ExtractionResult {
  double eps_tilde;
  double eps_intrinsic;      // NaN when flagged unsupported
  double overlap_effective;  // (1 - eps_tilde)^2
  ExtractionFlags flags;
};

/// Effective error from the visibility alone:
///   (1 - eps_tilde)^2 = V_A (1 + g2) = V_B + g2.
double effective_error_from_visibility(const Measurement& m, bool* clamped = nullptr);

/// Intrinsic error via (1 - eps)^2 = V_A (1 + 2 g2); valid for xi = 1.
double intrinsic_from_a(double v_a, double g2, bool* clamped = nullptr);

/// Intrinsic error from the Method-B visibility. Closed form at xi = 1,
/// otherwise a monotone bisection solve of forward_visibility_b.
double intrinsic_from_b(double v_b, double g2, double xi, bool* clamped = nullptr);

/// eta -> 0 forward model for Method B:
///   V_B = (1-eps)^2 - (1 + (1-eps)^2) / (1 + (1-eps)(1-xi)) * g2.
double forward_visibility_b(double eps, double g2, double xi);

/// Full pipeline: effective error, then the intrinsic error for the method.
ExtractionResult extract(const Measurement& m);

}  // namespace homsim

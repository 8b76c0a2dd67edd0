#include "homsim/extraction.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "homsim/fock.hpp"  // kNormTol

namespace homsim {

namespace {

void set_flag(bool* flag) {
  if (flag) *flag = true;
}

double error_from_overlap(double overlap, const char* what, bool* clamped) {
  if (overlap < -kDomainTol || overlap > 1.0 + kDomainTol)
    throw InconsistentMeasurement(std::string(what) + " overlap " +
                                  std::to_string(overlap) + " lies outside [0, 1]");
  if (overlap > 1.0) {
    overlap = 1.0;
    set_flag(clamped);
  } else if (overlap < 0.0) {
    overlap = 0.0;
    set_flag(clamped);
  }
  return 1.0 - std::sqrt(overlap);
}

void validate(const Measurement& m) {
  if (!(m.g2 >= 0.0)) throw std::invalid_argument("extraction: g2 must be non-negative");
  if (!(m.visibility <= 1.0 + kDomainTol))
    throw std::invalid_argument("extraction: visibility must not exceed 1");
  if (!(m.xi_assumption >= 0.0 && m.xi_assumption <= 1.0))
    throw std::invalid_argument("extraction: xi must lie in [0, 1]");
}

}  // namespace

double effective_error_from_visibility(const Measurement& m, bool* clamped) {
  validate(m);
  double overlap = m.method == Method::a ? m.visibility * (1.0 + m.g2)
                                         : m.visibility + m.g2;
  return error_from_overlap(overlap, "effective", clamped);
}

double intrinsic_from_a(double v_a, double g2, bool* clamped) {
  if (!(g2 >= 0.0)) throw std::invalid_argument("extraction: g2 must be non-negative");
  return error_from_overlap(v_a * (1.0 + 2.0 * g2), "intrinsic", clamped);
}

double forward_visibility_b(double eps, double g2, double xi) {
  double x = 1.0 - eps;
  return x * x - (1.0 + x * x) / (1.0 + x * (1.0 - xi)) * g2;
}

double intrinsic_from_b(double v_b, double g2, double xi, bool* clamped) {
  if (!(g2 >= 0.0)) throw std::invalid_argument("extraction: g2 must be non-negative");
  if (!(xi >= 0.0 && xi <= 1.0))
    throw std::invalid_argument("extraction: xi must lie in [0, 1]");

  if (xi == 1.0) {
    if (g2 >= 1.0)
      throw InconsistentMeasurement("intrinsic overlap undefined for g2 >= 1");
    return error_from_overlap((v_b + g2) / (1.0 - g2), "intrinsic", clamped);
  }

  // solve V_B(x = 1 - eps) = v_b on [0, 1]; the forward map is monotone
  // increasing there for any g2 < 1/2
  auto f = [&](double x) {
    return x * x - (1.0 + x * x) / (1.0 + x * (1.0 - xi)) * g2 - v_b;
  };
  double prev = f(0.0);
  for (int i = 1; i <= 16; ++i) {
    double cur = f(i / 16.0);
    if (cur < prev - kNormTol)
      throw InconsistentMeasurement("forward visibility is not monotone; "
                                    "inversion is ambiguous for these inputs");
    prev = cur;
  }

  double lo = 0.0, hi = 1.0;
  double flo = f(lo), fhi = f(hi);
  if (fhi < 0.0) {
    if (fhi >= -kDomainTol) {
      set_flag(clamped);
      return 0.0;  // root pinned at x = 1
    }
    throw InconsistentMeasurement("visibility " + std::to_string(v_b) +
                                  " too large for g2 = " + std::to_string(g2));
  }
  if (flo > 0.0) {
    if (flo <= kDomainTol) {
      set_flag(clamped);
      return 1.0;  // root pinned at x = 0
    }
    throw InconsistentMeasurement("visibility " + std::to_string(v_b) +
                                  " too small for g2 = " + std::to_string(g2));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 1.0 - 0.5 * (lo + hi);
}

ExtractionResult extract(const Measurement& m) {
  validate(m);
  ExtractionResult r{};
  r.eps_tilde = effective_error_from_visibility(m, &r.flags.clamped_effective);
  r.overlap_effective = (1.0 - r.eps_tilde) * (1.0 - r.eps_tilde);
  if (m.method == Method::a) {
    if (m.xi_assumption != 1.0) {
      r.flags.intrinsic_unsupported = true;
      r.eps_intrinsic = std::numeric_limits<double>::quiet_NaN();
    } else {
      r.eps_intrinsic = intrinsic_from_a(m.visibility, m.g2, &r.flags.clamped_intrinsic);
    }
  } else {
    r.eps_intrinsic =
        intrinsic_from_b(m.visibility, m.g2, m.xi_assumption, &r.flags.clamped_intrinsic);
  }
  return r;
}

}  // namespace homsim

// Extraction tests: recovering effective and intrinsic errors from
// (visibility, g2) pairs, including clamping and inconsistency handling.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "homsim/extraction.hpp"

using namespace homsim;

TEST_CASE("effective error from either visibility definition") {
  // both methods describe the same source when V_A (1 + g2) = V_B + g2
  Measurement a{0.9025 / 1.04, Method::a, 0.04};
  Measurement b{0.8625, Method::b, 0.04};
  CHECK(effective_error_from_visibility(a) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(effective_error_from_visibility(b) == doctest::Approx(0.05).epsilon(1e-12));

  // zero g2: the visibility alone fixes the overlap
  Measurement clean{0.81, Method::b, 0.0};
  CHECK(effective_error_from_visibility(clean) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("overlaps slightly outside [0, 1] clamp with a flag") {
  bool clamped = false;
  Measurement nearly{1.0, Method::b, 1e-10};  // overlap = 1 + 1e-10
  CHECK(effective_error_from_visibility(nearly, &clamped) == doctest::Approx(0.0));
  CHECK(clamped);

  clamped = false;
  Measurement barely_negative{-1e-12, Method::b, 0.0};
  CHECK(effective_error_from_visibility(barely_negative, &clamped) == doctest::Approx(1.0));
  CHECK(clamped);

  // beyond the tolerance the measurement is rejected outright
  CHECK_THROWS_AS(effective_error_from_visibility({0.99, Method::b, 0.05}),
                  InconsistentMeasurement);
  CHECK_THROWS_AS(effective_error_from_visibility({-0.5, Method::b, 0.0}),
                  InconsistentMeasurement);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(effective_error_from_visibility({0.9, Method::b, -0.01}),
                  std::invalid_argument);
  CHECK_THROWS_AS(effective_error_from_visibility({1.1, Method::b, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(extract({0.9, Method::b, 0.02, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(intrinsic_from_a(0.9, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(intrinsic_from_b(0.9, -0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(intrinsic_from_b(0.9, 0.02, 1.2), std::invalid_argument);
}

TEST_CASE("intrinsic error, method A") {
  CHECK(intrinsic_from_a(0.95, 0.02) ==
        doctest::Approx(1.0 - std::sqrt(0.95 * 1.04)).epsilon(1e-14));
  CHECK(intrinsic_from_a(0.95, 0.02) == doctest::Approx(0.0060181).epsilon(1e-4));
  // visibility 1 at zero g2: a perfect source
  CHECK(intrinsic_from_a(1.0, 0.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(intrinsic_from_a(0.9, 0.2), InconsistentMeasurement);  // overlap > 1
}

TEST_CASE("intrinsic error, method B at xi = 1") {
  CHECK(intrinsic_from_b(0.93, 0.02, 1.0) ==
        doctest::Approx(1.0 - std::sqrt(0.95 / 0.98)).epsilon(1e-14));
  CHECK(intrinsic_from_b(0.93, 0.02, 1.0) == doctest::Approx(0.015425).epsilon(1e-4));
  CHECK_THROWS_AS(intrinsic_from_b(0.5, 1.0, 1.0), InconsistentMeasurement);
  CHECK_THROWS_AS(intrinsic_from_b(0.99, 0.05, 1.0), InconsistentMeasurement);
}

TEST_CASE("forward model and inversion round-trip across xi") {
  for (double xi : {0.0, 0.3, 0.7, 1.0}) {
    for (double eps : {0.0, 0.01, 0.05, 0.2}) {
      for (double g2 : {0.0, 0.005, 0.02, 0.08}) {
        double v = forward_visibility_b(eps, g2, xi);
        double back = intrinsic_from_b(v, g2, xi);
        CHECK(std::abs(back - eps) <= 1e-10);
      }
    }
  }
}

TEST_CASE("bisection endpoints clamp within tolerance") {
  // v just above V_B(eps = 0): the root sits a hair outside [0, 1]
  double v_top = forward_visibility_b(0.0, 0.02, 0.5) + 1e-11;
  bool clamped = false;
  CHECK(intrinsic_from_b(v_top, 0.02, 0.5, &clamped) == doctest::Approx(0.0));
  CHECK(clamped);
  // far above: inconsistent
  CHECK_THROWS_AS(intrinsic_from_b(forward_visibility_b(0.0, 0.02, 0.5) + 0.01, 0.02, 0.5),
                  InconsistentMeasurement);

  double v_bottom = forward_visibility_b(1.0, 0.02, 0.5) - 1e-11;
  clamped = false;
  CHECK(intrinsic_from_b(v_bottom, 0.02, 0.5, &clamped) == doctest::Approx(1.0));
  CHECK(clamped);
  CHECK_THROWS_AS(intrinsic_from_b(forward_visibility_b(1.0, 0.02, 0.5) - 0.01, 0.02, 0.5),
                  InconsistentMeasurement);
}

TEST_CASE("full extraction pipeline") {
  ExtractionResult r = extract({0.8625, Method::b, 0.04, 1.0});
  CHECK(r.eps_tilde == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(r.overlap_effective == doctest::Approx(0.9025).epsilon(1e-12));
  CHECK(r.eps_intrinsic == doctest::Approx(1.0 - std::sqrt(0.9025 / 0.96)).epsilon(1e-12));
  CHECK(r.eps_intrinsic == doctest::Approx(0.0304103).epsilon(1e-4));
  CHECK_FALSE(r.flags.clamped_effective);
  CHECK_FALSE(r.flags.clamped_intrinsic);
  CHECK_FALSE(r.flags.intrinsic_unsupported);

  // the intrinsic error never exceeds the effective one
  for (double v : {0.7, 0.8, 0.9}) {
    for (double g2 : {0.01, 0.05}) {
      ExtractionResult s = extract({v, Method::b, g2, 1.0});
      CHECK(s.eps_intrinsic <= s.eps_tilde + 1e-12);
    }
  }
}

TEST_CASE("method A refuses intrinsic extraction when xi != 1") {
  ExtractionResult r = extract({0.9, Method::a, 0.02, 0.5});
  CHECK(r.flags.intrinsic_unsupported);
  CHECK(std::isnan(r.eps_intrinsic));
  CHECK_FALSE(std::isnan(r.eps_tilde));  // the effective error is still defined

  ExtractionResult ok = extract({0.9, Method::a, 0.02, 1.0});
  CHECK_FALSE(ok.flags.intrinsic_unsupported);
  CHECK_FALSE(std::isnan(ok.eps_intrinsic));
}

TEST_CASE("methods agree on a consistent synthetic measurement") {
  // describe one source (eps_tilde = 0.05, g2 = 0.04) both ways
  double v_a = 0.9025 / 1.04;
  double v_b = 0.8625;
  ExtractionResult ra = extract({v_a, Method::a, 0.04, 1.0});
  ExtractionResult rb = extract({v_b, Method::b, 0.04, 1.0});
  CHECK(ra.eps_tilde == doctest::Approx(rb.eps_tilde).epsilon(1e-12));
  // the intrinsic estimates differ at O(g2^2) between the two inversions
  CHECK(std::abs(ra.eps_intrinsic - rb.eps_intrinsic) <= 5.0 * 0.04 * 0.04);
}

TEST_CASE("degenerate limits") {
  // g2 = 0: effective and intrinsic coincide for both methods
  ExtractionResult a = extract({0.9025, Method::a, 0.0, 1.0});
  CHECK(a.eps_tilde == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(a.eps_intrinsic == doctest::Approx(0.05).epsilon(1e-12));
  ExtractionResult b = extract({0.9025, Method::b, 0.0, 1.0});
  CHECK(b.eps_intrinsic == doctest::Approx(b.eps_tilde).epsilon(1e-12));

  // visibility 0 at g2 = 0: a fully distinguishable source
  ExtractionResult dark = extract({0.0, Method::b, 0.0, 1.0});
  CHECK(dark.eps_tilde == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dark.eps_intrinsic == doctest::Approx(1.0).epsilon(1e-12));
}

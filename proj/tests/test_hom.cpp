// Two-photon interference tests: threshold statistics, visibilities, and the
// leading-order closed forms.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "homsim/hom.hpp"

using namespace homsim;

namespace {

const InternalLabel T = InternalLabel::target();

struct SourcePair {
  SourceState a, b;
};

SourcePair make_pair(double eta, double p, double eps, double xi) {
  LabelAllocator labels;
  SourceParams params{eta, p, eps, xi};
  SourceState a = build_source(params, labels);
  SourceState b = build_source(params, labels);
  return {std::move(a), std::move(b)};
}

}  // namespace

TEST_CASE("threshold statistics of simple two-mode states") {
  MixedState both = MixedState::pure(PureState::basis(OccupationState().add(0, T).add(1, T)));
  HOMStats s1 = threshold_stats(both);
  CHECK(s1.p_joint == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s1.p_d1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hom_correlator(s1) == doctest::Approx(1.0).epsilon(1e-13));

  MixedState split = MixedState({{0.5, PureState::single_photon(0, T)},
                                 {0.5, PureState::single_photon(1, T)}});
  HOMStats s2 = threshold_stats(split);
  CHECK(s2.p_joint == doctest::Approx(0.0));
  CHECK(s2.p_d1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s2.p_d2 == doctest::Approx(0.5).epsilon(1e-14));

  // one-sided state: the empty detector makes the correlator undefined
  MixedState one_sided = MixedState::pure(PureState::single_photon(0, T));
  CHECK_THROWS_AS(hom_correlator(threshold_stats(one_sided)), std::invalid_argument);
}

TEST_CASE("correlator and visibility definitions") {
  HOMStats stats{0.125, 0.5, 0.5};
  CHECK(hom_correlator(stats) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(visibility_b(stats) == doctest::Approx(0.0).epsilon(1e-14));

  HOMStats ref{0.5, 0.75, 0.75};
  CHECK(visibility_a(stats, ref) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK_THROWS_AS(visibility_a(stats, HOMStats{0.0, 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("perfect pair shows a full dip") {
  SourcePair pair = make_pair(1.0, 0.0, 0.0, 1.0);
  HOMStats stats = hom_stats(pair.a, pair.b);
  CHECK(stats.p_joint <= 1e-15);
  CHECK(stats.p_d1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stats.p_d2 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(visibility_b(stats) == doctest::Approx(1.0).epsilon(1e-12));

  // against the distinguishable reference the visibility is exactly one
  HOMStats ref = reference_stats(pair.a, pair.b);
  CHECK(ref.p_joint == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ref.p_d1 == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(visibility_a(stats, ref) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fully distinguishable pair") {
  SourcePair pair = make_pair(1.0, 0.0, 1.0, 1.0);
  HOMStats stats = hom_stats(pair.a, pair.b);
  CHECK(stats.p_joint == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stats.p_d1 == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(stats.p_d2 == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(hom_correlator(stats) == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  CHECK(visibility_b(stats) == doctest::Approx(-7.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("sources must come from one label allocator") {
  LabelAllocator la, lb;
  SourceState a = build_source({0.5, 0.01, 0.02, 1.0}, la);
  SourceState b = build_source({0.5, 0.01, 0.02, 1.0}, lb);  // ids collide
  CHECK_THROWS_AS(hom_stats(a, b), std::invalid_argument);
  CHECK_THROWS_AS(reference_stats(a, b), std::invalid_argument);
}

TEST_CASE("low-loss coincidence kernel matches the closed form") {
  const double eta = 1e-3;
  SourcePair pair = make_pair(eta, 0.02, 0.03, 1.0);
  HOMStats stats = hom_stats(pair.a, pair.b);

  double eps_tilde = simulated_effective_error(pair.a);
  double g2 = g2_from_probabilities(pair.a.probability(1), pair.a.probability(2));
  double x2 = (1.0 - eps_tilde) * (1.0 - eps_tilde);

  // the eta -> 0 kernels; residuals are O(eta^3)
  CHECK(std::abs(stats.p_joint - 0.5 * eta * eta * (1.0 - x2 + g2)) <= 2e-9);
  CHECK(std::abs(stats.p_d1 - (eta - 0.25 * eta * eta * (1.0 + x2 + g2))) <= 1e-8);
  CHECK(stats.p_d1 == doctest::Approx(stats.p_d2).epsilon(1e-12));

  // three-photon events enter the correlator at relative order eta*g2, so
  // the closed form is only accurate to O(eta*(g2 + eta))
  double tol = 3.0 * eta * (g2 + eta);
  HOMPrediction pred = predict_hom(eps_tilde, g2, eta);
  CHECK(std::abs(hom_correlator(stats) - pred.g_hom) <= tol);
  CHECK(std::abs(visibility_b(stats) - pred.v_b) <= 2.0 * tol);

  HOMStats ref = reference_stats(pair.a, pair.b);
  CHECK(std::abs(visibility_a(stats, ref) - pred.v_a) <= tol);

  // with no noise photons the reference coincidence rate is exactly eta^2/2
  SourcePair clean = make_pair(eta, 0.0, 0.0, 1.0);
  HOMStats clean_ref = reference_stats(clean.a, clean.b);
  CHECK(clean_ref.p_joint == doctest::Approx(0.5 * eta * eta).epsilon(1e-10));
}

TEST_CASE("coincidences never exceed either marginal") {
  for (auto [eta, p, eps, xi] : std::vector<std::array<double, 4>>{
           {0.9, 0.02, 0.1, 0.5}, {0.4, 0.01, 0.0, 1.0}, {1.0, 0.25, 0.3, 0.3}}) {
    SourcePair pair = make_pair(eta, p, eps, xi);
    HOMStats stats = hom_stats(pair.a, pair.b);
    CHECK(stats.p_joint <= stats.p_d1 + 1e-12);
    CHECK(stats.p_joint <= stats.p_d2 + 1e-12);
    CHECK(stats.p_d1 == doctest::Approx(stats.p_d2).epsilon(1e-12));
  }
}

TEST_CASE("closed-form predictions at pinned points") {
  HOMPrediction ideal = predict_hom(0.0, 0.0, 0.0);
  CHECK(ideal.g_hom == doctest::Approx(0.0));
  CHECK(ideal.v_a == doctest::Approx(1.0));
  CHECK(ideal.v_b == doctest::Approx(1.0));

  HOMPrediction flat = predict_hom(0.05, 0.04, 0.0);
  CHECK(flat.g_hom == doctest::Approx(0.06875).epsilon(1e-12));
  CHECK(flat.v_a == doctest::Approx(0.9025 / 1.04).epsilon(1e-12));
  CHECK(flat.v_b == doctest::Approx(0.8625).epsilon(1e-12));

  HOMPrediction lossy = predict_hom(0.05, 0.04, 0.1);
  CHECK(lossy.v_b == doctest::Approx(0.8532253125).epsilon(1e-12));
  CHECK(lossy.g_hom == doctest::Approx(0.07338734375).epsilon(1e-12));
  CHECK(lossy.v_b == doctest::Approx(1.0 - 2.0 * lossy.g_hom).epsilon(1e-13));
  // the reference-normalized visibility does not depend on eta
  CHECK(lossy.v_a == doctest::Approx(flat.v_a).epsilon(1e-14));

  HOMPrediction bright = predict_hom(0.05, 0.04, 1.0);
  CHECK(bright.p_joint == doctest::Approx(0.06875).epsilon(1e-12));
  CHECK(bright.p_d == doctest::Approx(0.514375).epsilon(1e-12));

  CHECK_THROWS_AS(predict_hom(-0.1, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(predict_hom(0.0, 1.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(predict_hom(0.0, 0.0, 1.5), std::invalid_argument);
}

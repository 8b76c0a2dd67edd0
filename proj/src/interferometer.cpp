#include "homsim/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace homsim {

UnitaryMatrix::UnitaryMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw std::invalid_argument("UnitaryMatrix: matrix must be square and non-empty");
  if (unitarity_residual() > kNormTol)
    throw std::invalid_argument("UnitaryMatrix: matrix is not unitary (residual " +
                                std::to_string(unitarity_residual()) + ")");
}

double UnitaryMatrix::unitarity_residual() const {
  Eigen::MatrixXcd r = m_ * m_.adjoint() - Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
  return r.cwiseAbs().maxCoeff();
}

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(m_.adjoint()); }

UnitaryMatrix UnitaryMatrix::then(const UnitaryMatrix& next) const {
  if (dim() != next.dim())
    throw std::invalid_argument("UnitaryMatrix::then: dimension mismatch");
  // row convention (a^dag_i -> sum_j U_ij a^dag_j): applying *this first and
  // `next` second composes as the matrix product this * next
  return UnitaryMatrix(m_ * next.m_);
}

UnitaryMatrix beam_splitter(double reflectivity) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
    throw std::invalid_argument("beam_splitter: reflectivity must lie in [0, 1]");
  double r = std::sqrt(reflectivity);
  double t = std::sqrt(1.0 - reflectivity);
  Eigen::MatrixXcd m(2, 2);
  m << r, t, t, -r;
  return UnitaryMatrix(std::move(m));
}

UnitaryMatrix emulator_unitary(double eta, double p) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("emulator_unitary: eta must lie in [0, 1]");
  if (!(p >= 0.0 && p <= 0.5))
    throw std::invalid_argument("emulator_unitary: p must lie in [0, 1/2]");
  Eigen::MatrixXcd m(3, 3);
  m << std::sqrt(eta * (1.0 - p)), std::sqrt(p), std::sqrt((1.0 - eta) * (1.0 - p)),
      std::sqrt(eta * p), -std::sqrt(1.0 - p), std::sqrt((1.0 - eta) * p),
      std::sqrt(1.0 - eta), 0.0, -std::sqrt(eta);
  return UnitaryMatrix(std::move(m));
}

namespace {

double factorial(int n) {
  static const double table[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800};
  if (n < 0 || n >= static_cast<int>(sizeof(table) / sizeof(table[0])))
    throw std::invalid_argument("factorial: occupation too large");
  return table[n];
}

double slot_factorial(const OccupationState& occ) {
  double f = 1.0;
  for (const auto& [slot, c] : occ.slots()) f *= factorial(c);
  return f;
}

}  // namespace

PureState apply_unitary(const UnitaryMatrix& u, const PureState& psi) {
  const int dim = u.dim();
  PureState::AmplitudeMap out;
  for (const auto& [occ, amp] : psi.amplitudes()) {
    std::vector<PhotonMode> photons;
    for (const auto& [slot, c] : occ.slots()) {
      if (slot.mode < 0 || slot.mode >= dim)
        throw std::invalid_argument("apply_unitary: state occupies mode " +
                                    std::to_string(slot.mode) + " outside the " +
                                    std::to_string(dim) + "-mode unitary");
      for (int k = 0; k < c; ++k) photons.push_back(slot);
    }
    const int n = static_cast<int>(photons.size());
    const double in_fact = slot_factorial(occ);

    // expand the product of transformed creation operators: one term per
    // assignment of photons to output modes
    std::map<OccupationState, Complex> paths;
    std::vector<int> dest(n, 0);
    bool done = false;
    while (!done) {
      // multiply the matrix entries in (input, output) order so the product
      // does not depend on how same-mode photons happen to be listed
      std::vector<std::pair<int, int>> legs(n);
      for (int i = 0; i < n; ++i) legs[i] = {photons[i].mode, dest[i]};
      std::sort(legs.begin(), legs.end());
      Complex path = 1.0;
      for (const auto& [in, outm] : legs) path *= u.entry(in, outm);
      if (path != Complex{0.0}) {
        OccupationState occ_out;
        for (int i = 0; i < n; ++i) occ_out.add(dest[i], photons[i].label);
        paths[std::move(occ_out)] += path;
      }
      done = true;
      for (int i = 0; i < n; ++i) {
        if (++dest[i] < dim) {
          done = false;
          break;
        }
        dest[i] = 0;
      }
    }

    for (auto& [occ_out, coeff] : paths) {
      Complex term = amp * coeff * std::sqrt(slot_factorial(occ_out) / in_fact);
      out[occ_out] += term;
    }
  }
  return PureState::checked(std::move(out));
}

MixedState apply_unitary(const UnitaryMatrix& u, const MixedState& rho) {
  std::vector<WeightedPure> out;
  out.reserve(rho.members().size());
  for (const auto& [w, psi] : rho.members()) out.push_back({w, apply_unitary(u, psi)});
  return MixedState(std::move(out));
}

}  // namespace homsim

#pragma once
//
// Linear-optical unitaries on external modes and their exact action on
// few-photon states. Internal labels ride along unchanged: a creation
// operator on (mode i, label s) maps to sum_j U(i,j) a^dag_(j,s).
//

#include <Eigen/Dense>

#include "homsim/fock.hpp"

namespace homsim {

/// Square complex matrix, verified unitary to kNormTol on construction.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Eigen::MatrixXcd m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Complex entry(int i, int j) const { return m_(i, j); }
  double unitarity_residual() const;  // max |(U U^dag - I)_ij|

  UnitaryMatrix adjoint() const;
  /// Circuit composition: apply *this first, then `next`.
  UnitaryMatrix then(const UnitaryMatrix& next) const;

 private:
  Eigen::MatrixXcd m_;
};

/// Two-mode coupler with reflectivity R:
///   [[sqrt(R), sqrt(1-R)], [sqrt(1-R), -sqrt(R)]].
UnitaryMatrix beam_splitter(double reflectivity);

/// Three-mode imperfect-source channel: mode 0 carries the signal photon,
/// mode 1 the noise photon, mode 2 vacuum. Transmission eta, noise-admixture
/// probability p.
UnitaryMatrix emulator_unitary(double eta, double p);

PureState apply_unitary(const UnitaryMatrix& u, const PureState& psi);
MixedState apply_unitary(const UnitaryMatrix& u, const MixedState& rho);

}  // namespace homsim

#pragma once
//
// Dense density-matrix helpers for small mixed states.
//

#include <Eigen/Dense>
#include <vector>

#include "homsim/fock.hpp"

namespace homsim {

/// Sorted union of the basis states appearing in the given ensembles.
std::vector<OccupationState> support_basis(const std::vector<const MixedState*>& states);

/// Density matrix of `state` in the given basis (which must contain its support).
Eigen::MatrixXcd density_matrix(const MixedState& state,
                                const std::vector<OccupationState>& basis);

/// Trace distance (1/2) * ||rho_a - rho_b||_1, computed exactly on the joint
/// support basis.
double trace_distance(const MixedState& a, const MixedState& b);

}  // namespace homsim

#include "homsim/density.hpp"

#include <map>
#include <stdexcept>

namespace homsim {

std::vector<OccupationState> support_basis(const std::vector<const MixedState*>& states) {
  std::set<OccupationState> keys;
  for (const MixedState* s : states)
    for (const auto& [w, psi] : s->members())
      for (const auto& [occ, amp] : psi.amplitudes()) keys.insert(occ);
  return {keys.begin(), keys.end()};
}

Eigen::MatrixXcd density_matrix(const MixedState& state,
                                const std::vector<OccupationState>& basis) {
  std::map<OccupationState, int> index;
  for (int i = 0; i < static_cast<int>(basis.size()); ++i) index[basis[i]] = i;
  const int d = static_cast<int>(basis.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [w, psi] : state.members()) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    for (const auto& [occ, amp] : psi.amplitudes()) {
      auto it = index.find(occ);
      if (it == index.end())
        throw std::invalid_argument("density_matrix: basis does not cover the state");
      v(it->second) = amp;
    }
    rho += w * v * v.adjoint();
  }
  return rho;
}

double trace_distance(const MixedState& a, const MixedState& b) {
  std::vector<OccupationState> basis = support_basis({&a, &b});
  Eigen::MatrixXcd delta = density_matrix(a, basis) - density_matrix(b, basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(delta);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("trace_distance: eigendecomposition failed");
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace homsim

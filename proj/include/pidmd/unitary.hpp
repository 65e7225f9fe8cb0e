#ifndef PIDMD_UNITARY_HPP
#define PIDMD_UNITARY_HPP

#include <optional>

#include "pidmd/types.hpp"

namespace pidmd {

// Energy-preserving operator: op is unitary on the fitted space. When a POD
// rank p was requested the fit runs in the coordinates of X's leading p left
// singular vectors, stored in pod_basis (empty when fitting the full space).
struct UnitaryModel {
  Matrix op;
  Matrix pod_basis;
  bool unique = true;        // Y X^* had full rank at tolerance
  bool undetermined = false; // Y X^* was zero; identity returned

  Eigen::Index fitted_dimension() const { return op.rows(); }
};

// Orthogonal Procrustes solution: with the full SVD U S V^* = Y X^*, the
// closest unitary map is A = U V^*. Singular-vector phases are fixed so each
// left singular vector has its largest-magnitude entry real and positive,
// making the rank-deficient branch deterministic.
UnitaryModel fit_unitary(const SnapshotPair& pair,
                         std::optional<Eigen::Index> pod_rank = std::nullopt);

Matrix materialize(const UnitaryModel& model);

}  // namespace pidmd

#endif  // PIDMD_UNITARY_HPP

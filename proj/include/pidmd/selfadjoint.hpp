#ifndef PIDMD_SELFADJOINT_HPP
#define PIDMD_SELFADJOINT_HPP

#include <optional>

#include "pidmd/types.hpp"

namespace pidmd {

enum class SymmetryKind : unsigned char { kSymmetric, kSkew };

// Hermitian (or skew-Hermitian) operator in factored form A = U L U^*, where
// U holds the leading left singular vectors of X and L inherits the symmetry.
struct SymmetricModel {
  Matrix basis;  // n x q
  Matrix core;   // q x q, L^* = L (or -L)
  SymmetryKind kind = SymmetryKind::kSymmetric;
  Eigen::Index rank = 0;
  bool rank_truncated = false;
};

// Symmetric Procrustes solution. With X = U S V^* truncated at q and
// C = U^* Y V, the core entries are
//   symmetric:  L_ij = (s_i conj(C_ji) + s_j C_ij) / (s_i^2 + s_j^2)
//   skew:       L_ij = (-s_i conj(C_ji) + s_j C_ij) / (s_i^2 + s_j^2)
// The requested rank is clamped to the numerical rank of X.
SymmetricModel fit_symmetric(const SnapshotPair& pair,
                             SymmetryKind kind = SymmetryKind::kSymmetric,
                             std::optional<Eigen::Index> rank = std::nullopt);

// Exactly self-adjoint by construction: the upper triangle is computed and the
// lower triangle mirrored.
Matrix materialize(const SymmetricModel& model);

// Entrywise variance of the identified operator under unit Gaussian noise in
// Y, for real X truncated at rank r:
//   unconstrained:  Var(A_ij) = sum_l U(j,l)^2 / s_l^2
//   symmetric:      Var(A_ij) = 1/2 sum_{k,l} (U(i,k)U(j,l)+U(i,l)U(j,k))^2 / (s_k^2+s_l^2)
// The symmetric profile never exceeds the unconstrained one.
RealMatrix variance_profile_exact(const Matrix& x, Eigen::Index r);
RealMatrix variance_profile_symmetric(const Matrix& x, Eigen::Index r);

}  // namespace pidmd

#endif  // PIDMD_SELFADJOINT_HPP

#ifndef PIDMD_EXACT_DMD_HPP
#define PIDMD_EXACT_DMD_HPP

#include "pidmd/types.hpp"

namespace pidmd {

// Reduced-order model from a truncated SVD of X: basis U_r, reduced operator
// Ahat = U_r^* Y V_r inv(Sigma_r), its eigendecomposition, lifted modes
// Psi = Y V_r inv(Sigma_r) Psi_hat, and amplitudes b = pinv(Psi) x_1.
struct ExactDmdModel {
  Matrix basis;          // U_r, n x r
  Matrix op_factor;      // Y V_r inv(Sigma_r); the full-order operator is op_factor U_r^*
  Matrix reduced_op;     // r x r
  Vector eigenvalues;    // canonical order: |lambda| desc, then Re desc
  Matrix reduced_modes;  // eigenvectors of reduced_op, column-aligned with eigenvalues
  Matrix modes;          // n x r
  Vector amplitudes;
  double dt = 1.0;
  Pairing pairing = Pairing::kDiscrete;
  Eigen::Index requested_rank = 0;
  Eigen::Index rank = 0;       // effective rank actually used
  bool rank_truncated = false; // requested rank exceeded the numerical rank of X
};

ExactDmdModel fit_exact(const SnapshotPair& pair, Eigen::Index r);

// Columns j = 1..steps of Psi Lambda^{j-1} b.
Matrix reconstruct(const ExactDmdModel& model, Eigen::Index steps);

}  // namespace pidmd

#endif  // PIDMD_EXACT_DMD_HPP

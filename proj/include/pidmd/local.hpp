#ifndef PIDMD_LOCAL_HPP
#define PIDMD_LOCAL_HPP

#include <vector>

#include "pidmd/spectrum.hpp"
#include "pidmd/types.hpp"

namespace pidmd {

// Operator with per-row band structure. Row i carries coefficients only for
// the columns in cols[i]; every other entry of the materialized matrix is an
// exact zero. Band windows may wrap around when periodic.
struct BandedModel {
  Eigen::Index n = 0;
  bool periodic = false;
  std::vector<Eigen::Index> lower_widths;
  std::vector<Eigen::Index> upper_widths;
  std::vector<std::vector<Eigen::Index>> cols;
  std::vector<Eigen::RowVectorXcd> coeffs;
  std::vector<RowStatus> row_status;
  bool condition_warning = false;
};

// Soft locality penalty: row i of the fit is ridge-regularized by the
// nonnegative weights lambda * H.row(i).
struct LocalityPenalty {
  RealMatrix H;
  double lambda = 0.0;
};

// Per-row least squares restricted to the band window [i-l(i), i+u(i)]
// (wrapped modulo n when periodic). Rows whose windowed data is rank
// deficient take the minimum-norm solution and are flagged kUndetermined.
BandedModel fit_banded(const SnapshotPair& pair, const std::vector<Eigen::Index>& lower,
                       const std::vector<Eigen::Index>& upper, bool periodic = false);
BandedModel fit_banded(const SnapshotPair& pair, Eigen::Index lower, Eigen::Index upper,
                       bool periodic = false);

// fit_banded with l = u = 1.
BandedModel fit_tridiagonal(const SnapshotPair& pair, bool periodic = false);

// Tridiagonal fit constrained to share sub- and super-diagonal values,
// A(i,i+1) = A(i+1,i). The 2n-1 coupled parameters are found from one
// Hermitian normal-equation solve; a singular system falls back to the
// minimum-norm solution and sets condition_warning.
BandedModel fit_symmetric_tridiagonal(const SnapshotPair& pair);

// Per-row total least squares over the tridiagonal window, for noise in both
// X and Y. Rows where the TLS solution does not exist fall back to plain
// least squares and are flagged kTlsDegenerate.
BandedModel fit_tridiagonal_tls(const SnapshotPair& pair);

// Row i solves y_i = a_i X with ridge weights lambda * H.row(i) on |a_i|^2:
//   a_i = y_i X^* (X X^* + diag(lambda H.row(i)))^{-1}
// Each row needs its own n x n solve, so the total cost is O(n^4); sizes
// beyond 200 states are rejected unless allow_large is set.
Matrix fit_regularized_local(const SnapshotPair& pair, const LocalityPenalty& penalty,
                             bool allow_large = false);

// Penalty weights growing with separation, H(i,j) = exp(|xi_i - xi_j| / (2 sigma^2)),
// so distant couplings are suppressed hardest.
LocalityPenalty make_gaussian_locality(const Grid& grid, double sigma, double lambda);

Matrix materialize(const BandedModel& model);

// Dense eigensolve of the materialized operator, canonically ordered.
Spectrum banded_spectrum(const BandedModel& model);

}  // namespace pidmd

#endif  // PIDMD_LOCAL_HPP

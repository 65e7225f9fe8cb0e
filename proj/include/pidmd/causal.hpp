#ifndef PIDMD_CAUSAL_HPP
#define PIDMD_CAUSAL_HPP

#include <vector>

#include "pidmd/spectrum.hpp"
#include "pidmd/types.hpp"

namespace pidmd {

enum class TriangularMethod : unsigned char { kNaive, kFastUpdate, kRqStable };

// Upper-triangular operator stored as ragged rows: rows[i] holds the
// coefficients A(i, i..n-1). Everything below the diagonal is an exact zero.
struct TriangularModel {
  Eigen::Index n = 0;
  std::vector<Eigen::RowVectorXcd> rows;
  std::vector<RowStatus> row_status;
  TriangularMethod method = TriangularMethod::kNaive;
};

// Row i solves min ||y_i - a X_{i:n,:}|| over a = A(i, i..n-1).
//   naive        independent pseudoinverse solve per row.
//   fast_update  one pseudoinverse maintained across rows by rank-1 prepend
//                updates, rebuilt from scratch every 50 rows. Fast but can
//                drift on ill-conditioned data.
//   rq_stable    works on the RQ factors X = R Q: row solves against the
//                triangle R run by a backward pivot recursion, with pivots
//                below 1e-10 * max|R_ii| flagged kSmallPivot. With fewer
//                samples than states the rows above the triangle are
//                underdetermined; they take the minimum-norm solution via a
//                running Gram inverse and are flagged kUndetermined.
TriangularModel fit_triangular(const SnapshotPair& pair,
                               TriangularMethod method = TriangularMethod::kNaive);

// Lower-triangular fit by reversing the state order, fitting upper
// triangular, and reversing back.
Matrix fit_lower_triangular(const SnapshotPair& pair,
                            TriangularMethod method = TriangularMethod::kNaive);

Matrix materialize(const TriangularModel& model);

// The eigenvalues of a triangular matrix are its diagonal entries. Modes come
// from back-substitution of (A - lambda I) v = 0. Eigenvalues from flagged
// rows, or whose back-substitution hit a near-defective denominator, are
// marked unreliable.
Spectrum triangular_eigenvalues(const TriangularModel& model);

}  // namespace pidmd

#endif  // PIDMD_CAUSAL_HPP

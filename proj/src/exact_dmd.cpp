#include "pidmd/exact_dmd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pidmd/linalg.hpp"

namespace pidmd {

ExactDmdModel fit_exact(const SnapshotPair& pair, Eigen::Index r) {
  pair.validate();
  if (r < 1) throw InvalidArgument("rank must be at least 1");

  Eigen::JacobiSVD<Matrix> svd(pair.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::Index max_rank = numerical_rank(sv);
  if (max_rank == 0) throw DegenerateInput("X is numerically zero");

  ExactDmdModel model;
  model.requested_rank = r;
  model.rank = std::min(r, max_rank);
  model.rank_truncated = model.rank < r;
  model.dt = pair.dt;
  model.pairing = pair.pairing;

  const Eigen::Index q = model.rank;
  model.basis = svd.matrixU().leftCols(q);
  model.op_factor =
      pair.Y * svd.matrixV().leftCols(q) * sv.head(q).cwiseInverse().cast<cd>().asDiagonal();
  model.reduced_op = model.basis.adjoint() * model.op_factor;

  Eigen::ComplexEigenSolver<Matrix> eig(model.reduced_op);
  const auto order = canonical_eigen_order(eig.eigenvalues());
  model.eigenvalues.resize(q);
  model.reduced_modes.resize(q, q);
  for (Eigen::Index k = 0; k < q; ++k) {
    model.eigenvalues[k] = eig.eigenvalues()[order[static_cast<std::size_t>(k)]];
    model.reduced_modes.col(k) = eig.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  normalize_column_phases(model.reduced_modes);
  model.modes = model.op_factor * model.reduced_modes;
  model.amplitudes = pinv(model.modes) * pair.X.col(0);
  return model;
}

Matrix reconstruct(const ExactDmdModel& model, Eigen::Index steps) {
  if (steps < 1) throw InvalidArgument("need at least one reconstruction step");
  Matrix out(model.modes.rows(), steps);
  Vector scaled = model.amplitudes;
  for (Eigen::Index j = 0; j < steps; ++j) {
    out.col(j) = model.modes * scaled;
    scaled = scaled.cwiseProduct(model.eigenvalues);
  }
  return out;
}

}  // namespace pidmd

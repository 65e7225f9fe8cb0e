#include "pidmd/unitary.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "pidmd/linalg.hpp"

namespace pidmd {

UnitaryModel fit_unitary(const SnapshotPair& pair, std::optional<Eigen::Index> pod_rank) {
  pair.validate();
  const Eigen::Index n = pair.X.rows();
  const Eigen::Index m = pair.X.cols();

  UnitaryModel model;
  Matrix xw = pair.X;
  Matrix yw = pair.Y;
  if (pod_rank) {
    if (*pod_rank < 1 || *pod_rank > std::min(n, m))
      throw InvalidArgument("pod rank must lie in [1, min(n, m)]");
    Eigen::JacobiSVD<Matrix> svd(pair.X, Eigen::ComputeThinU);
    model.pod_basis = svd.matrixU().leftCols(*pod_rank);
    xw = model.pod_basis.adjoint() * pair.X;
    yw = model.pod_basis.adjoint() * pair.Y;
  }

  const Matrix b = yw * xw.adjoint();
  const Eigen::Index p = b.rows();
  if (b.norm() == 0.0) {
    model.op = Matrix::Identity(p, p);
    model.unique = false;
    model.undetermined = true;
    return model;
  }

  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix u = svd.matrixU();
  Matrix v = svd.matrixV();
  // Joint phase fix per singular pair; keeps U S V^* = B while pinning the
  // representation of any degenerate subspace.
  for (Eigen::Index k = 0; k < p; ++k) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < p; ++i)
      if (std::abs(u(i, k)) > best) {
        best = std::abs(u(i, k));
        imax = i;
      }
    if (best > 0.0) {
      const cd phase = std::conj(u(imax, k)) / best;
      u.col(k) *= phase;
      v.col(k) *= phase;
    }
  }
  model.op = u * v.adjoint();
  model.unique = numerical_rank(svd.singularValues()) == p;
  return model;
}

Matrix materialize(const UnitaryModel& model) {
  if (model.pod_basis.size() == 0) return model.op;
  return model.pod_basis * model.op * model.pod_basis.adjoint();
}

}  // namespace pidmd

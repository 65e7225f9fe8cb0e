#include "pidmd/selfadjoint.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "pidmd/linalg.hpp"

namespace pidmd {

SymmetricModel fit_symmetric(const SnapshotPair& pair, SymmetryKind kind,
                             std::optional<Eigen::Index> rank) {
  pair.validate();
  Eigen::JacobiSVD<Matrix> svd(pair.X,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index max_rank = numerical_rank(svd.singularValues());
  if (max_rank == 0) throw DegenerateInput("X is numerically zero");

  Eigen::Index q = rank.value_or(max_rank);
  if (rank && *rank < 1) throw InvalidArgument("rank must be at least 1");
  bool truncated = false;
  if (q > max_rank) {
    q = max_rank;
    truncated = true;
  }

  const Matrix u = svd.matrixU().leftCols(q);
  const Matrix v = svd.matrixV().leftCols(q);
  const RealVector s = svd.singularValues().head(q);
  const Matrix c = u.adjoint() * pair.Y * v;

  const double sign = (kind == SymmetryKind::kSymmetric) ? 1.0 : -1.0;
  Matrix core(q, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double denom = s(i) * s(i) + s(j) * s(j);
      core(i, j) = (sign * s(i) * std::conj(c(j, i)) + s(j) * c(i, j)) / denom;
      if (i < j) core(j, i) = sign * std::conj(core(i, j));
    }
    if (kind == SymmetryKind::kSymmetric)
      core(j, j) = cd(core(j, j).real(), 0.0);
    else
      core(j, j) = cd(0.0, core(j, j).imag());
  }

  SymmetricModel model;
  model.basis = u;
  model.core = core;
  model.kind = kind;
  model.rank = q;
  model.rank_truncated = truncated;
  return model;
}

Matrix materialize(const SymmetricModel& model) {
  const Eigen::Index n = model.basis.rows();
  const Matrix half = model.basis * model.core;  // n x q
  const double sign = (model.kind == SymmetryKind::kSymmetric) ? 1.0 : -1.0;
  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      // A(i, j) = sum_k half(i, k) * conj(basis(j, k)); dot() conjugates its
      // first operand, so the basis row goes first.
      a(i, j) = model.basis.row(j).dot(half.row(i));
      if (i < j) a(j, i) = sign * std::conj(a(i, j));
    }
    if (model.kind == SymmetryKind::kSymmetric)
      a(j, j) = cd(a(j, j).real(), 0.0);
    else
      a(j, j) = cd(0.0, a(j, j).imag());
  }
  return a;
}

namespace {

struct RealSvdFactors {
  RealMatrix u;
  RealVector s;
};

RealSvdFactors real_svd_factors(const Matrix& x, Eigen::Index r) {
  if (x.size() == 0) throw InvalidArgument("X is empty");
  if (x.imag().cwiseAbs().maxCoeff() != 0.0)
    throw InvalidArgument("variance profiles require real X");
  const RealMatrix xr = x.real();
  Eigen::JacobiSVD<RealMatrix> svd(xr, Eigen::ComputeThinU);
  const Eigen::Index max_rank = numerical_rank(svd.singularValues());
  if (r < 1 || r > max_rank)
    throw InvalidArgument("rank exceeds the numerical rank of X");
  return {svd.matrixU().leftCols(r), svd.singularValues().head(r)};
}

}  // namespace

RealMatrix variance_profile_exact(const Matrix& x, Eigen::Index r) {
  const RealSvdFactors f = real_svd_factors(x, r);
  const Eigen::Index n = x.rows();
  RealVector col_var = RealVector::Zero(n);
  for (Eigen::Index l = 0; l < r; ++l)
    col_var += (f.u.col(l).array().square() / (f.s(l) * f.s(l))).matrix();
  RealMatrix var(n, n);
  for (Eigen::Index i = 0; i < n; ++i) var.row(i) = col_var.transpose();
  return var;
}

RealMatrix variance_profile_symmetric(const Matrix& x, Eigen::Index r) {
  const RealSvdFactors f = real_svd_factors(x, r);
  const Eigen::Index n = x.rows();
  RealMatrix var = RealMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < r; ++k) {
    for (Eigen::Index l = 0; l < r; ++l) {
      const double denom = f.s(k) * f.s(k) + f.s(l) * f.s(l);
      // (U_ik U_jl + U_il U_jk)^2 accumulated over all i, j at once
      const RealMatrix cross = f.u.col(k) * f.u.col(l).transpose() +
                               f.u.col(l) * f.u.col(k).transpose();
      var += cross.array().square().matrix() / (2.0 * denom);
    }
  }
  return var;
}

}  // namespace pidmd

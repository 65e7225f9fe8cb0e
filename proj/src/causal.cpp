#include "pidmd/causal.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "pidmd/linalg.hpp"

namespace pidmd {

namespace {

constexpr Eigen::Index kRefreshInterval = 50;

void fit_naive(const SnapshotPair& pair, TriangularModel& model) {
  const Eigen::Index n = pair.states();
  for (Eigen::Index i = 0; i < n; ++i) {
    const RowLsSolution sol = solve_row_ls(pair.X.bottomRows(n - i), pair.Y.row(i));
    model.rows[static_cast<std::size_t>(i)] = sol.coeffs;
    if (sol.rank < n - i) model.row_status[static_cast<std::size_t>(i)] = RowStatus::kUndetermined;
  }
}

// Pseudoinverse with the numerical rank as a side result.
Matrix pinv_with_rank(const Matrix& a, Eigen::Index& rank) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  rank = numerical_rank(svd.singularValues());
  Matrix ut = svd.matrixU().leftCols(rank).adjoint();
  for (Eigen::Index l = 0; l < rank; ++l) ut.row(l) /= svd.singularValues()(l);
  return svd.matrixV().leftCols(rank) * ut;
}

// Maintains P = pinv(X_{j:n,:}) while rows are prepended, using the rank-1
// prepend identity: with d = c P and residual xhat = c - d X_{j+1:n,:},
//   P_new = [b, P - b d],  b = xhat^* / ||xhat||^2        (independent row)
//           [b, P - b d],  b = P d^* / (1 + ||d||^2)      (dependent row)
void fit_fast(const SnapshotPair& pair, TriangularModel& model) {
  const Eigen::Index n = pair.states();
  const Eigen::Index m = pair.samples();
  Matrix p = Matrix::Zero(m, n);

  Eigen::Index tracked_rank = 0;
  {
    const Eigen::RowVectorXcd c = pair.X.row(n - 1);
    const double nc2 = c.squaredNorm();
    if (nc2 > 0) {
      p.col(n - 1) = c.adjoint() / nc2;
      tracked_rank = 1;
    } else {
      model.row_status[static_cast<std::size_t>(n - 1)] = RowStatus::kUndetermined;
    }
    model.rows[static_cast<std::size_t>(n - 1)] = pair.Y.row(n - 1) * p.col(n - 1);
  }

  Eigen::Index since_refresh = 0;
  for (Eigen::Index j = n - 2; j >= 0; --j) {
    const Eigen::Index k = n - 1 - j;
    ++since_refresh;
    if (since_refresh >= kRefreshInterval) {
      Eigen::Index rank = 0;
      p.middleCols(j, n - j) = pinv_with_rank(pair.X.bottomRows(n - j), rank);
      if (rank == tracked_rank)
        model.row_status[static_cast<std::size_t>(j)] = RowStatus::kUndetermined;
      tracked_rank = rank;
      since_refresh = 0;
    } else {
      const Eigen::RowVectorXcd c = pair.X.row(j);
      const Eigen::RowVectorXcd d = c * p.middleCols(j + 1, k);
      const Eigen::RowVectorXcd xhat = c - d * pair.X.bottomRows(k);
      Vector b;
      if (xhat.norm() > 1e-12 * c.norm()) {
        b = xhat.adjoint() / xhat.squaredNorm();
        ++tracked_rank;
      } else {
        b = (p.middleCols(j + 1, k) * d.adjoint()) / (1.0 + d.squaredNorm());
        model.row_status[static_cast<std::size_t>(j)] = RowStatus::kUndetermined;
      }
      p.middleCols(j + 1, k) -= b * d;
      p.col(j) = b;
    }
    model.rows[static_cast<std::size_t>(j)] = pair.Y.row(j) * p.middleCols(j, n - j);
  }
}

// RQ factorization X = R Q through the reversal trick: QR of X^* with
// columns reversed, then flip the factors back. R is n x k; for k = n it is
// upper triangular, for k < n the top n-k rows sit above the triangle.
void rq_decompose(const Matrix& x, Matrix& r, Matrix& q) {
  const Eigen::Index n = x.rows();
  const Eigen::Index m = x.cols();
  const Eigen::Index k = std::min(n, m);
  const Matrix b = x.adjoint().rowwise().reverse();
  Eigen::HouseholderQR<Matrix> qr(b);
  const Matrix qhat = qr.householderQ() * Matrix::Identity(m, k);
  const Matrix rhat = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  r = rhat.adjoint().reverse();
  q = qhat.adjoint().colwise().reverse();
}

void fit_rq(const SnapshotPair& pair, TriangularModel& model) {
  const Eigen::Index n = pair.states();
  const Eigen::Index k = std::min(n, pair.samples());
  const Eigen::Index shift = n - k;

  Matrix r, q;
  rq_decompose(pair.X, r, q);
  const Matrix g = pair.Y * q.adjoint();

  double maxpiv = 0.0;
  for (Eigen::Index i = shift; i < n; ++i)
    maxpiv = std::max(maxpiv, std::abs(r(i, i - shift)));
  const double eps_tol = 1e-10 * maxpiv;

  // Backward recursion over the square triangle rows: w's bottom-right s x s
  // block holds the (pseudo)inverse of R(i:n, p0:k) with s = n - i.
  Matrix w = Matrix::Zero(k, k);
  Eigen::Index since_refresh = 0;
  for (Eigen::Index i = n - 1; i >= shift; --i) {
    const Eigen::Index s = n - i;
    const Eigen::Index p0 = i - shift;
    const Eigen::Index w0 = k - s;
    const cd piv = r(i, p0);
    const bool small = std::abs(piv) <= eps_tol;
    if (small) model.row_status[static_cast<std::size_t>(i)] = RowStatus::kSmallPivot;

    ++since_refresh;
    if (s == 1) {
      w(w0, w0) = small ? cd(0.0) : 1.0 / piv;
      since_refresh = 0;
    } else if (since_refresh >= kRefreshInterval) {
      w.bottomRightCorner(s, s) = pinv(r.block(i, p0, s, s));
      since_refresh = 0;
    } else if (!small) {
      const Eigen::RowVectorXcd tail =
          -(r.row(i).segment(p0 + 1, s - 1) * w.bottomRightCorner(s - 1, s - 1)) / piv;
      w(w0, w0) = 1.0 / piv;
      w.row(w0).segment(w0 + 1, s - 1) = tail;
      w.col(w0).segment(w0 + 1, s - 1).setZero();
    } else {
      // Zero pivot: the first column of the block is dead, and the remaining
      // tall block gains the row rho by the dependent-row prepend identity.
      const Eigen::RowVectorXcd d =
          r.row(i).segment(p0 + 1, s - 1) * w.bottomRightCorner(s - 1, s - 1);
      const Vector b =
          (w.bottomRightCorner(s - 1, s - 1) * d.adjoint()) / (1.0 + d.squaredNorm());
      w.bottomRightCorner(s - 1, s - 1) -= b * d;
      w.col(w0).segment(w0 + 1, s - 1) = b;
      w.row(w0).segment(w0, s).setZero();
    }
    model.rows[static_cast<std::size_t>(i)] = g.row(i).segment(p0, s) * w.bottomRightCorner(s, s);
  }

  if (shift == 0) return;

  // Fewer samples than states: rows above the triangle are consistent but
  // underdetermined. The minimum-norm row is g_i W S^* with S = R(i:n, :) and
  // W = (S^* S)^{-1}, maintained by Sherman-Morrison as rows accrue.
  Matrix gram = r.bottomRows(k).adjoint() * r.bottomRows(k);
  Matrix winv;
  const auto refresh_winv = [&]() {
    winv = gram.ldlt().solve(Matrix::Identity(k, k));
    if (!winv.allFinite() || (gram * winv - Matrix::Identity(k, k)).norm() > 1e-6 * k) {
      const double ridge = 1e-12 * std::abs(gram.trace()) + 1e-300;
      const Matrix reg = gram + ridge * Matrix::Identity(k, k);
      winv = reg.ldlt().solve(Matrix::Identity(k, k));
      if (!winv.allFinite()) winv = pinv(gram);
    }
  };
  refresh_winv();
  since_refresh = 0;
  for (Eigen::Index i = shift - 1; i >= 0; --i) {
    gram += r.row(i).adjoint() * r.row(i);
    ++since_refresh;
    if (since_refresh >= kRefreshInterval) {
      refresh_winv();
      since_refresh = 0;
    } else {
      const Vector wv = winv * r.row(i).adjoint();
      const double denom = 1.0 + (r.row(i) * wv)(0, 0).real();
      winv -= (wv * wv.adjoint()) / denom;
    }
    model.rows[static_cast<std::size_t>(i)] = (g.row(i) * winv) * r.bottomRows(n - i).adjoint();
    model.row_status[static_cast<std::size_t>(i)] = RowStatus::kUndetermined;
  }
}

}  // namespace

TriangularModel fit_triangular(const SnapshotPair& pair, TriangularMethod method) {
  pair.validate();
  const Eigen::Index n = pair.states();
  TriangularModel model;
  model.n = n;
  model.rows.resize(static_cast<std::size_t>(n));
  model.row_status.assign(static_cast<std::size_t>(n), RowStatus::kOk);
  model.method = method;
  switch (method) {
    case TriangularMethod::kNaive:
      fit_naive(pair, model);
      break;
    case TriangularMethod::kFastUpdate:
      fit_fast(pair, model);
      break;
    case TriangularMethod::kRqStable:
      fit_rq(pair, model);
      break;
  }
  return model;
}

Matrix fit_lower_triangular(const SnapshotPair& pair, TriangularMethod method) {
  SnapshotPair flipped = pair;
  flipped.X = pair.X.colwise().reverse();
  flipped.Y = pair.Y.colwise().reverse();
  const Matrix upper = materialize(fit_triangular(flipped, method));
  return upper.reverse();
}

Matrix materialize(const TriangularModel& model) {
  Matrix a = Matrix::Zero(model.n, model.n);
  for (Eigen::Index i = 0; i < model.n; ++i)
    a.row(i).segment(i, model.n - i) = model.rows[static_cast<std::size_t>(i)];
  return a;
}

Spectrum triangular_eigenvalues(const TriangularModel& model) {
  const Eigen::Index n = model.n;
  Vector diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = model.rows[static_cast<std::size_t>(i)](0);
  const double scale = std::max(diag.cwiseAbs().maxCoeff(), 1.0);

  RealVector row_norms(n);
  for (Eigen::Index i = 0; i < n; ++i) row_norms(i) = model.rows[static_cast<std::size_t>(i)].norm();

  Matrix modes = Matrix::Zero(n, n);
  std::vector<bool> bad(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector v = Vector::Zero(n);
    v(i) = 1.0;
    bad[static_cast<std::size_t>(i)] = model.row_status[static_cast<std::size_t>(i)] != RowStatus::kOk;
    for (Eigen::Index j = i - 1; j >= 0; --j) {
      const cd num =
          (model.rows[static_cast<std::size_t>(j)].segment(1, i - j) * v.segment(j + 1, i - j))(0, 0);
      // Numerators at roundoff scale are treated as exact zeros; the component
      // stays zero and the pair is not considered defective.
      if (std::abs(num) <= 1e-13 * row_norms(j) * v.segment(j + 1, i - j).norm()) continue;
      const cd denom = diag(i) - diag(j);
      if (std::abs(denom) <= 1e-13 * scale)
        bad[static_cast<std::size_t>(i)] = true;  // defective pair; leave component zero
      else
        v(j) = num / denom;
    }
    modes.col(i) = v / v.norm();
  }

  const auto order = canonical_eigen_order(diag);
  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.modes.resize(n, n);
  spec.unreliable.resize(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::Index src = order[static_cast<std::size_t>(t)];
    spec.eigenvalues(t) = diag(src);
    spec.modes.col(t) = modes.col(src);
    spec.unreliable[static_cast<std::size_t>(t)] = bad[static_cast<std::size_t>(src)];
  }
  normalize_column_phases(spec.modes);
  return spec;
}

}  // namespace pidmd

#include "pidmd/shift_invariant.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "pidmd/fft.hpp"
#include "pidmd/linalg.hpp"

namespace pidmd {

namespace {

struct SpectralRows {
  Matrix xh;
  Matrix yh;
};

SpectralRows spectral_rows(const SnapshotPair& pair) {
  pair.validate();
  return {dft_cols_forward(pair.X), dft_cols_forward(pair.Y)};
}

cd row_cross(const Matrix& yh, const Matrix& xh, Eigen::Index j) {
  return (yh.row(j).cwiseProduct(xh.row(j).conjugate())).sum();
}

// A spectral row whose data sits at roundoff scale relative to the dominant
// row carries no information and follows the minimum-norm convention. The
// cutoff mirrors the relative pseudoinverse tolerance used everywhere else;
// `d` and `dmax` are squared norms, hence the squared tolerance.
bool negligible_row(double d, double dmax) { return d <= kRankTol * kRankTol * dmax; }

}  // namespace

CirculantModel fit_circulant(const SnapshotPair& pair, CirculantVariant variant) {
  if (variant == CirculantVariant::kLowRank)
    throw InvalidArgument("use fit_circulant_lowrank for the low-rank variant");
  const SpectralRows s = spectral_rows(pair);
  const Eigen::Index n = s.xh.rows();

  CirculantModel model;
  model.variant = variant;
  model.eigenvalues.resize(n);
  model.row_status.assign(static_cast<std::size_t>(n), RowStatus::kOk);
  model.rank = n;

  Eigen::VectorXd d(n);
  Vector z(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    z[j] = row_cross(s.yh, s.xh, j);
    d[j] = s.xh.row(j).squaredNorm();
  }
  const double dmax = d.maxCoeff();
  const double zmax = z.cwiseAbs().maxCoeff();

  for (Eigen::Index j = 0; j < n; ++j) {
    switch (variant) {
      case CirculantVariant::kPlain:
        if (negligible_row(d[j], dmax)) {
          model.eigenvalues[j] = 0.0;
          model.row_status[static_cast<std::size_t>(j)] = RowStatus::kUndetermined;
        } else {
          model.eigenvalues[j] = z[j] / d[j];
        }
        break;
      case CirculantVariant::kSymmetric:
        if (negligible_row(d[j], dmax)) {
          model.eigenvalues[j] = 0.0;
          model.row_status[static_cast<std::size_t>(j)] = RowStatus::kUndetermined;
        } else {
          model.eigenvalues[j] = z[j].real() / d[j];
        }
        break;
      case CirculantVariant::kSkew:
        if (negligible_row(d[j], dmax)) {
          model.eigenvalues[j] = 0.0;
          model.row_status[static_cast<std::size_t>(j)] = RowStatus::kUndetermined;
        } else {
          model.eigenvalues[j] = cd(0.0, z[j].imag() / d[j]);
        }
        break;
      case CirculantVariant::kUnitary:
        if (negligible_row(std::abs(z[j]) * std::abs(z[j]), zmax * zmax)) {
          model.eigenvalues[j] = 1.0;
          model.row_status[static_cast<std::size_t>(j)] = RowStatus::kUndetermined;
        } else {
          model.eigenvalues[j] = z[j] / std::abs(z[j]);
        }
        break;
      case CirculantVariant::kLowRank:
        break;  // unreachable
    }
  }
  return model;
}

CirculantModel fit_circulant_lowrank(const SnapshotPair& pair, Eigen::Index r) {
  const SpectralRows s = spectral_rows(pair);
  const Eigen::Index n = s.xh.rows();
  if (r < 1 || r > n) throw InvalidArgument("low-rank size must lie in [1, n]");

  CirculantModel model;
  model.variant = CirculantVariant::kLowRank;
  model.eigenvalues = Vector::Zero(n);
  model.row_status.assign(static_cast<std::size_t>(n), RowStatus::kOk);
  model.rank = r;

  Eigen::VectorXd d(n);
  Vector z(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    z[j] = row_cross(s.yh, s.xh, j);
    d[j] = s.xh.row(j).squaredNorm();
  }
  const double dmax = d.maxCoeff();

  Eigen::VectorXd score(n);
  Vector plain(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (negligible_row(d[j], dmax)) {
      score[j] = 0.0;
      plain[j] = 0.0;
      model.row_status[static_cast<std::size_t>(j)] = RowStatus::kUndetermined;
    } else {
      score[j] = z[j].real() / std::sqrt(d[j]);
      plain[j] = z[j] / d[j];
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (score[a] != score[b]) return score[a] > score[b];
    const long ka = fft_wavenumber(a, n), kb = fft_wavenumber(b, n);
    if (std::labs(ka) != std::labs(kb)) return std::labs(ka) < std::labs(kb);
    return ka > kb;
  });
  for (Eigen::Index i = 0; i < r; ++i) {
    const Eigen::Index j = order[static_cast<std::size_t>(i)];
    model.eigenvalues[j] = plain[j];
  }
  model.scores = score;
  return model;
}

CirculantModel fit_circulant_tls(const SnapshotPair& pair) {
  if (pair.X.cols() < 2) throw InsufficientSnapshots("scalar TLS needs at least 2 samples");
  const SpectralRows s = spectral_rows(pair);
  const Eigen::Index n = s.xh.rows();
  const Eigen::Index m = s.xh.cols();

  CirculantModel model;
  model.variant = CirculantVariant::kPlain;
  model.eigenvalues.resize(n);
  model.row_status.assign(static_cast<std::size_t>(n), RowStatus::kOk);
  model.rank = n;

  Eigen::VectorXd dall(n);
  for (Eigen::Index j = 0; j < n; ++j) dall[j] = s.xh.row(j).squaredNorm();
  const double dmax = dall.maxCoeff();

  for (Eigen::Index j = 0; j < n; ++j) {
    const cd z = row_cross(s.yh, s.xh, j);
    const double d = dall[j];
    if (negligible_row(d, dmax)) {
      model.eigenvalues[j] = 0.0;
      model.row_status[static_cast<std::size_t>(j)] = RowStatus::kUndetermined;
      continue;
    }
    // Stack the conjugated samples as an m x 2 matrix [y^*, x^*]; the right
    // singular vector v of its smallest singular value carries the TLS
    // solution a = -conj(v_2)/conj(v_1), which fails to exist when v_1 = 0.
    Matrix stack(m, 2);
    stack.col(0) = s.yh.row(j).conjugate().transpose();
    stack.col(1) = s.xh.row(j).conjugate().transpose();
    Eigen::JacobiSVD<Matrix> svd(stack, Eigen::ComputeThinV);
    const Vector v = svd.matrixV().col(1);
    if (std::abs(v[0]) <= 1e-12) {
      model.eigenvalues[j] = z / d;
      model.row_status[static_cast<std::size_t>(j)] = RowStatus::kTlsDegenerate;
    } else {
      model.eigenvalues[j] = -std::conj(v[1]) / std::conj(v[0]);
    }
  }
  return model;
}

Matrix materialize(const CirculantModel& model) {
  const Eigen::Index n = model.eigenvalues.size();
  const Matrix c = dft_cols_backward(model.eigenvalues) / std::sqrt(static_cast<double>(n));
  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) a(j, k) = c((j - k + n) % n, 0);
  return a;
}

NonuniformShiftModel fit_shift_invariant_nonuniform(const Matrix& u, const Matrix& v,
                                                    const Grid& grid, long max_wavenumber) {
  grid.validate();
  if (!grid.periodic || grid.period_length != 2.0)
    throw InvalidArgument("non-uniform shift fit expects a periodic grid over [-1, 1)");
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw InvalidArgument("field shape mismatch");
  if (u.rows() != grid.points.size()) throw InvalidArgument("field rows must match grid points");
  if (max_wavenumber < 0) throw InvalidArgument("max wavenumber must be non-negative");

  const Eigen::Index n = grid.points.size();
  Eigen::VectorXd w(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    const double next = (l + 1 < n) ? grid.points[l + 1] : grid.points[0] + 2.0;
    const double prev = (l > 0) ? grid.points[l - 1] : grid.points[n - 1] - 2.0;
    w[l] = (next - prev) / 2.0;
  }

  NonuniformShiftModel model;
  const long count = 2 * max_wavenumber + 1;
  model.coefficients.resize(count);
  model.wavenumbers.reserve(static_cast<std::size_t>(count));
  model.row_status.reserve(static_cast<std::size_t>(count));

  Vector z(count);
  Eigen::VectorXd d(count);
  for (long k = -max_wavenumber; k <= max_wavenumber; ++k) {
    Vector kernel(n);
    for (Eigen::Index l = 0; l < n; ++l) {
      const double arg = -M_PI * static_cast<double>(k) * grid.points[l];
      kernel[l] = w[l] * cd(std::cos(arg), std::sin(arg));
    }
    const Eigen::RowVectorXcd u_hat = kernel.transpose() * u;
    const Eigen::RowVectorXcd v_hat = kernel.transpose() * v;
    const Eigen::Index idx = k + max_wavenumber;
    z[idx] = (v_hat.cwiseProduct(u_hat.conjugate())).sum();
    d[idx] = u_hat.squaredNorm();
  }
  const double dmax = d.maxCoeff();

  for (long k = -max_wavenumber; k <= max_wavenumber; ++k) {
    const Eigen::Index idx = k + max_wavenumber;
    model.wavenumbers.push_back(k);
    if (negligible_row(d[idx], dmax)) {
      model.coefficients[idx] = 0.0;
      model.row_status.push_back(RowStatus::kUndetermined);
    } else {
      model.coefficients[idx] = z[idx] / d[idx];
      model.row_status.push_back(RowStatus::kOk);
    }
  }
  return model;
}

ToeplitzModel fit_toeplitz(const SnapshotPair& pair, ToeplitzFlavor flavor) {
  pair.validate();
  const Eigen::Index n = pair.X.rows();
  const Eigen::Index m = pair.X.cols();

  Matrix y = pair.Y;
  if (flavor == ToeplitzFlavor::kHankel) y = y.colwise().reverse().eval();

  // 2n-point circulant embedding: Ihat = F [I;0], Xc = F [X;0].
  Matrix padded_eye = Matrix::Zero(2 * n, n);
  padded_eye.topRows(n) = Matrix::Identity(n, n);
  Matrix padded_x = Matrix::Zero(2 * n, m);
  padded_x.topRows(n) = pair.X;
  const Matrix ihat = dft_cols_backward(padded_eye);
  const Matrix xc = dft_cols_backward(padded_x);

  const Matrix gram_eye = ihat * ihat.adjoint();
  const Matrix gram_x = xc * xc.adjoint();
  const Matrix h = gram_eye.cwiseProduct(gram_x.conjugate());

  const Matrix yxc = y * xc.adjoint();  // n x 2n
  Vector d(2 * n);
  for (Eigen::Index p = 0; p < 2 * n; ++p) d[p] = ihat.row(p) * yxc.col(p);

  Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::Index rank = numerical_rank(sv);
  if (rank == 0) throw DegenerateInput("normal matrix of the Toeplitz system is zero");
  Vector a_hat = svd.matrixV().leftCols(rank) *
                 (sv.head(rank).cwiseInverse().asDiagonal() *
                  (svd.matrixU().leftCols(rank).adjoint() * d));

  ToeplitzModel model;
  model.flavor = flavor;
  model.condition_estimate = sv[0] / sv[rank - 1];
  model.condition_warning = rank < 2 * n || model.condition_estimate > 1e10;

  // C = F^* diag(a_hat) F is circulant along rows: C(j,k) = c[(k-j) mod 2n],
  // so the embedded block satisfies A(j,k) = c[(k-j) mod 2n] = a_{j-k}.
  const Matrix c = dft_cols_backward(a_hat) / std::sqrt(2.0 * static_cast<double>(n));
  Vector coeffs(2 * n - 1);
  if (flavor == ToeplitzFlavor::kToeplitz) {
    for (Eigen::Index dd = -(n - 1); dd <= n - 1; ++dd)
      coeffs[dd + n - 1] = c(((-dd) % (2 * n) + 2 * n) % (2 * n), 0);
  } else {
    // Hankel solve used rows of Y flipped; undo the flip: A = J T with
    // T(i,j) = t_{i-j}, giving anti-diagonal coefficients h_s = t_{n-1-s}.
    for (Eigen::Index s = 0; s <= 2 * n - 2; ++s) {
      const Eigen::Index dd = n - 1 - s;
      coeffs[s] = c(((-dd) % (2 * n) + 2 * n) % (2 * n), 0);
    }
  }
  model.coefficients = coeffs;
  return model;
}

Matrix materialize(const ToeplitzModel& model) {
  const Eigen::Index n = model.size();
  Matrix a(n, n);
  if (model.flavor == ToeplitzFlavor::kToeplitz) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = model.coefficients[i - j + n - 1];
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = model.coefficients[i + j];
  }
  return a;
}

}  // namespace pidmd

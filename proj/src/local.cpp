#include "pidmd/local.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "pidmd/linalg.hpp"

namespace pidmd {

namespace {

std::vector<Eigen::Index> band_window(Eigen::Index i, Eigen::Index n, Eigen::Index lower,
                                      Eigen::Index upper, bool periodic) {
  std::vector<Eigen::Index> cols;
  if (periodic && lower + upper + 1 >= n) {
    cols.resize(static_cast<std::size_t>(n));
    std::iota(cols.begin(), cols.end(), Eigen::Index{0});
    return cols;
  }
  cols.reserve(static_cast<std::size_t>(lower + upper + 1));
  for (Eigen::Index off = -lower; off <= upper; ++off) {
    Eigen::Index c = i + off;
    if (periodic)
      c = ((c % n) + n) % n;
    else if (c < 0 || c >= n)
      continue;
    cols.push_back(c);
  }
  return cols;
}

Matrix gather_rows(const Matrix& m, const std::vector<Eigen::Index>& rows) {
  Matrix s(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t t = 0; t < rows.size(); ++t)
    s.row(static_cast<Eigen::Index>(t)) = m.row(rows[t]);
  return s;
}

void check_widths(const std::vector<Eigen::Index>& w, Eigen::Index n, const char* name) {
  if (static_cast<Eigen::Index>(w.size()) != n)
    throw InvalidArgument(std::string(name) + " widths must have one entry per state");
  for (Eigen::Index v : w)
    if (v < 0 || v > n - 1)
      throw InvalidArgument(std::string(name) + " widths must lie in [0, n-1]");
}

}  // namespace

BandedModel fit_banded(const SnapshotPair& pair, const std::vector<Eigen::Index>& lower,
                       const std::vector<Eigen::Index>& upper, bool periodic) {
  pair.validate();
  const Eigen::Index n = pair.states();
  check_widths(lower, n, "lower");
  check_widths(upper, n, "upper");

  BandedModel model;
  model.n = n;
  model.periodic = periodic;
  model.lower_widths = lower;
  model.upper_widths = upper;
  model.cols.resize(static_cast<std::size_t>(n));
  model.coeffs.resize(static_cast<std::size_t>(n));
  model.row_status.assign(static_cast<std::size_t>(n), RowStatus::kOk);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    model.cols[idx] = band_window(i, n, lower[idx], upper[idx], periodic);
    const Matrix s = gather_rows(pair.X, model.cols[idx]);
    const RowLsSolution sol = solve_row_ls(s, pair.Y.row(i));
    model.coeffs[idx] = sol.coeffs;
    if (sol.rank < static_cast<Eigen::Index>(model.cols[idx].size()))
      model.row_status[idx] = RowStatus::kUndetermined;
  }
  return model;
}

BandedModel fit_banded(const SnapshotPair& pair, Eigen::Index lower, Eigen::Index upper,
                       bool periodic) {
  const auto n = static_cast<std::size_t>(pair.states());
  return fit_banded(pair, std::vector<Eigen::Index>(n, lower),
                    std::vector<Eigen::Index>(n, upper), periodic);
}

BandedModel fit_tridiagonal(const SnapshotPair& pair, bool periodic) {
  return fit_banded(pair, 1, 1, periodic);
}

BandedModel fit_symmetric_tridiagonal(const SnapshotPair& pair) {
  pair.validate();
  const Eigen::Index n = pair.states();
  if (n < 2) throw InvalidArgument("symmetric tridiagonal fit needs n >= 2");

  // Unknowns c = [d_0..d_{n-1}, o_0..o_{n-2}] with A(i,i) = d_i and
  // A(i,i+1) = A(i+1,i) = o_i. Row i of A X is
  //   d_i x_i + o_{i-1} x_{i-1} + o_i x_{i+1}
  // and stationarity of sum_i ||y_i - (A X)_i||^2 gives the Hermitian system
  // T c = rhs assembled below (inner products <a,b> = a b^*, conjugate-linear
  // in a).
  const Matrix& x = pair.X;
  const Matrix& y = pair.Y;
  const Eigen::Index p = 2 * n - 1;
  Matrix t = Matrix::Zero(p, p);
  Vector rhs = Vector::Zero(p);

  const auto xdot = [&x](Eigen::Index a, Eigen::Index b) { return x.row(a).conjugate().cwiseProduct(x.row(b)).sum(); };
  const auto xydot = [&x, &y](Eigen::Index a, Eigen::Index b) { return x.row(a).conjugate().cwiseProduct(y.row(b)).sum(); };

  for (Eigen::Index i = 0; i < n; ++i) {
    t(i, i) = xdot(i, i);
    if (i > 0) t(i, n + i - 1) = xdot(i, i - 1);
    if (i < n - 1) t(i, n + i) = xdot(i, i + 1);
    rhs(i) = xydot(i, i);
  }
  for (Eigen::Index j = 0; j < n - 1; ++j) {
    const Eigen::Index oj = n + j;
    t(oj, oj) = xdot(j, j) + xdot(j + 1, j + 1);
    t(oj, j) = xdot(j + 1, j);
    t(oj, j + 1) = xdot(j, j + 1);
    if (j > 0) t(oj, oj - 1) = xdot(j + 1, j - 1);
    if (j < n - 2) t(oj, oj + 1) = xdot(j, j + 2);
    rhs(oj) = xydot(j + 1, j) + xydot(j, j + 1);
  }

  Vector c = t.ldlt().solve(rhs);
  bool warn = false;
  const double scale = rhs.norm() + t.norm() * c.norm();
  if (!c.allFinite() || (t * c - rhs).norm() > 1e-8 * (scale > 0 ? scale : 1.0)) {
    c = pinv(t) * rhs;
    warn = true;
  }

  BandedModel model;
  model.n = n;
  model.periodic = false;
  model.lower_widths.assign(static_cast<std::size_t>(n), 1);
  model.upper_widths.assign(static_cast<std::size_t>(n), 1);
  model.cols.resize(static_cast<std::size_t>(n));
  model.coeffs.resize(static_cast<std::size_t>(n));
  model.row_status.assign(static_cast<std::size_t>(n), RowStatus::kOk);
  model.condition_warning = warn;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    model.cols[idx] = band_window(i, n, 1, 1, false);
    Eigen::RowVectorXcd coeffs(static_cast<Eigen::Index>(model.cols[idx].size()));
    Eigen::Index t2 = 0;
    if (i > 0) coeffs(t2++) = c(n + i - 1);
    coeffs(t2++) = c(i);
    if (i < n - 1) coeffs(t2++) = c(n + i);
    model.coeffs[idx] = coeffs;
  }
  return model;
}

BandedModel fit_tridiagonal_tls(const SnapshotPair& pair) {
  pair.validate();
  const Eigen::Index n = pair.states();
  const Eigen::Index m = pair.samples();
  if (m < 4) throw InsufficientSnapshots("tridiagonal TLS needs at least 4 sample columns");

  BandedModel model;
  model.n = n;
  model.periodic = false;
  model.lower_widths.assign(static_cast<std::size_t>(n), 1);
  model.upper_widths.assign(static_cast<std::size_t>(n), 1);
  model.cols.resize(static_cast<std::size_t>(n));
  model.coeffs.resize(static_cast<std::size_t>(n));
  model.row_status.assign(static_cast<std::size_t>(n), RowStatus::kOk);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    model.cols[idx] = band_window(i, n, 1, 1, false);
    const auto k = static_cast<Eigen::Index>(model.cols[idx].size());
    Matrix stacked(k + 1, m);
    stacked.topRows(k) = gather_rows(pair.X, model.cols[idx]);
    stacked.row(k) = pair.Y.row(i);

    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
    const Vector u = svd.matrixU().col(k);
    if (std::abs(u(k)) <= 1e-12) {
      model.coeffs[idx] = solve_row_ls(stacked.topRows(k), pair.Y.row(i)).coeffs;
      model.row_status[idx] = RowStatus::kTlsDegenerate;
      continue;
    }
    Eigen::RowVectorXcd coeffs(k);
    for (Eigen::Index j = 0; j < k; ++j) coeffs(j) = -std::conj(u(j)) / std::conj(u(k));
    model.coeffs[idx] = coeffs;
  }
  return model;
}

Matrix fit_regularized_local(const SnapshotPair& pair, const LocalityPenalty& penalty,
                             bool allow_large) {
  pair.validate();
  const Eigen::Index n = pair.states();
  if (n > 200 && !allow_large)
    throw SizeLimitExceeded("regularized local fit is O(n^4); pass allow_large for n > 200");
  if (penalty.H.rows() != n || penalty.H.cols() != n)
    throw InvalidArgument("penalty weights must be n x n");
  if (penalty.lambda < 0 || (penalty.H.array() < 0.0).any())
    throw InvalidArgument("penalty weights must be nonnegative");

  const Matrix gram = pair.X * pair.X.adjoint();
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Matrix shifted = gram;
    shifted.diagonal() += (penalty.lambda * penalty.H.row(i).transpose()).cast<cd>();
    const Vector rhs = pair.X * pair.Y.row(i).adjoint();
    Vector z = shifted.ldlt().solve(rhs);
    const double scale = rhs.norm() > 0 ? rhs.norm() : 1.0;
    if (!z.allFinite() || (shifted * z - rhs).norm() > 1e-8 * scale) {
      const double ridge = 1e-12 * std::abs(shifted.trace());
      shifted.diagonal().array() += ridge;
      z = shifted.ldlt().solve(rhs);
    }
    a.row(i) = z.adjoint();
  }
  return a;
}

LocalityPenalty make_gaussian_locality(const Grid& grid, double sigma, double lambda) {
  grid.validate();
  if (!(sigma > 0)) throw InvalidArgument("sigma must be positive");
  if (lambda < 0) throw InvalidArgument("lambda must be nonnegative");
  const Eigen::Index n = grid.points.size();
  LocalityPenalty penalty;
  penalty.lambda = lambda;
  penalty.H.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      penalty.H(i, j) = std::exp(std::abs(grid.points[i] - grid.points[j]) / (2 * sigma * sigma));
  return penalty;
}

Matrix materialize(const BandedModel& model) {
  Matrix a = Matrix::Zero(model.n, model.n);
  for (Eigen::Index i = 0; i < model.n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    for (std::size_t t = 0; t < model.cols[idx].size(); ++t)
      a(i, model.cols[idx][t]) = model.coeffs[idx](static_cast<Eigen::Index>(t));
  }
  return a;
}

Spectrum banded_spectrum(const BandedModel& model) {
  const Matrix a = materialize(model);
  Eigen::ComplexEigenSolver<Matrix> eig(a);
  const auto order = canonical_eigen_order(eig.eigenvalues());
  Spectrum spec;
  spec.eigenvalues.resize(model.n);
  spec.modes.resize(model.n, model.n);
  for (Eigen::Index k = 0; k < model.n; ++k) {
    spec.eigenvalues(k) = eig.eigenvalues()(order[static_cast<std::size_t>(k)]);
    spec.modes.col(k) = eig.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  normalize_column_phases(spec.modes);
  return spec;
}

}  // namespace pidmd

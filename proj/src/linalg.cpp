#include "pidmd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace pidmd {

Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values, double rtol) {
  if (singular_values.size() == 0) return 0;
  const double cutoff = rtol * singular_values[0];
  Eigen::Index r = 0;
  while (r < singular_values.size() && singular_values[r] > cutoff) ++r;
  return r;
}

Matrix pinv(const Matrix& a, double rtol) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::Index r = numerical_rank(sv, rtol);
  if (r == 0) return Matrix::Zero(a.cols(), a.rows());
  return svd.matrixV().leftCols(r) * sv.head(r).cwiseInverse().asDiagonal() *
         svd.matrixU().leftCols(r).adjoint();
}

RowLsSolution solve_row_ls(const Matrix& s, const Eigen::RowVectorXcd& g, double rtol) {
  Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::Index r = numerical_rank(sv, rtol);
  RowLsSolution out;
  out.rank = r;
  if (r == 0) {
    out.coeffs = Eigen::RowVectorXcd::Zero(s.rows());
    return out;
  }
  // c = g * pinv(S): the minimum-norm least-squares row solution.
  out.coeffs = ((g * svd.matrixV().leftCols(r)) * sv.head(r).cwiseInverse().asDiagonal()) *
               svd.matrixU().leftCols(r).adjoint();
  return out;
}

double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv[sv.size() - 1] == 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / sv[sv.size() - 1];
}

Matrix unitary_dft_matrix(Eigen::Index n) {
  Matrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double arg = 2.0 * M_PI * static_cast<double>(j) * static_cast<double>(k) /
                         static_cast<double>(n);
      f(j, k) = scale * cd(std::cos(arg), std::sin(arg));
    }
  return f;
}

long fft_wavenumber(Eigen::Index j, Eigen::Index n) {
  const long half = static_cast<long>((n + 1) / 2);
  return static_cast<long>(j) < half ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

Matrix matrix_exponential(const Matrix& a) { return a.exp(); }

std::vector<Eigen::Index> canonical_eigen_order(const Vector& eigenvalues) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(eigenvalues.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(eigenvalues[a]), mb = std::abs(eigenvalues[b]);
    if (ma != mb) return ma > mb;
    if (eigenvalues[a].real() != eigenvalues[b].real())
      return eigenvalues[a].real() > eigenvalues[b].real();
    return eigenvalues[a].imag() > eigenvalues[b].imag();
  });
  return idx;
}

void normalize_column_phases(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double a = std::abs(m(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0) m.col(j) *= std::conj(m(imax, j)) / best;
  }
}

RealMatrix random_real_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
  return m;
}

Matrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cd(s * normal(gen), s * normal(gen));
  return m;
}

MatchResult match_eigenvalues(const Vector& estimated, const Vector& truth, double tolerance) {
  MatchResult result;
  std::vector<bool> used(static_cast<std::size_t>(estimated.size()), false);
  const auto order = canonical_eigen_order(truth);
  for (Eigen::Index t : order) {
    Eigen::Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index e = 0; e < estimated.size(); ++e) {
      if (used[static_cast<std::size_t>(e)]) continue;
      const double d = std::abs(estimated[e] - truth[t]);
      if (d < best_dist) {
        best_dist = d;
        best = e;
      }
    }
    if (best >= 0 && best_dist <= tolerance) {
      used[static_cast<std::size_t>(best)] = true;
      result.matched_distances.push_back(best_dist);
    } else {
      ++result.unmatched;
    }
  }
  if (!result.matched_distances.empty()) {
    double sum = 0.0;
    for (double d : result.matched_distances) {
      sum += d;
      result.max_abs_error = std::max(result.max_abs_error, d);
    }
    result.mean_abs_error = sum / static_cast<double>(result.matched_distances.size());
  }
  return result;
}

}  // namespace pidmd

#ifndef PIDMD_LINALG_HPP
#define PIDMD_LINALG_HPP

#include <cstdint>
#include <vector>

#include "pidmd/types.hpp"

namespace pidmd {

// Relative singular-value cutoff used for numerical rank decisions throughout.
inline constexpr double kRankTol = 1e-12;

// Moore-Penrose pseudoinverse via SVD, truncating singular values below
// rtol * sigma_max.
Matrix pinv(const Matrix& a, double rtol = kRankTol);

// Minimum-norm solution of min_c ||c*S - g||_2 over row vectors c (1 x k),
// where S is k x m and g is 1 x m. Returns the coefficients and the numerical
// rank of S.
struct RowLsSolution {
  Eigen::RowVectorXcd coeffs;
  Eigen::Index rank = 0;
};
RowLsSolution solve_row_ls(const Matrix& s, const Eigen::RowVectorXcd& g, double rtol = kRankTol);

Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values, double rtol = kRankTol);

// 2-norm condition number estimate from an SVD.
double condition_number(const Matrix& a);

// Unitary DFT matrix, F(j,k) = exp(2*pi*i*j*k/n)/sqrt(n) (0-based).
Matrix unitary_dft_matrix(Eigen::Index n);

// FFT-order wavenumber of row j in an n-point spectrum: j for j < ceil(n/2),
// j - n otherwise.
long fft_wavenumber(Eigen::Index j, Eigen::Index n);

// Dense matrix exponential (scaling-and-squaring Pade).
Matrix matrix_exponential(const Matrix& a);

// Indices sorting eigenvalues descending by modulus, ties broken by descending
// real part, then descending imaginary part.
std::vector<Eigen::Index> canonical_eigen_order(const Vector& eigenvalues);

// Rescales each column so its largest-magnitude entry is real and positive.
void normalize_column_phases(Matrix& m);

// Deterministic standard-normal matrices for operator generators and tests.
RealMatrix random_real_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);
Matrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

// Greedy nearest-neighbour matching of `estimated` against `truth` without
// replacement, walking truth values in canonical order. Returns the matched
// distances (one per truth value that found a partner within `tolerance`) and
// the number of truth values left unmatched.
struct MatchResult {
  std::vector<double> matched_distances;
  Eigen::Index unmatched = 0;
  double mean_abs_error = 0.0;
  double max_abs_error = 0.0;
};
MatchResult match_eigenvalues(const Vector& estimated, const Vector& truth, double tolerance);

}  // namespace pidmd

#endif  // PIDMD_LINALG_HPP

#ifndef PIDMD_SHIFT_INVARIANT_HPP
#define PIDMD_SHIFT_INVARIANT_HPP

#include <vector>

#include "pidmd/types.hpp"

namespace pidmd {

enum class CirculantVariant : unsigned char { kPlain, kSymmetric, kSkew, kUnitary, kLowRank };

// Circulant operator diagonalised by the unitary DFT: A = F diag(a_hat) F^*.
// eigenvalues are stored in FFT row order (wavenumber j for j < n/2, j - n
// after). Rows with no usable data are flagged in row_status.
struct CirculantModel {
  Vector eigenvalues;
  CirculantVariant variant = CirculantVariant::kPlain;
  std::vector<RowStatus> row_status;
  Eigen::Index rank = 0;    // retained spectral rows (n unless low-rank)
  RealVector scores;        // per-row selection scores; filled by the low-rank fit
};

// Least-squares circulant fit, decoupled per Fourier row: with rows
// Xh_j = (F^* X)_j and Yh_j = (F^* Y)_j,
//   plain      a_j = Yh_j Xh_j^* / ||Xh_j||^2
//   symmetric  a_j = Re[Yh_j Xh_j^*] / ||Xh_j||^2
//   skew       a_j = i Im[Yh_j Xh_j^*] / ||Xh_j||^2
//   unitary    a_j = Yh_j Xh_j^* / |Yh_j Xh_j^*|
// Undetermined rows get 0 (1 for the unitary variant) and are flagged.
CirculantModel fit_circulant(const SnapshotPair& pair,
                             CirculantVariant variant = CirculantVariant::kPlain);

// Keeps the r spectral rows with the largest residual-reduction score
// rho_j = Re[Yh_j Xh_j^*] / ||Xh_j||, ties broken by smaller |wavenumber| and
// then by the positive wavenumber; all other rows are zeroed.
CirculantModel fit_circulant_lowrank(const SnapshotPair& pair, Eigen::Index r);

// Per-row scalar total least squares, allowing noise in X and Y alike. Rows
// where the TLS solution does not exist fall back to the plain least-squares
// value and are flagged kTlsDegenerate.
CirculantModel fit_circulant_tls(const SnapshotPair& pair);

Matrix materialize(const CirculantModel& model);

// Shift-invariant fit on a non-uniform periodic grid over [-1, 1): spatial
// spectra are taken with the non-uniform transform
//   f_hat(k) = sum_l w_l f(xi_l) exp(-i pi k xi_l),
// w_l = (xi_{l+1} - xi_{l-1})/2 wrapped around the period, and each wavenumber
// k in [-max_wavenumber, max_wavenumber] gets the least-squares symbol
// a_k = v_hat(k) u_hat(k)^* / ||u_hat(k)||^2.
struct NonuniformShiftModel {
  std::vector<long> wavenumbers;
  Vector coefficients;
  std::vector<RowStatus> row_status;
};

NonuniformShiftModel fit_shift_invariant_nonuniform(const Matrix& u, const Matrix& v,
                                                    const Grid& grid, long max_wavenumber);

enum class ToeplitzFlavor : unsigned char { kToeplitz, kHankel };

// Toeplitz A(i,j) = c[i-j+n-1], or Hankel A(i,j) = c[i+j]; 2n-1 coefficients.
struct ToeplitzModel {
  Vector coefficients;
  ToeplitzFlavor flavor = ToeplitzFlavor::kToeplitz;
  bool condition_warning = false;
  double condition_estimate = 0.0;

  Eigen::Index size() const { return (coefficients.size() + 1) / 2; }
};

// Solves the Toeplitz Procrustes problem through a 2n-point circulant
// embedding: with Ihat = F [I;0] and Xc = F [X;0], the stationarity system is
// (Ihat Ihat^* .* conj(Xc Xc^*)) a = diag(Ihat Y Xc^*), solved minimum-norm.
// Hankel fits flip the output rows, solve Toeplitz, and flip back.
ToeplitzModel fit_toeplitz(const SnapshotPair& pair,
                           ToeplitzFlavor flavor = ToeplitzFlavor::kToeplitz);

Matrix materialize(const ToeplitzModel& model);

}  // namespace pidmd

#endif  // PIDMD_SHIFT_INVARIANT_HPP

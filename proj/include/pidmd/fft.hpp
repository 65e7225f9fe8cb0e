#ifndef PIDMD_FFT_HPP
#define PIDMD_FFT_HPP

#include "pidmd/types.hpp"

namespace pidmd {

// Unitary DFT of every column: returns F^* M (forward) where
// F(j,k) = exp(2*pi*i*j*k/n)/sqrt(n). O(m n log n) via FFTW.
Matrix dft_cols_forward(const Matrix& m);

// Inverse of dft_cols_forward: returns F M.
Matrix dft_cols_backward(const Matrix& m);

}  // namespace pidmd

#endif  // PIDMD_FFT_HPP

#include "pidmd/fft.hpp"

#include <cmath>

#include <fftw3.h>

namespace pidmd {

namespace {

Matrix dft_cols(const Matrix& m, int sign) {
  if (m.rows() == 0 || m.cols() == 0) return m;
  Matrix out = m;
  const int n = static_cast<int>(m.rows());
  const int howmany = static_cast<int>(m.cols());
  auto* data = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan = fftw_plan_many_dft(1, &n, howmany, data, nullptr, 1, n, data, nullptr, 1, n,
                                      sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  out *= 1.0 / std::sqrt(static_cast<double>(n));
  return out;
}

}  // namespace

Matrix dft_cols_forward(const Matrix& m) { return dft_cols(m, FFTW_FORWARD); }

Matrix dft_cols_backward(const Matrix& m) { return dft_cols(m, FFTW_BACKWARD); }

}  // namespace pidmd

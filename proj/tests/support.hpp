#ifndef PIDMD_TESTS_SUPPORT_HPP
#define PIDMD_TESTS_SUPPORT_HPP

#include <cstdint>
#include <random>

#include "pidmd/linalg.hpp"
#include "pidmd/types.hpp"

namespace support {

using pidmd::cd;
using pidmd::Matrix;
using pidmd::RealMatrix;
using pidmd::RealVector;
using pidmd::SnapshotPair;
using pidmd::Vector;

inline Matrix random_complex(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  return pidmd::random_complex_matrix(rows, cols, seed);
}

inline Matrix random_real(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  return pidmd::random_real_matrix(rows, cols, seed).cast<cd>();
}

// Noiseless pair with Y = op * X for construct-and-recover checks.
inline SnapshotPair pair_from_operator(const Matrix& op, Eigen::Index m, std::uint64_t seed,
                                       bool real_data = false) {
  SnapshotPair pair;
  pair.X = real_data ? random_real(op.cols(), m, seed) : random_complex(op.cols(), m, seed);
  pair.Y = op * pair.X;
  return pair;
}

inline SnapshotPair pair_from_data(const Matrix& x, const Matrix& y) {
  SnapshotPair pair;
  pair.X = x;
  pair.Y = y;
  return pair;
}

inline double rel_error(const Matrix& got, const Matrix& want) {
  const double scale = want.norm();
  return scale > 0 ? (got - want).norm() / scale : (got - want).norm();
}

inline double ls_residual(const Matrix& a, const SnapshotPair& pair) {
  return (pair.Y - a * pair.X).norm();
}

// Residual of the globally optimal unconstrained operator Y pinv(X) X.
inline double unconstrained_residual(const SnapshotPair& pair) {
  return (pair.Y - pair.Y * (pidmd::pinv(pair.X) * pair.X)).norm();
}

// Multiset comparison of two eigenvalue lists via greedy nearest matching.
inline double spectra_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return 1e300;
  std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = 1e300;
    Eigen::Index at = -1;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(a[i] - b[j]);
      if (d < best) {
        best = d;
        at = j;
      }
    }
    used[static_cast<std::size_t>(at)] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace support

#endif  // PIDMD_TESTS_SUPPORT_HPP

#include "pidmd/snapshots.hpp"

#include <cmath>
#include <random>

namespace pidmd {

double rms(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.norm() / std::sqrt(static_cast<double>(m.size()));
}

SnapshotPair make_snapshot_pairs(const Matrix& series, Pairing pairing, double dt) {
  if (series.rows() == 0 || series.cols() == 0) throw EmptyInput("snapshot series is empty");
  const Eigen::Index m = series.cols();
  if (m < 3)
    throw InsufficientSnapshots("need at least 3 snapshots, got " + std::to_string(m));

  SnapshotPair pair;
  pair.pairing = pairing;
  pair.dt = dt;
  if (pairing == Pairing::kDiscrete) {
    pair.X = series.leftCols(m - 1);
    pair.Y = series.rightCols(m - 1);
  } else {
    if (!(dt > 0.0)) throw InvalidArgument("derivative pairing requires dt > 0");
    pair.X = series.middleCols(1, m - 2);
    pair.Y = (series.rightCols(m - 2) - series.leftCols(m - 2)) / (2.0 * dt);
  }
  return pair;
}

Matrix add_gaussian_noise(const Matrix& m, double level, std::uint64_t seed) {
  if (!(level >= 0.0)) throw InvalidArgument("noise level must be non-negative");
  if (m.size() == 0) return m;
  const double scale = level * rms(m);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool complex_entries = (m.imag().cwiseAbs().maxCoeff() != 0.0);
  Matrix out = m;
  if (complex_entries) {
    const double s = scale / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) += cd(s * normal(gen), s * normal(gen));
  } else {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) += scale * normal(gen);
  }
  return out;
}

}  // namespace pidmd

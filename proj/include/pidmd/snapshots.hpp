#ifndef PIDMD_SNAPSHOTS_HPP
#define PIDMD_SNAPSHOTS_HPP

#include <cstdint>

#include "pidmd/types.hpp"

namespace pidmd {

// Root-mean-square entry magnitude, ||M||_F / sqrt(rows*cols).
double rms(const Matrix& m);

// Builds aligned (X, Y) from a series of m snapshot columns.
//   discrete:   X = columns 1..m-1, Y = columns 2..m
//   derivative: X = interior columns, Y = second-order central differences
// Requires m >= 3; dt > 0 for derivative pairing.
SnapshotPair make_snapshot_pairs(const Matrix& series, Pairing pairing, double dt);

// Returns M + level * rms(M) * G with G standard normal per entry, drawn
// deterministically from the seed. A matrix with no imaginary part receives
// real noise; otherwise real and imaginary parts are independent, each scaled
// by 1/sqrt(2) so the per-entry magnitude variance matches the real case.
Matrix add_gaussian_noise(const Matrix& m, double level, std::uint64_t seed);

}  // namespace pidmd

#endif  // PIDMD_SNAPSHOTS_HPP

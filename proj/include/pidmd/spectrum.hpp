#ifndef PIDMD_SPECTRUM_HPP
#define PIDMD_SPECTRUM_HPP

#include <vector>

#include "pidmd/types.hpp"

namespace pidmd {

// Eigenvalues with paired mode columns, ordered by descending magnitude.
// Modes are unit length with the largest-magnitude entry real and positive.
// `amplitudes` may be empty. `unreliable` (empty means none) marks
// eigenvalues derived from flagged rows of a structured fit.
struct Spectrum {
  Vector eigenvalues;
  Matrix modes;
  Vector amplitudes;
  TimeKind time_kind = TimeKind::kDiscrete;
  std::vector<bool> unreliable;
};

}  // namespace pidmd

#endif  // PIDMD_SPECTRUM_HPP

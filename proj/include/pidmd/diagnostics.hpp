#ifndef PIDMD_DIAGNOSTICS_HPP
#define PIDMD_DIAGNOSTICS_HPP

#include "pidmd/model.hpp"
#include "pidmd/spectrum.hpp"
#include "pidmd/testbeds.hpp"

namespace pidmd {

// Singular triplets of the resolvent (i omega I - A)^{-1}: gains descending,
// forcings (right vectors) and responses (left vectors) column-paired, each
// set orthonormal, phases fixed jointly by the forcing columns.
struct ResolventSet {
  double omega = 0.0;
  RealVector gains;
  Matrix forcings;
  Matrix responses;
};

struct SpectralErrorReport {
  double matched_mean_abs_error = 0.0;
  Eigen::Index unmatched = 0;
};

Matrix materialize(const ExactDmdModel& model);
Matrix materialize(const DenseModel& model);
Matrix materialize(const PiDmdModel& model);

// Number of states the materialized operator acts on.
Eigen::Index dimension(const PiDmdModel& model);

// A * states without materializing where the structure allows it.
Matrix apply(const PiDmdModel& model, const Matrix& states);

// ||Y - A X||_F.
double residual(const PiDmdModel& model, const SnapshotPair& pair);

// Eigenvalues and modes, computed from the structure: circulant models read
// them off the Fourier symbol, triangular off the diagonal, symmetric from
// the core; the rest use a dense eigensolve. Rank-truncated models return
// only the eigenvalues of their fitted subspace.
Spectrum spectrum(const PiDmdModel& model, TimeKind time_kind = TimeKind::kDiscrete);

// Trajectory [x0, x1, ..., x_steps] (n x steps+1). Discrete models iterate
// the operator; continuous ones propagate spectrally through the modes, or
// through a dense matrix exponential when the mode basis is ill-conditioned
// (condition number above 1e8) or incomplete.
Matrix predict(const PiDmdModel& model, const Vector& x0, Eigen::Index steps, TimeKind time_kind,
               double dt);

// Top-k singular triplets of (i omega I - A)^{-1}. Exact-DMD models work in
// their reduced space and lift the vectors by the POD basis. Throws
// NearSingularResolvent when i omega lies within 1e-10 of an eigenvalue.
ResolventSet resolvent_modes(const PiDmdModel& model, double omega, Eigen::Index count);

// Closest matrix to a_hat on the chosen manifold: the fit with X = I,
// Y = a_hat.
PiDmdModel nearest_on_manifold(const Matrix& a_hat, ManifoldKind manifold);

// Greedy nearest-neighbour spectrum comparison. Truth eigenvalues farther
// than 1e-2 * max|truth| from every remaining estimate count as unmatched.
SpectralErrorReport spectral_error(const Spectrum& estimated, const Spectrum& truth);

}  // namespace pidmd

#endif  // PIDMD_DIAGNOSTICS_HPP

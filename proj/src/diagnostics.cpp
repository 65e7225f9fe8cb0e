#include "pidmd/diagnostics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

#include "pidmd/fft.hpp"
#include "pidmd/linalg.hpp"

namespace pidmd {

namespace {

// Unit-normalizes each mode column and makes its largest entry real-positive.
// Amplitudes, when present, absorb the inverse scaling so modes * amplitudes
// is unchanged.
void canonicalize_modes(Spectrum& spec) {
  for (Eigen::Index k = 0; k < spec.modes.cols(); ++k) {
    const double norm = spec.modes.col(k).norm();
    if (norm > 0) {
      spec.modes.col(k) /= norm;
      if (spec.amplitudes.size() > k) spec.amplitudes(k) *= norm;
    }
    Eigen::Index imax = 0;
    spec.modes.col(k).cwiseAbs().maxCoeff(&imax);
    const cd entry = spec.modes.col(k)(imax);
    if (std::abs(entry) > 0) {
      const cd phase = entry / std::abs(entry);
      spec.modes.col(k) /= phase;
      if (spec.amplitudes.size() > k) spec.amplitudes(k) *= phase;
    }
  }
}

Spectrum dense_spectrum(const Matrix& a) {
  Eigen::ComplexEigenSolver<Matrix> eig(a);
  const auto order = canonical_eigen_order(eig.eigenvalues());
  Spectrum spec;
  const Eigen::Index n = a.rows();
  spec.eigenvalues.resize(n);
  spec.modes.resize(n, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    spec.eigenvalues(t) = eig.eigenvalues()(order[static_cast<std::size_t>(t)]);
    spec.modes.col(t) = eig.eigenvectors().col(order[static_cast<std::size_t>(t)]);
  }
  canonicalize_modes(spec);
  return spec;
}

Spectrum circulant_spectrum(const CirculantModel& m) {
  const Eigen::Index n = m.eigenvalues.size();
  const Matrix f = unitary_dft_matrix(n);
  const auto order = canonical_eigen_order(m.eigenvalues);
  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.modes.resize(n, n);
  spec.unreliable.resize(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::Index src = order[static_cast<std::size_t>(t)];
    spec.eigenvalues(t) = m.eigenvalues(src);
    spec.modes.col(t) = f.col(src);
    spec.unreliable[static_cast<std::size_t>(t)] =
        m.row_status[static_cast<std::size_t>(src)] != RowStatus::kOk;
  }
  canonicalize_modes(spec);
  return spec;
}

Spectrum symmetric_spectrum(const SymmetricModel& m) {
  // The core is exactly (skew-)Hermitian by construction, so a self-adjoint
  // eigensolve applies; skew cores are rotated to Hermitian by -i.
  const bool skew = m.kind == SymmetryKind::kSkew;
  const Matrix h = skew ? Matrix(m.core * cd(0.0, -1.0)) : m.core;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Eigen::Index q = m.core.rows();
  Vector values(q);
  for (Eigen::Index j = 0; j < q; ++j)
    values(j) = skew ? cd(0.0, eig.eigenvalues()(j)) : cd(eig.eigenvalues()(j), 0.0);
  const Matrix lifted = m.basis * eig.eigenvectors();
  const auto order = canonical_eigen_order(values);
  Spectrum spec;
  spec.eigenvalues.resize(q);
  spec.modes.resize(m.basis.rows(), q);
  for (Eigen::Index t = 0; t < q; ++t) {
    const Eigen::Index src = order[static_cast<std::size_t>(t)];
    spec.eigenvalues(t) = values(src);
    spec.modes.col(t) = lifted.col(src);
  }
  canonicalize_modes(spec);
  return spec;
}

Spectrum unitary_spectrum(const UnitaryModel& m) {
  Spectrum spec = dense_spectrum(m.op);
  if (m.pod_basis.size() > 0) {
    spec.modes = m.pod_basis * spec.modes;
    canonicalize_modes(spec);
  }
  return spec;
}

Spectrum exact_spectrum(const ExactDmdModel& m) {
  Spectrum spec;
  spec.eigenvalues = m.eigenvalues;
  spec.modes = m.modes;
  spec.amplitudes = m.amplitudes;
  canonicalize_modes(spec);
  return spec;
}

}  // namespace

Matrix materialize(const ExactDmdModel& model) {
  return model.op_factor * model.basis.adjoint();
}

Matrix materialize(const DenseModel& model) { return model.op; }

Matrix materialize(const PiDmdModel& model) {
  return std::visit([](const auto& m) -> Matrix { return materialize(m); }, model);
}

Eigen::Index dimension(const PiDmdModel& model) {
  return std::visit(
      [](const auto& m) -> Eigen::Index {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ExactDmdModel>) return m.basis.rows();
        if constexpr (std::is_same_v<T, CirculantModel>) return m.eigenvalues.size();
        if constexpr (std::is_same_v<T, ToeplitzModel>) return m.size();
        if constexpr (std::is_same_v<T, UnitaryModel>)
          return m.pod_basis.size() > 0 ? m.pod_basis.rows() : m.op.rows();
        if constexpr (std::is_same_v<T, SymmetricModel>) return m.basis.rows();
        if constexpr (std::is_same_v<T, BandedModel>) return m.n;
        if constexpr (std::is_same_v<T, TriangularModel>) return m.n;
        if constexpr (std::is_same_v<T, DenseModel>) return m.op.rows();
      },
      model);
}

Matrix apply(const PiDmdModel& model, const Matrix& states) {
  if (states.rows() != dimension(model))
    throw InvalidArgument("state dimension does not match the model");
  return std::visit(
      [&states](const auto& m) -> Matrix {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ExactDmdModel>) {
          return m.op_factor * (m.basis.adjoint() * states);
        } else if constexpr (std::is_same_v<T, CirculantModel>) {
          Matrix hat = dft_cols_forward(states);
          hat.array().colwise() *= m.eigenvalues.array();
          return dft_cols_backward(hat);
        } else if constexpr (std::is_same_v<T, UnitaryModel>) {
          if (m.pod_basis.size() == 0) return m.op * states;
          return m.pod_basis * (m.op * (m.pod_basis.adjoint() * states));
        } else if constexpr (std::is_same_v<T, SymmetricModel>) {
          return m.basis * (m.core * (m.basis.adjoint() * states));
        } else if constexpr (std::is_same_v<T, DenseModel>) {
          return m.op * states;
        } else {
          return materialize(m) * states;
        }
      },
      model);
}

double residual(const PiDmdModel& model, const SnapshotPair& pair) {
  pair.validate();
  return (pair.Y - apply(model, pair.X)).norm();
}

Spectrum spectrum(const PiDmdModel& model, TimeKind time_kind) {
  Spectrum spec = std::visit(
      [](const auto& m) -> Spectrum {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ExactDmdModel>) return exact_spectrum(m);
        if constexpr (std::is_same_v<T, CirculantModel>) return circulant_spectrum(m);
        if constexpr (std::is_same_v<T, SymmetricModel>) return symmetric_spectrum(m);
        if constexpr (std::is_same_v<T, UnitaryModel>) return unitary_spectrum(m);
        if constexpr (std::is_same_v<T, BandedModel>) return banded_spectrum(m);
        if constexpr (std::is_same_v<T, TriangularModel>) return triangular_eigenvalues(m);
        if constexpr (std::is_same_v<T, ToeplitzModel> || std::is_same_v<T, DenseModel>)
          return dense_spectrum(materialize(m));
      },
      model);
  spec.time_kind = time_kind;
  return spec;
}

Matrix predict(const PiDmdModel& model, const Vector& x0, Eigen::Index steps, TimeKind time_kind,
               double dt) {
  const Eigen::Index n = dimension(model);
  if (x0.size() != n) throw InvalidArgument("x0 length does not match the model");
  if (steps < 0) throw InvalidArgument("steps must be nonnegative");
  Matrix out(n, steps + 1);
  out.col(0) = x0;
  if (steps == 0) return out;

  if (time_kind == TimeKind::kDiscrete) {
    for (Eigen::Index j = 1; j <= steps; ++j)
      out.col(j) = pidmd::apply(model, Matrix(out.col(j - 1)));
    return out;
  }

  if (!(dt > 0)) throw InvalidArgument("dt must be positive for continuous prediction");
  const Spectrum spec = spectrum(model, TimeKind::kContinuous);
  const bool complete = spec.modes.rows() == n && spec.modes.cols() == n && n > 0;
  if (complete && condition_number(spec.modes) <= 1e8) {
    const Vector coeff = spec.modes.partialPivLu().solve(x0);
    const Vector growth = (spec.eigenvalues * dt).array().exp();
    Vector cur = coeff;
    for (Eigen::Index j = 1; j <= steps; ++j) {
      cur = cur.cwiseProduct(growth);
      out.col(j) = spec.modes * cur;
    }
  } else {
    const Matrix propagator = matrix_exponential(materialize(model) * dt);
    for (Eigen::Index j = 1; j <= steps; ++j) out.col(j) = propagator * out.col(j - 1);
  }
  return out;
}

ResolventSet resolvent_modes(const PiDmdModel& model, double omega, Eigen::Index count) {
  if (count < 1) throw InvalidArgument("count must be at least 1");
  Matrix a;
  Matrix lift;
  if (const auto* exact = std::get_if<ExactDmdModel>(&model)) {
    a = exact->reduced_op;
    lift = exact->basis;
  } else {
    a = materialize(model);
  }
  const Eigen::Index p = a.rows();
  const cd iw(0.0, omega);

  Eigen::ComplexEigenSolver<Matrix> eig(a, false);
  double best = std::numeric_limits<double>::infinity();
  cd nearest(0.0);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double dist = std::abs(iw - eig.eigenvalues()(j));
    if (dist < best) {
      best = dist;
      nearest = eig.eigenvalues()(j);
    }
  }
  if (best <= 1e-10) {
    std::ostringstream msg;
    msg << "i*omega = " << iw << " lies within 1e-10 of eigenvalue " << nearest;
    throw NearSingularResolvent(msg.str());
  }

  const Matrix resolvent =
      (iw * Matrix::Identity(p, p) - a).partialPivLu().solve(Matrix::Identity(p, p));
  Eigen::JacobiSVD<Matrix> svd(resolvent, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index k = std::min(count, p);

  ResolventSet set;
  set.omega = omega;
  set.gains = svd.singularValues().head(k);
  set.forcings = svd.matrixV().leftCols(k);
  set.responses = svd.matrixU().leftCols(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index imax = 0;
    set.forcings.col(j).cwiseAbs().maxCoeff(&imax);
    const cd entry = set.forcings.col(j)(imax);
    if (std::abs(entry) > 0) {
      const cd phase = entry / std::abs(entry);
      set.forcings.col(j) /= phase;
      set.responses.col(j) /= phase;
    }
  }
  if (lift.size() > 0) {
    set.forcings = lift * set.forcings;
    set.responses = lift * set.responses;
  }
  return set;
}

PiDmdModel nearest_on_manifold(const Matrix& a_hat, ManifoldKind manifold) {
  if (a_hat.rows() != a_hat.cols()) throw InvalidArgument("a_hat must be square");
  SnapshotPair pair;
  pair.X = Matrix::Identity(a_hat.rows(), a_hat.cols());
  pair.Y = a_hat;
  switch (manifold) {
    case ManifoldKind::kCirculant:
      return fit_circulant(pair);
    case ManifoldKind::kToeplitz:
      return fit_toeplitz(pair, ToeplitzFlavor::kToeplitz);
    case ManifoldKind::kHankel:
      return fit_toeplitz(pair, ToeplitzFlavor::kHankel);
    case ManifoldKind::kUnitary:
      return fit_unitary(pair);
    case ManifoldKind::kSymmetric:
      return fit_symmetric(pair, SymmetryKind::kSymmetric);
    case ManifoldKind::kSkew:
      return fit_symmetric(pair, SymmetryKind::kSkew);
    case ManifoldKind::kTridiagonal:
      return fit_tridiagonal(pair);
    case ManifoldKind::kSymmetricTridiagonal:
      return fit_symmetric_tridiagonal(pair);
    case ManifoldKind::kUpperTriangular:
      return fit_triangular(pair, TriangularMethod::kNaive);
  }
  throw InvalidArgument("unknown manifold");
}

SpectralErrorReport spectral_error(const Spectrum& estimated, const Spectrum& truth) {
  double scale = truth.eigenvalues.size() > 0 ? truth.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  if (!(scale > 0)) scale = 1.0;
  const MatchResult match =
      match_eigenvalues(estimated.eigenvalues, truth.eigenvalues, 1e-2 * scale);
  return {match.mean_abs_error, match.unmatched};
}

}  // namespace pidmd

#include "pidmd/testbeds.hpp"

#include <cmath>
#include <random>

#include <Eigen/QR>

#include "pidmd/fft.hpp"
#include "pidmd/linalg.hpp"

namespace pidmd {

namespace {

Matrix circulant_from_eigenvalues(const Vector& a_hat) {
  const Eigen::Index n = a_hat.size();
  // First column of F diag(a_hat) F^*.
  Matrix c = dft_cols_backward(a_hat) / std::sqrt(static_cast<double>(n));
  Matrix op(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) op(j, k) = c((j - k + n) % n, 0);
  return op;
}

Grid uniform_periodic_grid(Eigen::Index n) {
  Grid g;
  g.points.resize(n);
  for (Eigen::Index l = 0; l < n; ++l)
    g.points[l] = -1.0 + 2.0 * static_cast<double>(l) / static_cast<double>(n);
  g.periodic = true;
  g.period_length = 2.0;
  return g;
}

}  // namespace

Testbed advection_testbed(Eigen::Index n, double wave_speed, double dt) {
  if (n < 4 || n % 2 != 0) throw InvalidArgument("advection testbed needs even n >= 4");
  if (!(dt > 0.0)) throw InvalidArgument("advection testbed needs dt > 0");
  Vector a_hat(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double phase = -M_PI * static_cast<double>(fft_wavenumber(j, n)) * wave_speed * dt;
    a_hat[j] = cd(std::cos(phase), std::sin(phase));
  }
  Testbed bed;
  bed.name = "advection";
  bed.op = circulant_from_eigenvalues(a_hat);
  bed.time_kind = TimeKind::kDiscrete;
  bed.grid = uniform_periodic_grid(n);
  bed.analytic_spectrum = a_hat;
  return bed;
}

Testbed convection_diffusion_testbed(Eigen::Index n, std::uint64_t seed, double wind_scale) {
  if (n < 8) throw InvalidArgument("convection-diffusion testbed needs n >= 8");
  // States sit at xi_i = -1 + i*h with h = 2/n; the Dirichlet point xi = 1 is
  // eliminated, and the Neumann condition at xi = -1 is folded in by a ghost
  // point, so row 0 reads (2 u_1 - 2 u_0)/h^2.
  const double h = 2.0 / static_cast<double>(n);
  Grid grid;
  grid.points.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) grid.points[i] = -1.0 + h * static_cast<double>(i);

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double coeff_cos[4], coeff_sin[4];
  for (int k = 0; k <= 3; ++k) {
    coeff_cos[k] = normal(gen) / (1.0 + k);
    coeff_sin[k] = normal(gen) / (1.0 + k);
  }
  auto wind = [&](double xi) {
    double a = 0.0;
    for (int k = 0; k <= 3; ++k)
      a += coeff_cos[k] * std::cos(k * M_PI * xi) + coeff_sin[k] * std::sin(k * M_PI * xi);
    return wind_scale * a;
  };

  Matrix op = Matrix::Zero(n, n);
  const double inv_h2 = 1.0 / (h * h);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = wind(grid.points[i]);
    if (i == 0) {
      op(0, 0) = -2.0 * inv_h2;
      op(0, 1) = 2.0 * inv_h2;  // ghost point: u_{-1} = u_1, convection term vanishes
      continue;
    }
    op(i, i - 1) = inv_h2 - a / (2.0 * h);
    op(i, i) = -2.0 * inv_h2;
    if (i + 1 < n) op(i, i + 1) = inv_h2 + a / (2.0 * h);
    // for i == n-1 the right neighbour is the eliminated u(1) = 0
  }

  Testbed bed;
  bed.name = "convection_diffusion";
  bed.op = op;
  bed.time_kind = TimeKind::kContinuous;
  bed.grid = grid;
  return bed;
}

Testbed schrodinger_well_testbed(Eigen::Index n, double depth) {
  if (n < 2) throw InvalidArgument("quantum well testbed needs n >= 2");
  const double h = 2.0 / static_cast<double>(n + 1);
  Grid grid;
  grid.points.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) grid.points[i] = -1.0 + h * static_cast<double>(i + 1);

  Matrix op = Matrix::Zero(n, n);
  const double inv_h2 = 1.0 / (h * h);
  for (Eigen::Index i = 0; i < n; ++i) {
    op(i, i) = 2.0 * inv_h2;
    if (i > 0) op(i, i - 1) = -inv_h2;
    if (i + 1 < n) op(i, i + 1) = -inv_h2;
    if (std::abs(grid.points[i]) <= 0.5) op(i, i) -= depth;
  }

  Testbed bed;
  bed.name = "schrodinger_well";
  bed.op = op;
  bed.time_kind = TimeKind::kContinuous;
  bed.grid = grid;
  bed.generator_scale = cd(0.0, -1.0);  // i du/dt = H u
  return bed;
}

Testbed volterra_testbed(Eigen::Index n) {
  if (n < 8) throw InvalidArgument("volterra testbed needs n >= 8");
  const double h = 2.0 / static_cast<double>(n - 1);
  Grid grid;
  grid.points.resize(n);
  for (Eigen::Index l = 0; l < n; ++l) grid.points[l] = -1.0 + h * static_cast<double>(l);

  auto kernel_leg = [](double t) { return std::sqrt(std::max(0.0, 1.0 - t * t)); };
  // State i holds u at xi_i = points[n-1-i]; the integral over [-1, xi_i]
  // touches states j >= i only.
  Matrix op = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = grid.points[n - 1 - i];
    const Eigen::Index nodes = n - i;
    if (nodes < 2) continue;  // integral over a single point
    for (Eigen::Index j = i; j < n; ++j) {
      const double nu = grid.points[n - 1 - j];
      double w = h;
      if (j == i || j == n - 1) w = h / 2.0;
      op(i, j) = w * kernel_leg(xi) * kernel_leg(nu);
    }
  }

  Testbed bed;
  bed.name = "volterra";
  bed.op = op;
  bed.time_kind = TimeKind::kContinuous;
  bed.grid = grid;
  return bed;
}

Matrix random_manifold_operator(ManifoldKind kind, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("operator size must be positive");
  switch (kind) {
    case ManifoldKind::kUnitary: {
      RealMatrix b = random_real_matrix(n, n, seed);
      Eigen::HouseholderQR<RealMatrix> qr(b);
      RealMatrix q = qr.householderQ();
      RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (Eigen::Index i = 0; i < n; ++i)
        if (r(i, i) < 0.0) q.col(i) = -q.col(i);
      return q.cast<cd>();
    }
    case ManifoldKind::kSymmetric: {
      RealMatrix b = random_real_matrix(n, n, seed);
      return ((b + b.transpose()) / 2.0).cast<cd>();
    }
    case ManifoldKind::kSkew: {
      RealMatrix b = random_real_matrix(n, n, seed);
      return ((b - b.transpose()) / 2.0).cast<cd>();
    }
    case ManifoldKind::kCirculant: {
      Vector a_hat = random_complex_matrix(n, 1, seed);
      return circulant_from_eigenvalues(a_hat);
    }
    case ManifoldKind::kTridiagonal: {
      RealMatrix b = random_real_matrix(n, 3, seed);
      Matrix op = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        op(i, i) = b(i, 1);
        if (i > 0) op(i, i - 1) = b(i, 0);
        if (i + 1 < n) op(i, i + 1) = b(i, 2);
      }
      return op;
    }
    case ManifoldKind::kSymmetricTridiagonal: {
      RealMatrix b = random_real_matrix(n, 2, seed);
      Matrix op = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        op(i, i) = b(i, 0);
        if (i + 1 < n) {
          op(i, i + 1) = b(i, 1);
          op(i + 1, i) = b(i, 1);
        }
      }
      return op;
    }
    case ManifoldKind::kUpperTriangular: {
      RealMatrix b = random_real_matrix(n, n, seed);
      Matrix op = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) op(i, j) = b(i, j);
      return op;
    }
    case ManifoldKind::kToeplitz: {
      RealMatrix coeffs = random_real_matrix(2 * n - 1, 1, seed);  // offsets -(n-1)..n-1
      Matrix op(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) op(i, j) = coeffs(i - j + n - 1, 0);
      return op;
    }
    case ManifoldKind::kHankel: {
      RealMatrix coeffs = random_real_matrix(2 * n - 1, 1, seed);  // anti-diagonals 0..2n-2
      Matrix op(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) op(i, j) = coeffs(i + j, 0);
      return op;
    }
  }
  throw InvalidArgument("unknown manifold kind");
}

Matrix evolve(const Testbed& bed, const Vector& x0, Eigen::Index m, double dt) {
  if (x0.size() != bed.op.rows()) throw InvalidArgument("initial condition has wrong dimension");
  if (m < 1) throw InvalidArgument("need at least one snapshot");
  Matrix series(x0.size(), m);
  series.col(0) = x0;
  if (bed.time_kind == TimeKind::kDiscrete) {
    for (Eigen::Index j = 1; j < m; ++j) series.col(j) = bed.op * series.col(j - 1);
  } else {
    if (!(dt > 0.0)) throw InvalidArgument("continuous evolution needs dt > 0");
    const Matrix propagator = matrix_exponential(bed.generator_scale * dt * bed.op);
    for (Eigen::Index j = 1; j < m; ++j) series.col(j) = propagator * series.col(j - 1);
  }
  return series;
}

}  // namespace pidmd

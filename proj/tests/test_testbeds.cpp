#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "oracles.hpp"
#include "pidmd/linalg.hpp"
#include "pidmd/testbeds.hpp"
#include "support.hpp"

using namespace pidmd;

TEST_CASE("advection with zero speed is the identity") {
  const Testbed bed = advection_testbed(8, 0.0, 0.5);
  CHECK((bed.op - Matrix::Identity(8, 8)).norm() <= 1e-12);
  REQUIRE(bed.analytic_spectrum.has_value());
  CHECK((*bed.analytic_spectrum - Vector::Ones(8)).norm() <= 1e-12);
}

TEST_CASE("advection eigenvalues follow the dispersion relation") {
  const Testbed bed = advection_testbed(4, 1.0, 0.5);
  REQUIRE(bed.analytic_spectrum.has_value());
  const Vector& s = *bed.analytic_spectrum;
  for (Eigen::Index j = 0; j < 4; ++j) {
    const double k = static_cast<double>(fft_wavenumber(j, 4));
    const cd want = std::exp(cd(0.0, -M_PI * k * 0.5));
    CHECK(std::abs(s[j] - want) <= 1e-12);
  }
}

TEST_CASE("advection operator translates a pure Fourier mode") {
  const Eigen::Index n = 32;
  const double c = 1.3, dt = 0.07;
  const Testbed bed = advection_testbed(n, c, dt);
  Vector u(n);
  for (Eigen::Index l = 0; l < n; ++l)
    u[l] = std::exp(cd(0.0, M_PI * bed.grid.points[l]));
  const Vector v = bed.op * u;
  const cd factor = std::exp(cd(0.0, -M_PI * c * dt));
  CHECK((v - factor * u).norm() <= 1e-12 * u.norm());
}

TEST_CASE("advection rejects odd or tiny sizes and bad steps") {
  CHECK_THROWS_AS(advection_testbed(7, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(advection_testbed(2, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(advection_testbed(8, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("convection-diffusion interior stencil is pure diffusion when the wind is off") {
  const Eigen::Index n = 16;
  const Testbed bed = convection_diffusion_testbed(n, 5, 0.0);
  const double inv_h2 = 1.0 / ((2.0 / n) * (2.0 / n));
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    CHECK(std::abs(bed.op(i, i - 1) - cd(inv_h2, 0)) <= 1e-9 * inv_h2);
    CHECK(std::abs(bed.op(i, i) - cd(-2.0 * inv_h2, 0)) <= 1e-9 * inv_h2);
    CHECK(std::abs(bed.op(i, i + 1) - cd(inv_h2, 0)) <= 1e-9 * inv_h2);
  }
}

TEST_CASE("convection-diffusion operator is tridiagonal for any seed") {
  for (std::uint64_t seed : {1ull, 2ull, 9ull}) {
    const Testbed bed = convection_diffusion_testbed(12, seed);
    for (Eigen::Index i = 0; i < 12; ++i)
      for (Eigen::Index j = 0; j < 12; ++j)
        if (std::abs(i - j) > 1) CHECK(bed.op(i, j) == cd(0, 0));
  }
}

TEST_CASE("convection-diffusion exponential matches an RK4 integration") {
  const Testbed bed = convection_diffusion_testbed(24, 3);
  const Vector x0 = support::random_real(24, 1, 44);
  const double t = 0.1;
  const Vector via_expm = matrix_exponential(bed.op * t) * x0;
  const Vector via_rk4 = oracle::rk4(bed.op, x0, t, 4000);
  CHECK((via_expm - via_rk4).norm() <= 1e-6 * via_rk4.norm());
}

TEST_CASE("convection-diffusion rejects small n") {
  CHECK_THROWS_AS(convection_diffusion_testbed(7, 1), InvalidArgument);
}

TEST_CASE("quantum well Hamiltonian is real symmetric") {
  const Testbed bed = schrodinger_well_testbed(20, 10.0);
  CHECK(bed.op.imag().norm() == 0.0);
  CHECK((bed.op - bed.op.transpose()).norm() == 0.0);
  CHECK(bed.generator_scale == cd(0.0, -1.0));
}

TEST_CASE("free-particle Hamiltonian is positive semidefinite") {
  const Testbed bed = schrodinger_well_testbed(18, 0.0);
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(bed.op.real());
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("quantum well eigenvalues match a dense symmetric solve") {
  const Testbed bed = schrodinger_well_testbed(16, 25.0);
  Eigen::SelfAdjointEigenSolver<RealMatrix> sym(bed.op.real());
  Eigen::ComplexEigenSolver<Matrix> dense(bed.op);
  Vector a = sym.eigenvalues().cast<cd>();
  CHECK(support::spectra_distance(a, dense.eigenvalues()) <= 1e-10 * bed.op.norm());
}

TEST_CASE("volterra operator is exactly upper triangular") {
  const Testbed bed = volterra_testbed(16);
  for (Eigen::Index i = 0; i < 16; ++i)
    for (Eigen::Index j = 0; j < i; ++j) CHECK(bed.op(i, j) == cd(0, 0));
}

TEST_CASE("volterra kernel vanishes at the domain endpoints") {
  const Eigen::Index n = 16;
  const Testbed bed = volterra_testbed(n);
  // State 0 sits at xi = +1 and the last column multiplies u at xi = -1.
  CHECK(bed.op.row(0).norm() == 0.0);
  CHECK(bed.op.col(n - 1).norm() == 0.0);
}

TEST_CASE("volterra rows integrate the kernel to quadrature accuracy") {
  const Eigen::Index n = 64;
  const Testbed bed = volterra_testbed(n);
  const double h = 2.0 / static_cast<double>(n - 1);
  const Vector ones = Vector::Ones(n);
  const Vector sums = bed.op * ones;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = bed.grid.points[n - 1 - i];
    const double want = oracle::volterra_row_integral(xi);
    // The integrand's square-root endpoints limit the trapezoid rule to
    // O(h^1.5) near nu = -1; allow that order with a modest constant.
    CHECK(std::abs(sums[i].real() - want) <= 2.0 * std::pow(h, 1.5));
  }
}

TEST_CASE("volterra rejects small n") { CHECK_THROWS_AS(volterra_testbed(4), InvalidArgument); }

TEST_CASE("random manifold operators land on their manifolds") {
  const Eigen::Index n = 7;
  const Matrix q = random_manifold_operator(ManifoldKind::kUnitary, n, 2);
  CHECK((q.adjoint() * q - Matrix::Identity(n, n)).norm() <= 1e-12 * n);

  const Matrix s = random_manifold_operator(ManifoldKind::kSymmetric, n, 3);
  CHECK((s - s.adjoint()).norm() <= 1e-14);
  Eigen::ComplexEigenSolver<Matrix> eig(s);
  CHECK(eig.eigenvalues().imag().cwiseAbs().maxCoeff() <= 1e-12);

  const Matrix c = random_manifold_operator(ManifoldKind::kCirculant, n, 4);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      CHECK(std::abs(c(i, j) - c((i + 1) % n, (j + 1) % n)) <= 1e-12);

  const Matrix t = random_manifold_operator(ManifoldKind::kTridiagonal, n, 5);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(i - j) > 1) CHECK(t(i, j) == cd(0, 0));

  const Matrix st = random_manifold_operator(ManifoldKind::kSymmetricTridiagonal, n, 6);
  CHECK((st - st.transpose()).norm() == 0.0);

  const Matrix u = random_manifold_operator(ManifoldKind::kUpperTriangular, n, 7);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) CHECK(u(i, j) == cd(0, 0));

  const Matrix tp = random_manifold_operator(ManifoldKind::kToeplitz, n, 8);
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    for (Eigen::Index j = 0; j + 1 < n; ++j) CHECK(tp(i, j) == tp(i + 1, j + 1));

  const Matrix hk = random_manifold_operator(ManifoldKind::kHankel, n, 9);
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    for (Eigen::Index j = 1; j < n; ++j) CHECK(hk(i, j) == hk(i + 1, j - 1));
}

TEST_CASE("generators are deterministic per seed") {
  CHECK(random_manifold_operator(ManifoldKind::kUnitary, 6, 11) ==
        random_manifold_operator(ManifoldKind::kUnitary, 6, 11));
  CHECK(convection_diffusion_testbed(10, 21).op == convection_diffusion_testbed(10, 21).op);
}

TEST_CASE("discrete evolution iterates the operator exactly") {
  const Testbed bed = advection_testbed(16, 0.8, 0.05);
  const Vector x0 = support::random_complex(16, 1, 5);
  const Matrix series = evolve(bed, x0, 6, 0.05);
  REQUIRE(series.cols() == 6);
  CHECK(series.col(0) == x0);
  for (Eigen::Index j = 1; j < 6; ++j)
    CHECK(series.col(j) == Matrix(bed.op * series.col(j - 1)));
}

TEST_CASE("continuous evolution applies the exponential propagator") {
  const Testbed bed = convection_diffusion_testbed(12, 2);
  const Vector x0 = support::random_real(12, 1, 6);
  const double dt = 0.02;
  const Matrix series = evolve(bed, x0, 4, dt);
  const Matrix prop = matrix_exponential(bed.op * dt);
  CHECK((series.col(1) - prop * series.col(0)).norm() <= 1e-12 * series.col(1).norm());
  CHECK((series.col(3) - prop * series.col(2)).norm() <= 1e-12 * series.col(3).norm());
}

TEST_CASE("testbed spectra agree with a dense eigensolver") {
  const Testbed bed = advection_testbed(16, 1.1, 0.04);
  Eigen::ComplexEigenSolver<Matrix> eig(bed.op);
  CHECK(support::spectra_distance(*bed.analytic_spectrum, eig.eigenvalues()) <= 1e-10);
}

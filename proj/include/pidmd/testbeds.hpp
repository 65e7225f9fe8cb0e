#ifndef PIDMD_TESTBEDS_HPP
#define PIDMD_TESTBEDS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "pidmd/types.hpp"

namespace pidmd {

// Structured-operator families used by the fitters and generators.
enum class ManifoldKind : unsigned char {
  kCirculant,
  kToeplitz,
  kHankel,
  kUnitary,
  kSymmetric,
  kSkew,
  kTridiagonal,
  kSymmetricTridiagonal,
  kUpperTriangular,
};

// A synthetic system with a known operator. For continuous testbeds the state
// evolves as du/dt = generator_scale * op * u; `op` is the operator a fitter
// is expected to identify (for the quantum well that is the Hamiltonian, with
// generator_scale = -i).
struct Testbed {
  std::string name;
  Matrix op;
  TimeKind time_kind = TimeKind::kDiscrete;
  Grid grid;
  std::optional<Vector> analytic_spectrum;
  cd generator_scale{1.0, 0.0};
};

// Periodic advection u_t + c u_xi = 0 on [-1,1), sampled exactly: a circulant
// map with eigenvalue exp(-i pi k c dt) at integer wavenumber k. n must be even.
Testbed advection_testbed(Eigen::Index n, double wave_speed, double dt);

// u_t = u_xixi + a(xi) u_xi on [-1,1] with u_xi(-1) = 0 and u(1) = 0, second
// order central differences, boundary conditions eliminated so the operator
// stays strictly tridiagonal. a(xi) is a seeded low-order Fourier series
// multiplied by wind_scale; 0 turns the convection term off.
Testbed convection_diffusion_testbed(Eigen::Index n, std::uint64_t seed, double wind_scale = 1.0);

// i du/dt = H u with H = second-difference kinetic term plus a finite square
// well of the given depth on [-1,1]; H is real symmetric.
Testbed schrodinger_well_testbed(Eigen::Index n, double depth);

// du/dt(xi) = integral_{-1}^{xi} sqrt(1-xi^2) sqrt(1-nu^2) u(nu) dnu by
// trapezoid quadrature. States are ordered by descending xi so the operator is
// upper triangular (each state depends only on states downstream of it);
// grid.points stores the ascending coordinates.
Testbed volterra_testbed(Eigen::Index n);

// Random member of the requested manifold, deterministic per seed.
Matrix random_manifold_operator(ManifoldKind kind, Eigen::Index n, std::uint64_t seed);

// m snapshot columns starting at x0: discrete testbeds iterate op, continuous
// ones apply exp(generator_scale * op * dt) per step.
Matrix evolve(const Testbed& bed, const Vector& x0, Eigen::Index m, double dt);

}  // namespace pidmd

#endif  // PIDMD_TESTBEDS_HPP

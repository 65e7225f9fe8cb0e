#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pidmd/causal.hpp"
#include "pidmd/linalg.hpp"
#include "pidmd/testbeds.hpp"
#include "support.hpp"

using namespace pidmd;

namespace {

// Any factorization X = R Q with Q having orthonormal rows works for the
// residual split below; build one through QR of X^*.
void reference_rq(const Matrix& x, Matrix& r, Matrix& q) {
  const Eigen::Index k = std::min(x.rows(), x.cols());
  Eigen::HouseholderQR<Matrix> qr(x.adjoint());
  const Matrix qt = qr.householderQ() * Matrix::Identity(x.cols(), k);
  const Matrix rt = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  r = rt.adjoint();
  q = qt.adjoint();
}

}  // namespace

TEST_CASE("a discretized integral operator step map is recovered exactly") {
  const Eigen::Index n = 16;
  const double dt = 0.1;
  const Testbed bed = volterra_testbed(n);
  const Matrix truth = matrix_exponential(dt * bed.op);
  const SnapshotPair pair = support::pair_from_operator(truth, 2 * n, 1);
  for (const TriangularMethod method :
       {TriangularMethod::kNaive, TriangularMethod::kFastUpdate, TriangularMethod::kRqStable}) {
    const TriangularModel model = fit_triangular(pair, method);
    CHECK(support::rel_error(materialize(model), truth) <= 1e-8);
  }
}

TEST_CASE("single-state fit is the scalar row regression") {
  const Matrix x = support::random_complex(1, 5, 2);
  const Matrix y = support::random_complex(1, 5, 3);
  const SnapshotPair pair = support::pair_from_data(x, y);
  const TriangularModel model = fit_triangular(pair);
  const cd want = (y.row(0).cwiseProduct(x.row(0).conjugate())).sum() / x.row(0).squaredNorm();
  CHECK(std::abs(model.rows[0](0) - want) <= 1e-12);
}

TEST_CASE("the three methods agree with each other and the brute-force oracle") {
  const Eigen::Index n = 8;
  const SnapshotPair pair = support::pair_from_data(support::random_complex(n, 12, 4),
                                                    support::random_complex(n, 12, 5));
  const Matrix naive = materialize(fit_triangular(pair, TriangularMethod::kNaive));
  const Matrix fast = materialize(fit_triangular(pair, TriangularMethod::kFastUpdate));
  const Matrix rq = materialize(fit_triangular(pair, TriangularMethod::kRqStable));
  CHECK(support::rel_error(fast, naive) <= 1e-6);
  CHECK(support::rel_error(rq, naive) <= 1e-6);
  const Matrix want = oracle::best_on_span(oracle::upper_triangular_basis(n), pair.X, pair.Y);
  CHECK(support::rel_error(naive, want) <= 1e-6);
}

TEST_CASE("residual splits across the orthogonal factor") {
  const Eigen::Index n = 10, m = 20;
  const SnapshotPair pair = support::pair_from_data(support::random_complex(n, m, 6),
                                                    support::random_complex(n, m, 7));
  const Matrix a = materialize(fit_triangular(pair, TriangularMethod::kRqStable));
  Matrix r, q;
  reference_rq(pair.X, r, q);
  REQUIRE((pair.X - r * q).norm() <= 1e-10 * pair.X.norm());
  const double lhs = (pair.Y - a * pair.X).squaredNorm();
  const double rhs = pair.Y.squaredNorm() - (pair.Y * q.adjoint()).squaredNorm() +
                     (pair.Y * q.adjoint() - a * r).squaredNorm();
  CHECK(std::abs(lhs - rhs) <= 1e-8 * pair.Y.squaredNorm());
}

TEST_CASE("structure always costs residual relative to the unconstrained fit") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const SnapshotPair pair =
        support::pair_from_data(support::random_complex(7, 11, 100 + seed),
                                support::random_complex(7, 11, 200 + seed));
    const double base = support::unconstrained_residual(pair);
    for (const TriangularMethod method :
         {TriangularMethod::kNaive, TriangularMethod::kFastUpdate, TriangularMethod::kRqStable}) {
      const double res = support::ls_residual(materialize(fit_triangular(pair, method)), pair);
      CHECK(res >= base - 1e-12);
    }
  }
}

TEST_CASE("fast updates track the naive fit on well-conditioned data") {
  // n > 50 exercises the periodic refresh of the running pseudoinverse.
  const Eigen::Index n = 60, m = 90;
  const SnapshotPair pair = support::pair_from_data(support::random_complex(n, m, 8),
                                                    support::random_complex(n, m, 9));
  REQUIRE(condition_number(pair.X) <= 1e6);
  const Matrix naive = materialize(fit_triangular(pair, TriangularMethod::kNaive));
  const Matrix fast = materialize(fit_triangular(pair, TriangularMethod::kFastUpdate));
  const Matrix rq = materialize(fit_triangular(pair, TriangularMethod::kRqStable));
  CHECK(support::rel_error(fast, naive) <= 1e-6);
  CHECK(support::rel_error(rq, naive) <= 1e-6);
}

TEST_CASE("fewer samples than states gives the minimum-norm interpolant") {
  const Eigen::Index n = 12, m = 6;
  const Matrix truth = random_manifold_operator(ManifoldKind::kUpperTriangular, n, 10);
  const SnapshotPair pair = support::pair_from_operator(truth, m, 11);
  const TriangularModel naive = fit_triangular(pair, TriangularMethod::kNaive);
  const TriangularModel rq = fit_triangular(pair, TriangularMethod::kRqStable);
  // Consistent data: both interpolate, and the minimum-norm solutions agree.
  CHECK(support::ls_residual(materialize(naive), pair) <= 1e-8 * pair.Y.norm());
  CHECK(support::ls_residual(materialize(rq), pair) <= 1e-8 * pair.Y.norm());
  CHECK(support::rel_error(materialize(rq), materialize(naive)) <= 1e-6);
  // Rows with more unknowns than samples are flagged.
  for (Eigen::Index i = 0; i < n - m; ++i)
    CHECK(rq.row_status[static_cast<std::size_t>(i)] == RowStatus::kUndetermined);
}

TEST_CASE("identity data yields unit eigenvalues and coordinate modes") {
  const Matrix x = support::random_complex(6, 10, 12);
  const SnapshotPair pair = support::pair_from_data(x, x);
  const TriangularModel model = fit_triangular(pair);
  const Spectrum spec = triangular_eigenvalues(model);
  for (Eigen::Index k = 0; k < 6; ++k) {
    CHECK(std::abs(spec.eigenvalues(k) - cd(1.0, 0.0)) <= 1e-10);
    CHECK_FALSE(spec.unreliable[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("triangular eigenvalues are the diagonal of the recovered operator") {
  const Eigen::Index n = 16;
  const double dt = 0.15;
  const Testbed bed = volterra_testbed(n);
  const Matrix truth = matrix_exponential(dt * bed.op);
  const SnapshotPair pair = support::pair_from_operator(truth, 2 * n, 13);
  const TriangularModel model = fit_triangular(pair, TriangularMethod::kRqStable);
  const Spectrum spec = triangular_eigenvalues(model);
  CHECK(support::spectra_distance(spec.eigenvalues, truth.diagonal()) <= 1e-8);
}

TEST_CASE("eigen decomposition matches a dense solver on separated spectra") {
  const Eigen::Index n = 9;
  Matrix truth = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    truth(i, i) = cd(1.0 + 0.35 * static_cast<double>(i), 0.2 * static_cast<double>(i));
    for (Eigen::Index j = i + 1; j < n; ++j)
      truth(i, j) = support::random_complex(1, 1, 50 + static_cast<std::uint64_t>(i * n + j))(0, 0);
  }
  const SnapshotPair pair = support::pair_from_operator(truth, 3 * n, 14);
  const TriangularModel model = fit_triangular(pair);
  const Spectrum spec = triangular_eigenvalues(model);
  const Matrix a = materialize(model);

  Eigen::ComplexEigenSolver<Matrix> eig(a);
  CHECK(support::spectra_distance(spec.eigenvalues, eig.eigenvalues()) <= 1e-10);
  for (Eigen::Index k = 0; k < n; ++k) {
    CHECK_FALSE(spec.unreliable[static_cast<std::size_t>(k)]);
    const Vector v = spec.modes.col(k);
    CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    CHECK((a * v - spec.eigenvalues(k) * v).norm() <= 1e-8 * a.norm());
  }
}

TEST_CASE("defective pairs are marked unreliable") {
  TriangularModel model;
  model.n = 2;
  model.rows.resize(2);
  model.rows[0] = Eigen::RowVectorXcd(2);
  model.rows[0] << cd(1.0, 0.0), cd(1.0, 0.0);
  model.rows[1] = Eigen::RowVectorXcd(1);
  model.rows[1] << cd(1.0, 0.0);
  model.row_status.assign(2, RowStatus::kOk);
  const Spectrum spec = triangular_eigenvalues(model);
  int flagged = 0;
  for (bool b : spec.unreliable) flagged += b ? 1 : 0;
  CHECK(flagged == 1);
}

TEST_CASE("flagged rows carry into the spectrum") {
  const Eigen::Index n = 6, m = 10;
  Matrix x = support::random_complex(n, m, 15);
  x.row(n - 1).setZero();  // kills the last pivot of the triangular factor
  const SnapshotPair pair = support::pair_from_data(x, support::random_complex(n, m, 16));
  const TriangularModel model = fit_triangular(pair, TriangularMethod::kRqStable);
  CHECK(model.row_status[static_cast<std::size_t>(n - 1)] == RowStatus::kSmallPivot);
  const Spectrum spec = triangular_eigenvalues(model);
  int flagged = 0;
  for (bool b : spec.unreliable) flagged += b ? 1 : 0;
  CHECK(flagged >= 1);
}

TEST_CASE("lower-triangular fits mirror the upper-triangular solver") {
  const Eigen::Index n = 8;
  const Matrix upper = random_manifold_operator(ManifoldKind::kUpperTriangular, n, 17);
  const Matrix truth = upper.reverse();  // lower triangular
  const SnapshotPair pair = support::pair_from_operator(truth, 20, 18);
  const Matrix got = fit_lower_triangular(pair);
  CHECK(support::rel_error(got, truth) <= 1e-8);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) CHECK(got(i, j) == cd(0, 0));
}

TEST_CASE("materialized fits are exactly zero below the diagonal") {
  const SnapshotPair pair = support::pair_from_data(support::random_complex(7, 9, 19),
                                                    support::random_complex(7, 9, 20));
  for (const TriangularMethod method :
       {TriangularMethod::kNaive, TriangularMethod::kFastUpdate, TriangularMethod::kRqStable}) {
    const Matrix a = materialize(fit_triangular(pair, method));
    for (Eigen::Index i = 0; i < 7; ++i)
      for (Eigen::Index j = 0; j < i; ++j) CHECK(a(i, j) == cd(0, 0));
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "pidmd/diagnostics.hpp"
#include "pidmd/matrix_io.hpp"
#include "pidmd/model_io.hpp"

using namespace pidmd;
using nlohmann::json;

namespace {

const std::string kCli = PIDMD_CLI_PATH;

std::string fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "pidmd_cli" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

// Returns the tool's exit code; stdout/stderr go to /dev/null unless a
// capture path for stderr is given.
int run_cli(const std::string& args, const std::string& stderr_path = "") {
  std::string cmd = kCli + " " + args + " >/dev/null 2>";
  cmd += stderr_path.empty() ? std::string("/dev/null") : stderr_path;
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("generate writes snapshots, truth spectrum and metadata") {
  const std::string dir = fresh_dir("gen");
  REQUIRE(run_cli("generate advection --n 32 --m 40 --dt 0.05 --noise 0.02 --seed 7 --out " +
                  dir) == 0);

  const Matrix x = load_matrix_file(dir + "/X.csv");
  const Matrix y = load_matrix_file(dir + "/Y.csv");
  REQUIRE(x.rows() == 32);
  REQUIRE(x.cols() == 39);  // 40 snapshots pair into 39 columns
  REQUIRE(y.rows() == 32);
  REQUIRE(y.cols() == 39);
  // Pairs come from one noisy series, so the shift identity is exact.
  CHECK((x.rightCols(38) - y.leftCols(38)).norm() == 0.0);

  const Matrix truth = load_matrix_file(dir + "/truth_spectrum.csv");
  REQUIRE(truth.rows() == 32);
  REQUIRE(truth.cols() == 1);
  for (Eigen::Index j = 0; j < 32; ++j) CHECK(std::abs(std::abs(truth(j, 0)) - 1.0) <= 1e-12);
  // Row 1 carries wavenumber 1: one step advances its phase by -pi*c*dt.
  const cd expected = std::polar(1.0, -M_PI * 1.0 * 0.05);
  CHECK(std::abs(truth(1, 0) - expected) <= 1e-12);

  const json meta = read_json(dir + "/meta.json");
  CHECK(meta.at("schema_version").get<int>() == 1);
  CHECK(meta.at("testbed") == "advection");
  CHECK(meta.at("n").get<int>() == 32);
  CHECK(meta.at("m").get<int>() == 40);
  CHECK(meta.at("dt").get<double>() == 0.05);
  CHECK(meta.at("noise").get<double>() == 0.02);
  CHECK(meta.at("seed").get<int>() == 7);
  CHECK(meta.at("time_kind") == "discrete");
  CHECK(meta.at("truth_is_one_step_map").get<bool>());
  CHECK(meta.at("wave_speed").get<double>() == 1.0);
  CHECK(meta.at("grid").at("periodic").get<bool>());
  CHECK(meta.at("grid").at("points").size() == 32);
}

TEST_CASE("generate is deterministic in the seed and sensitive to it") {
  const std::string a = fresh_dir("det_a");
  const std::string b = fresh_dir("det_b");
  const std::string c = fresh_dir("det_c");
  const std::string args = "generate advection --n 16 --m 20 --noise 0.05 ";
  REQUIRE(run_cli(args + "--seed 3 --out " + a) == 0);
  REQUIRE(run_cli(args + "--seed 3 --out " + b) == 0);
  REQUIRE(run_cli(args + "--seed 4 --out " + c) == 0);
  CHECK(read_file(a + "/X.csv") == read_file(b + "/X.csv"));
  CHECK(read_file(a + "/Y.csv") == read_file(b + "/Y.csv"));
  CHECK(read_file(a + "/X.csv") != read_file(c + "/X.csv"));
}

TEST_CASE("every testbed generates files with the requested shape") {
  for (const std::string bed : {"advection", "convection_diffusion", "schrodinger", "volterra"}) {
    const std::string dir = fresh_dir("bed_" + bed);
    REQUIRE(run_cli("generate " + bed + " --n 16 --m 12 --seed 2 --out " + dir) == 0);
    const Matrix x = load_matrix_file(dir + "/X.csv");
    CHECK(x.rows() == 16);
    CHECK(x.cols() == 11);
    CHECK(load_matrix_file(dir + "/truth_spectrum.csv").rows() == 16);
  }
}

TEST_CASE("fit writes a loadable model directory and a fit report") {
  const std::string gen = fresh_dir("fit_gen");
  const std::string out = fresh_dir("fit_out");
  REQUIRE(run_cli("generate advection --n 32 --m 60 --dt 0.05 --seed 5 --out " + gen) == 0);
  REQUIRE(run_cli("fit --x " + gen + "/X.csv --y " + gen + "/Y.csv --manifold circulant --out " +
                  out) == 0);

  const json report = read_json(out + "/report.json");
  CHECK(report.at("schema_version").get<int>() == 1);
  CHECK(report.at("manifold") == "circulant");
  CHECK(report.at("n").get<int>() == 32);
  CHECK(report.at("m").get<int>() == 59);
  CHECK(report.at("residual").get<double>() >= 0.0);
  CHECK(report.at("relative_residual").get<double>() <= 1e-8);  // clean circulant data
  CHECK(report.at("fit_seconds").get<double>() >= 0.0);
  CHECK(report.at("flags").at("flagged_rows").get<int>() == 0);

  const PiDmdModel model = load_model(out);
  CHECK(std::holds_alternative<CirculantModel>(model));
  const Matrix op = load_matrix_file(out + "/operator.csv");
  CHECK((op - materialize(model)).norm() == 0.0);
}

TEST_CASE("fit accepts a full series and reports the pair count") {
  const std::string dir = fresh_dir("series");
  Matrix series = Matrix::Random(6, 10);
  save_matrix_file(dir + "/series.csv", series);
  REQUIRE(run_cli("fit --series " + dir + "/series.csv --manifold exact --rank 4 --out " + dir +
                  "/model") == 0);
  const json report = read_json(dir + "/model/report.json");
  CHECK(report.at("n").get<int>() == 6);
  CHECK(report.at("m").get<int>() == 9);  // 10 snapshots pair into 9 columns
  CHECK(report.at("flags").at("rank").get<int>() == 4);
}

TEST_CASE("unitary fits report uniqueness flags") {
  const std::string gen = fresh_dir("uni_gen");
  const std::string out = fresh_dir("uni_out");
  REQUIRE(run_cli("generate advection --n 16 --m 40 --seed 9 --out " + gen) == 0);
  REQUIRE(run_cli("fit --x " + gen + "/X.csv --y " + gen + "/Y.csv --manifold unitary --out " +
                  out) == 0);
  const json flags = read_json(out + "/report.json").at("flags");
  CHECK(flags.contains("unique"));
  CHECK(flags.contains("undetermined"));
}

TEST_CASE("spectrum command writes eigenvalues and optional modes") {
  const std::string gen = fresh_dir("spec_gen");
  const std::string out = fresh_dir("spec_out");
  REQUIRE(run_cli("generate advection --n 16 --m 40 --dt 0.05 --seed 11 --out " + gen) == 0);
  REQUIRE(run_cli("fit --x " + gen + "/X.csv --y " + gen + "/Y.csv --manifold circulant --out " +
                  out) == 0);
  REQUIRE(run_cli("spectrum --model " + out + " --out " + out + "/eig.csv --modes " + out +
                  "/modes.csv") == 0);

  const Matrix eig = load_matrix_file(out + "/eig.csv");
  const Matrix modes = load_matrix_file(out + "/modes.csv");
  REQUIRE(eig.rows() == 16);
  REQUIRE(eig.cols() == 1);
  CHECK(modes.rows() == 16);
  CHECK(modes.cols() == 16);
  const Spectrum want = spectrum(load_model(out));
  CHECK((eig.col(0) - want.eigenvalues).norm() == 0.0);
}

TEST_CASE("predict command propagates an initial state") {
  const std::string gen = fresh_dir("pred_gen");
  const std::string out = fresh_dir("pred_out");
  REQUIRE(run_cli("generate advection --n 16 --m 40 --dt 0.05 --seed 13 --out " + gen) == 0);
  REQUIRE(run_cli("fit --x " + gen + "/X.csv --y " + gen + "/Y.csv --manifold circulant --out " +
                  out) == 0);
  const Matrix x = load_matrix_file(gen + "/X.csv");
  save_matrix_file(out + "/x0.csv", x.col(0));
  REQUIRE(run_cli("predict --model " + out + " --x0 " + out + "/x0.csv --steps 5 --out " + out +
                  "/traj.csv") == 0);

  const Matrix traj = load_matrix_file(out + "/traj.csv");
  REQUIRE(traj.rows() == 16);
  REQUIRE(traj.cols() == 6);
  CHECK((traj.col(0) - x.col(0)).norm() == 0.0);
  const Matrix op = materialize(load_model(out));
  CHECK((traj.col(1) - op * x.col(0)).norm() <= 1e-12 * x.col(0).norm());
}

TEST_CASE("resolvent command writes gains, forcings and responses") {
  const std::string gen = fresh_dir("res_gen");
  const std::string out = fresh_dir("res_out");
  REQUIRE(run_cli("generate convection_diffusion --n 16 --m 40 --seed 17 --out " + gen) == 0);
  REQUIRE(run_cli("fit --x " + gen + "/X.csv --y " + gen + "/Y.csv --manifold tridiagonal --out " +
                  out) == 0);
  REQUIRE(run_cli("resolvent --model " + out + " --omega 1.0 --count 2 --out " + out + "/res") ==
          0);

  const Matrix gains = load_matrix_file(out + "/res/gains.csv");
  const Matrix forcings = load_matrix_file(out + "/res/forcings.csv");
  const Matrix responses = load_matrix_file(out + "/res/responses.csv");
  REQUIRE(gains.rows() == 2);
  REQUIRE(forcings.rows() == 16);
  REQUIRE(forcings.cols() == 2);
  REQUIRE(responses.rows() == 16);
  REQUIRE(responses.cols() == 2);
  const ResolventSet want = resolvent_modes(load_model(out), 1.0, 2);
  CHECK((gains.col(0).real() - want.gains).norm() == 0.0);
  CHECK((forcings - want.forcings).norm() == 0.0);
}

TEST_CASE("compare command reports spectral errors for both models") {
  const std::string gen = fresh_dir("cmp_gen");
  const std::string out = fresh_dir("cmp_out");
  REQUIRE(run_cli("generate advection --n 16 --m 40 --dt 0.05 --seed 19 --out " + gen) == 0);
  REQUIRE(run_cli("compare --x " + gen + "/X.csv --y " + gen + "/Y.csv --manifold circulant " +
                  "--truth " + gen + "/truth_spectrum.csv --exact-rank 8 --out " + out) == 0);

  const json report = read_json(out + "/report.json");
  CHECK(report.at("schema_version").get<int>() == 1);
  CHECK(report.at("pidmd").at("matched_mean_abs_error").get<double>() <= 1e-8);
  CHECK(report.at("pidmd").at("residual").get<double>() >= 0.0);
  CHECK(report.at("exact").at("rank").get<int>() == 8);
  CHECK(load_matrix_file(out + "/pidmd_spectrum.csv").rows() == 16);
  CHECK(load_matrix_file(out + "/exact_spectrum.csv").rows() == 8);
}

TEST_CASE("CSV output round-trips bit for bit through the matrix reader") {
  const std::string dir = fresh_dir("roundtrip");
  REQUIRE(run_cli("generate schrodinger --n 12 --m 8 --seed 23 --out " + dir) == 0);
  const Matrix x = load_matrix_file(dir + "/X.csv");
  save_matrix_file(dir + "/X_copy.csv", x);
  CHECK(read_file(dir + "/X.csv") == read_file(dir + "/X_copy.csv"));
}

TEST_CASE("unknown testbeds, manifolds and variants exit with code 2") {
  const std::string dir = fresh_dir("bad_args");
  REQUIRE(run_cli("generate advection --n 8 --m 6 --seed 1 --out " + dir) == 0);
  CHECK(run_cli("generate warp_drive --out " + dir + "/w") == 2);
  CHECK(run_cli("fit --x " + dir + "/X.csv --y " + dir + "/Y.csv --manifold nope --out " + dir +
                "/m") == 2);
  CHECK(run_cli("fit --x " + dir + "/X.csv --y " + dir + "/Y.csv --manifold circulant " +
                "--variant nope --out " + dir + "/m") == 2);
  CHECK(run_cli("fit --x " + dir + "/X.csv --y " + dir + "/Y.csv --manifold banded --out " + dir +
                "/m") == 2);  // banded without --lower/--upper
}

TEST_CASE("mismatched snapshot shapes exit with code 2 and name both shapes") {
  const std::string dir = fresh_dir("mismatch");
  save_matrix_file(dir + "/X.csv", Matrix::Random(4, 5));
  save_matrix_file(dir + "/Y.csv", Matrix::Random(3, 5));
  const int code = run_cli(
      "fit --x " + dir + "/X.csv --y " + dir + "/Y.csv --manifold exact --out " + dir + "/m",
      dir + "/err.txt");
  CHECK(code == 2);
  const std::string err = read_file(dir + "/err.txt");
  CHECK(err.find("4x5") != std::string::npos);
  CHECK(err.find("3x5") != std::string::npos);
}

TEST_CASE("conflicting or missing input flags exit with code 2") {
  const std::string dir = fresh_dir("flags");
  save_matrix_file(dir + "/X.csv", Matrix::Random(4, 6));
  // --series conflicts with --x/--y
  CHECK(run_cli("fit --x " + dir + "/X.csv --y " + dir + "/X.csv --series " + dir +
                "/X.csv --manifold exact --out " + dir + "/m") == 2);
  // no input at all
  CHECK(run_cli("fit --manifold exact --out " + dir + "/m") == 2);
  // --x without --y
  CHECK(run_cli("fit --x " + dir + "/X.csv --manifold exact --out " + dir + "/m") == 2);
  // missing required --manifold
  CHECK(run_cli("fit --series " + dir + "/X.csv --out " + dir + "/m") == 2);
  // missing required --out
  CHECK(run_cli("fit --series " + dir + "/X.csv --manifold exact") == 2);
  // no subcommand
  CHECK(run_cli("") == 2);
}

TEST_CASE("malformed CSV input exits with code 2") {
  const std::string dir = fresh_dir("bad_csv");
  std::ofstream(dir + "/X.csv") << "1,2\nfoo,4\n";
  std::ofstream(dir + "/Y.csv") << "1,2\n3,4\n";
  CHECK(run_cli("fit --x " + dir + "/X.csv --y " + dir + "/Y.csv --manifold exact --out " + dir +
                "/m") == 2);
}

TEST_CASE("predict rejects a multi-column initial state with code 2") {
  const std::string gen = fresh_dir("pred_bad");
  REQUIRE(run_cli("generate advection --n 8 --m 10 --seed 29 --out " + gen) == 0);
  REQUIRE(run_cli("fit --x " + gen + "/X.csv --y " + gen + "/Y.csv --manifold circulant --out " +
                  gen + "/m") == 0);
  save_matrix_file(gen + "/x0.csv", Matrix::Random(8, 2));
  CHECK(run_cli("predict --model " + gen + "/m --x0 " + gen + "/x0.csv --steps 2 --out " + gen +
                "/t.csv") == 2);
}

TEST_CASE("a corrupt model directory exits with code 1") {
  const std::string dir = fresh_dir("corrupt");
  std::ofstream(dir + "/model.json") << "{ this is not json";
  CHECK(run_cli("spectrum --model " + dir + " --out " + dir + "/eig.csv") == 1);
}

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pidmd/diagnostics.hpp"
#include "pidmd/linalg.hpp"
#include "pidmd/matrix_io.hpp"
#include "pidmd/model_io.hpp"
#include "pidmd/snapshots.hpp"
#include "pidmd/testbeds.hpp"

namespace {

using nlohmann::json;
using namespace pidmd;

constexpr int kSchemaVersion = 1;

struct GenerateConfig {
  std::string testbed;
  Eigen::Index n = 64;
  Eigen::Index m = 100;
  double dt = 0.1;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double wave_speed = 1.0;
  double depth = 10.0;
  std::string out;
};

struct FitConfig {
  std::string x_path;
  std::string y_path;
  std::string series_path;
  std::string pairing = "discrete";
  double dt = 1.0;
  std::string manifold;
  std::string variant;
  std::optional<Eigen::Index> rank;
  bool periodic = false;
  Eigen::Index lower = -1;
  Eigen::Index upper = -1;
  double sigma = 0.0;
  double lambda = -1.0;
  std::string grid_path;
  std::string out;
};

Testbed make_testbed(const GenerateConfig& cfg) {
  if (cfg.testbed == "advection") return advection_testbed(cfg.n, cfg.wave_speed, cfg.dt);
  if (cfg.testbed == "convection_diffusion") return convection_diffusion_testbed(cfg.n, cfg.seed);
  if (cfg.testbed == "schrodinger") return schrodinger_well_testbed(cfg.n, cfg.depth);
  if (cfg.testbed == "volterra") return volterra_testbed(cfg.n);
  throw InvalidArgument("unknown testbed: " + cfg.testbed);
}

void run_generate(const GenerateConfig& cfg) {
  const Testbed bed = make_testbed(cfg);
  std::filesystem::create_directories(cfg.out);

  const Matrix x0 = random_real_matrix(bed.op.rows(), 1, cfg.seed).cast<cd>();
  Matrix series = evolve(bed, x0.col(0), cfg.m, cfg.dt);
  if (cfg.noise > 0) series = add_gaussian_noise(series, cfg.noise, cfg.seed + 1);
  const SnapshotPair pair = make_snapshot_pairs(series, Pairing::kDiscrete, cfg.dt);
  save_matrix_file(cfg.out + "/X.csv", pair.X);
  save_matrix_file(cfg.out + "/Y.csv", pair.Y);

  Vector truth;
  if (bed.analytic_spectrum) {
    truth = *bed.analytic_spectrum;
  } else {
    const Matrix step = bed.time_kind == TimeKind::kDiscrete
                            ? bed.op
                            : matrix_exponential(bed.generator_scale * cfg.dt * bed.op);
    truth = spectrum(PiDmdModel{DenseModel{step}}).eigenvalues;
  }
  save_matrix_file(cfg.out + "/truth_spectrum.csv", truth);

  json meta{{"schema_version", kSchemaVersion},
            {"testbed", cfg.testbed},
            {"n", cfg.n},
            {"m", cfg.m},
            {"dt", cfg.dt},
            {"noise", cfg.noise},
            {"seed", cfg.seed},
            {"pairing", "discrete"},
            {"time_kind", bed.time_kind == TimeKind::kDiscrete ? "discrete" : "continuous"},
            {"truth_is_one_step_map", true}};
  if (cfg.testbed == "advection") meta["wave_speed"] = cfg.wave_speed;
  if (cfg.testbed == "schrodinger") meta["depth"] = cfg.depth;
  std::vector<double> points(bed.grid.points.data(),
                             bed.grid.points.data() + bed.grid.points.size());
  meta["grid"] = {{"points", points},
                  {"periodic", bed.grid.periodic},
                  {"period_length", bed.grid.period_length}};
  std::ofstream out(cfg.out + "/meta.json");
  out << meta.dump(2) << "\n";
}

SnapshotPair load_pair(const FitConfig& cfg) {
  const bool has_pair = !cfg.x_path.empty() || !cfg.y_path.empty();
  const bool has_series = !cfg.series_path.empty();
  if (has_pair == has_series)
    throw InvalidArgument("provide either --x and --y or --series, not both");
  const Pairing pairing =
      cfg.pairing == "derivative" ? Pairing::kDerivative : Pairing::kDiscrete;
  if (has_series)
    return make_snapshot_pairs(load_matrix_file(cfg.series_path), pairing, cfg.dt);
  if (cfg.x_path.empty() || cfg.y_path.empty())
    throw InvalidArgument("--x and --y must be given together");
  SnapshotPair pair;
  pair.X = load_matrix_file(cfg.x_path);
  pair.Y = load_matrix_file(cfg.y_path);
  pair.pairing = pairing;
  pair.dt = cfg.dt;
  pair.validate();
  return pair;
}

Grid load_or_default_grid(const FitConfig& cfg, Eigen::Index n) {
  Grid grid;
  if (!cfg.grid_path.empty()) {
    const Matrix pts = load_matrix_file(cfg.grid_path);
    if (pts.cols() != 1) throw InvalidArgument("grid file must have one column");
    grid.points = pts.col(0).real();
  } else {
    grid.points.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
      grid.points[i] = n > 1 ? -1.0 + 2.0 * static_cast<double>(i) / (n - 1) : 0.0;
  }
  grid.validate();
  return grid;
}

PiDmdModel run_fit(const SnapshotPair& pair, const FitConfig& cfg) {
  const std::string& m = cfg.manifold;
  if (m == "exact") {
    const Eigen::Index r = cfg.rank.value_or(std::min(pair.states(), pair.samples()));
    return fit_exact(pair, r);
  }
  if (m == "circulant") {
    if (cfg.variant.empty() || cfg.variant == "plain") return fit_circulant(pair);
    if (cfg.variant == "symmetric") return fit_circulant(pair, CirculantVariant::kSymmetric);
    if (cfg.variant == "skew") return fit_circulant(pair, CirculantVariant::kSkew);
    if (cfg.variant == "unitary") return fit_circulant(pair, CirculantVariant::kUnitary);
    if (cfg.variant == "lowrank") {
      if (!cfg.rank) throw InvalidArgument("--variant lowrank needs --rank");
      return fit_circulant_lowrank(pair, *cfg.rank);
    }
    if (cfg.variant == "tls") return fit_circulant_tls(pair);
    throw InvalidArgument("unknown circulant variant: " + cfg.variant);
  }
  if (m == "toeplitz") return fit_toeplitz(pair, ToeplitzFlavor::kToeplitz);
  if (m == "hankel") return fit_toeplitz(pair, ToeplitzFlavor::kHankel);
  if (m == "unitary") return fit_unitary(pair, cfg.rank);
  if (m == "symmetric") return fit_symmetric(pair, SymmetryKind::kSymmetric, cfg.rank);
  if (m == "skew") return fit_symmetric(pair, SymmetryKind::kSkew, cfg.rank);
  if (m == "tridiagonal") {
    if (cfg.variant == "tls") return fit_tridiagonal_tls(pair);
    if (!cfg.variant.empty()) throw InvalidArgument("unknown tridiagonal variant: " + cfg.variant);
    return fit_tridiagonal(pair, cfg.periodic);
  }
  if (m == "symtridiagonal") return fit_symmetric_tridiagonal(pair);
  if (m == "banded") {
    if (cfg.lower < 0 || cfg.upper < 0)
      throw InvalidArgument("--manifold banded needs --lower and --upper");
    return fit_banded(pair, cfg.lower, cfg.upper, cfg.periodic);
  }
  if (m == "triangular") {
    TriangularMethod method = TriangularMethod::kNaive;
    if (cfg.variant == "fast_update") method = TriangularMethod::kFastUpdate;
    else if (cfg.variant == "rq_stable") method = TriangularMethod::kRqStable;
    else if (!cfg.variant.empty() && cfg.variant != "naive")
      throw InvalidArgument("unknown triangular variant: " + cfg.variant);
    return fit_triangular(pair, method);
  }
  if (m == "local") {
    if (!(cfg.sigma > 0) || cfg.lambda < 0)
      throw InvalidArgument("--manifold local needs --sigma > 0 and --lambda >= 0");
    const Grid grid = load_or_default_grid(cfg, pair.states());
    const LocalityPenalty penalty = make_gaussian_locality(grid, cfg.sigma, cfg.lambda);
    return DenseModel{fit_regularized_local(pair, penalty)};
  }
  throw InvalidArgument("unknown manifold: " + m);
}

json model_flags(const PiDmdModel& model) {
  json flags = json::object();
  std::visit(
      [&flags](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnitaryModel>) {
          flags["unique"] = m.unique;
          flags["undetermined"] = m.undetermined;
        }
        if constexpr (std::is_same_v<T, ToeplitzModel>) {
          flags["condition_warning"] = m.condition_warning;
        }
        if constexpr (std::is_same_v<T, BandedModel>) {
          flags["condition_warning"] = m.condition_warning;
        }
        if constexpr (std::is_same_v<T, ExactDmdModel> || std::is_same_v<T, SymmetricModel>) {
          flags["rank"] = m.rank;
          flags["rank_truncated"] = m.rank_truncated;
        }
        if constexpr (std::is_same_v<T, CirculantModel> || std::is_same_v<T, BandedModel> ||
                      std::is_same_v<T, TriangularModel>) {
          Eigen::Index flagged = 0;
          for (RowStatus s : m.row_status)
            if (s != RowStatus::kOk) ++flagged;
          flags["flagged_rows"] = flagged;
        }
      },
      model);
  return flags;
}

void run_fit_command(const FitConfig& cfg) {
  const SnapshotPair pair = load_pair(cfg);
  const auto start = std::chrono::steady_clock::now();
  const PiDmdModel model = run_fit(pair, cfg);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  save_model(model, cfg.out);
  const double res = residual(model, pair);
  const double ynorm = pair.Y.norm();
  json report{{"schema_version", kSchemaVersion},
              {"manifold", cfg.manifold},
              {"variant", cfg.variant},
              {"n", pair.states()},
              {"m", pair.samples()},
              {"residual", res},
              {"relative_residual", ynorm > 0 ? res / ynorm : 0.0},
              {"fit_seconds", elapsed.count()},
              {"flags", model_flags(model)}};
  std::ofstream out(cfg.out + "/report.json");
  out << report.dump(2) << "\n";
}

void write_spectrum_csv(const Spectrum& spec, const std::string& path) {
  save_matrix_file(path, spec.eigenvalues);
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Physics-informed dynamic mode decomposition"};
  app.require_subcommand(1);

  GenerateConfig gen;
  CLI::App* cmd_gen = app.add_subcommand("generate", "Synthesize testbed snapshot data");
  cmd_gen->add_option("testbed", gen.testbed,
                      "advection | convection_diffusion | schrodinger | volterra")
      ->required();
  cmd_gen->add_option("--n", gen.n, "states");
  cmd_gen->add_option("--m", gen.m, "snapshots");
  cmd_gen->add_option("--dt", gen.dt, "time step");
  cmd_gen->add_option("--noise", gen.noise, "relative noise level");
  cmd_gen->add_option("--seed", gen.seed, "random seed");
  cmd_gen->add_option("--wave-speed", gen.wave_speed, "advection speed");
  cmd_gen->add_option("--depth", gen.depth, "well depth");
  cmd_gen->add_option("--out", gen.out, "output directory")->required();
  cmd_gen->callback([&gen]() { run_generate(gen); });

  FitConfig fit;
  CLI::App* cmd_fit = app.add_subcommand("fit", "Fit a structured operator to snapshot data");
  auto add_fit_options = [](CLI::App* cmd, FitConfig& cfg) {
    CLI::Option* ox = cmd->add_option("--x", cfg.x_path, "X matrix CSV");
    CLI::Option* oy = cmd->add_option("--y", cfg.y_path, "Y matrix CSV");
    CLI::Option* os = cmd->add_option("--series", cfg.series_path, "snapshot series CSV");
    os->excludes(ox)->excludes(oy);
    cmd->add_option("--pairing", cfg.pairing, "discrete | derivative");
    cmd->add_option("--dt", cfg.dt, "time step");
    cmd->add_option("--manifold", cfg.manifold,
                    "exact | circulant | toeplitz | hankel | unitary | symmetric | skew | "
                    "tridiagonal | symtridiagonal | banded | triangular | local")
        ->required();
    cmd->add_option("--variant", cfg.variant, "manifold-specific variant");
    cmd->add_option_function<Eigen::Index>(
        "--rank", [&cfg](const Eigen::Index& r) { cfg.rank = r; }, "rank / truncation");
    cmd->add_flag("--periodic", cfg.periodic, "wrap band windows");
    cmd->add_option("--lower", cfg.lower, "lower bandwidth");
    cmd->add_option("--upper", cfg.upper, "upper bandwidth");
    cmd->add_option("--sigma", cfg.sigma, "locality kernel width");
    cmd->add_option("--lambda", cfg.lambda, "locality penalty strength");
    cmd->add_option("--grid", cfg.grid_path, "grid points CSV (one column)");
  };
  add_fit_options(cmd_fit, fit);
  cmd_fit->add_option("--out", fit.out, "output directory")->required();
  cmd_fit->callback([&fit]() { run_fit_command(fit); });

  std::string model_dir, out_path, time_kind = "discrete", modes_path;
  CLI::App* cmd_spec = app.add_subcommand("spectrum", "Eigenvalues of a fitted model");
  cmd_spec->add_option("--model", model_dir, "model directory")->required();
  cmd_spec->add_option("--time-kind", time_kind, "discrete | continuous");
  cmd_spec->add_option("--out", out_path, "eigenvalue CSV")->required();
  cmd_spec->add_option("--modes", modes_path, "optional mode matrix CSV");
  cmd_spec->callback([&]() {
    const PiDmdModel model = load_model(model_dir);
    const Spectrum spec = spectrum(
        model, time_kind == "continuous" ? TimeKind::kContinuous : TimeKind::kDiscrete);
    write_spectrum_csv(spec, out_path);
    if (!modes_path.empty()) save_matrix_file(modes_path, spec.modes);
  });

  std::string pr_model, pr_x0, pr_out, pr_kind = "discrete";
  Eigen::Index pr_steps = 1;
  double pr_dt = 1.0;
  CLI::App* cmd_pred = app.add_subcommand("predict", "Propagate an initial state");
  cmd_pred->add_option("--model", pr_model, "model directory")->required();
  cmd_pred->add_option("--x0", pr_x0, "initial state CSV (one column)")->required();
  cmd_pred->add_option("--steps", pr_steps, "steps to take")->required();
  cmd_pred->add_option("--time-kind", pr_kind, "discrete | continuous");
  cmd_pred->add_option("--dt", pr_dt, "time step (continuous)");
  cmd_pred->add_option("--out", pr_out, "trajectory CSV")->required();
  cmd_pred->callback([&]() {
    const PiDmdModel model = load_model(pr_model);
    const Matrix x0 = load_matrix_file(pr_x0);
    if (x0.cols() != 1) throw InvalidArgument("--x0 must be a one-column CSV");
    const Matrix traj =
        predict(model, x0.col(0), pr_steps,
                pr_kind == "continuous" ? TimeKind::kContinuous : TimeKind::kDiscrete, pr_dt);
    save_matrix_file(pr_out, traj);
  });

  std::string rv_model, rv_out;
  double rv_omega = 1.0;
  Eigen::Index rv_count = 3;
  CLI::App* cmd_res = app.add_subcommand("resolvent", "Resolvent gains and mode pairs");
  cmd_res->add_option("--model", rv_model, "model directory")->required();
  cmd_res->add_option("--omega", rv_omega, "frequency")->required();
  cmd_res->add_option("--count", rv_count, "number of triplets");
  cmd_res->add_option("--out", rv_out, "output directory")->required();
  cmd_res->callback([&]() {
    const PiDmdModel model = load_model(rv_model);
    const ResolventSet set = resolvent_modes(model, rv_omega, rv_count);
    std::filesystem::create_directories(rv_out);
    save_matrix_file(rv_out + "/gains.csv", set.gains.cast<cd>());
    save_matrix_file(rv_out + "/forcings.csv", set.forcings);
    save_matrix_file(rv_out + "/responses.csv", set.responses);
  });

  FitConfig cmp;
  std::string cmp_truth;
  std::optional<Eigen::Index> cmp_exact_rank;
  CLI::App* cmd_cmp = app.add_subcommand(
      "compare", "Fit exact DMD and a structured model, compare spectra against truth");
  add_fit_options(cmd_cmp, cmp);
  cmd_cmp->add_option("--truth", cmp_truth, "truth spectrum CSV (one column)")->required();
  cmd_cmp->add_option_function<Eigen::Index>(
      "--exact-rank", [&cmp_exact_rank](const Eigen::Index& r) { cmp_exact_rank = r; },
      "rank for the exact-DMD reference");
  cmd_cmp->add_option("--out", cmp.out, "output directory")->required();
  cmd_cmp->callback([&]() {
    const SnapshotPair pair = load_pair(cmp);
    const PiDmdModel structured = run_fit(pair, cmp);
    const Eigen::Index r = cmp_exact_rank.value_or(std::min(pair.states(), pair.samples()));
    const PiDmdModel exact = fit_exact(pair, r);

    Spectrum truth;
    const Matrix t = load_matrix_file(cmp_truth);
    if (t.cols() != 1) throw InvalidArgument("--truth must be a one-column CSV");
    truth.eigenvalues = t.col(0);

    const Spectrum spec_structured = spectrum(structured);
    const Spectrum spec_exact = spectrum(exact);
    std::filesystem::create_directories(cmp.out);
    write_spectrum_csv(spec_structured, cmp.out + "/pidmd_spectrum.csv");
    write_spectrum_csv(spec_exact, cmp.out + "/exact_spectrum.csv");

    const SpectralErrorReport err_structured = spectral_error(spec_structured, truth);
    const SpectralErrorReport err_exact = spectral_error(spec_exact, truth);
    json report{{"schema_version", kSchemaVersion},
                {"manifold", cmp.manifold},
                {"variant", cmp.variant},
                {"pidmd",
                 {{"matched_mean_abs_error", err_structured.matched_mean_abs_error},
                  {"unmatched", err_structured.unmatched},
                  {"residual", residual(structured, pair)}}},
                {"exact",
                 {{"matched_mean_abs_error", err_exact.matched_mean_abs_error},
                  {"unmatched", err_exact.unmatched},
                  {"residual", residual(exact, pair)},
                  {"rank", r}}}};
    std::ofstream out(cmp.out + "/report.json");
    out << report.dump(2) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const EmptyInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InsufficientSnapshots& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#include "rpls/cli.hpp"

#include "rpls/baselines.hpp"
#include "rpls/datagen.hpp"
#include "rpls/errors.hpp"
#include "rpls/io.hpp"
#include "rpls/metrics.hpp"
#include "rpls/projection.hpp"
#include "rpls/rpls.hpp"
#include "rpls/serialization.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>

namespace rpls::cli {

namespace fs = std::filesystem;

namespace {

// Thrown for bad flag values discovered after CLI11 parsing.
struct UsageError : Error {
  using Error::Error;
};

struct InputFlags {
  std::string x_path;
  std::string y_path;
  bool header = false;
};

struct SolverFlags {
  std::optional<std::size_t> k;
  std::optional<double> lambda1, lambda2, rho, alpha0, alpha_max, tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::string> preprocess;
  std::string config_path;
  bool scale = false;
};

struct OutlierFlags {
  std::string kind = "none";
  double fraction = 0.02;
  double magnitude = 10.0;
  double tail_fraction = 0.10;
  double tail_multiplier = 10.0;
};

void add_solver_flags(CLI::App &cmd, SolverFlags &f) {
  cmd.add_option("--k", f.k, "Latent dimension / component count");
  cmd.add_option("--lambda1", f.lambda1, "Nuclear-norm weight on X loadings");
  cmd.add_option("--lambda2", f.lambda2, "Nuclear-norm weight on Y loadings");
  cmd.add_option("--rho", f.rho, "Penalty growth factor");
  cmd.add_option("--alpha0", f.alpha0, "Initial penalty for both constraints");
  cmd.add_option("--alpha-max", f.alpha_max, "Penalty cap");
  cmd.add_option("--tol", f.tol, "Absolute primal residual tolerance");
  cmd.add_option("--max-iter", f.max_iter, "Iteration limit");
  cmd.add_option("--preprocess", f.preprocess, "RPLS column preprocessing")
      ->check(CLI::IsMember({"none", "center", "standardize", "robust"}));
  cmd.add_option("--config", f.config_path, "JSON file with solver settings");
  cmd.add_flag("--scale", f.scale, "Unit-variance scaling for baselines");
}

void add_outlier_flags(CLI::App &cmd, OutlierFlags &f) {
  cmd.add_option("--outliers", f.kind, "Outlier regime")
      ->check(CLI::IsMember({"none", "sparse", "lowtail"}));
  cmd.add_option("--fraction", f.fraction, "Sparse outliers: fraction of entries");
  cmd.add_option("--magnitude", f.magnitude, "Sparse outliers: multiple of column std");
  cmd.add_option("--tail-fraction", f.tail_fraction, "Low-tail outliers: fraction of rows");
  cmd.add_option("--tail-multiplier", f.tail_multiplier, "Low-tail outliers: multiplier");
}

RplsOverrides solver_overrides(const SolverFlags &f) {
  RplsOverrides file;
  if (!f.config_path.empty())
    file = overrides_from_json(load_json(f.config_path));
  RplsOverrides flags;
  flags.k = f.k;
  flags.lambda1 = f.lambda1;
  flags.lambda2 = f.lambda2;
  flags.rho = f.rho;
  flags.alpha1_0 = f.alpha0;
  flags.alpha2_0 = f.alpha0;
  flags.alpha_max = f.alpha_max;
  flags.tol = f.tol;
  flags.max_iter = f.max_iter;
  if (f.preprocess)
    flags.preprocessing = parse_preprocessing(*f.preprocess);
  return file.merged_with(flags);
}

OutlierSpec outlier_spec(const OutlierFlags &f, std::uint64_t seed) {
  OutlierSpec spec;
  spec.kind = f.kind == "sparse"    ? OutlierKind::kSparseRandom
              : f.kind == "lowtail" ? OutlierKind::kLowTail
                                    : OutlierKind::kNone;
  spec.fraction = f.fraction;
  spec.magnitude = f.magnitude;
  spec.tail_fraction = f.tail_fraction;
  spec.tail_multiplier = f.tail_multiplier;
  spec.seed = seed;
  spec.validate();
  return spec;
}

DenseMatrix mask_matrix(const Mask &m) { return m.cast<double>().matrix(); }

void ensure_dir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

std::vector<std::string> column_names(std::string_view stem, Eigen::Index count) {
  std::vector<std::string> out;
  for (Eigen::Index j = 0; j < count; ++j)
    out.push_back(count == 1 ? std::string(stem) : fmt::format("{}_{}", stem, j));
  return out;
}

// --- synth ---------------------------------------------------------------

struct SynthArgs {
  SynthSpec spec;
  OutlierFlags outliers;
  std::string out_dir;
};

void run_synth(const SynthArgs &a) {
  const SynthData data = generate(a.spec);
  const OutlierSpec ospec = outlier_spec(a.outliers, a.spec.seed);
  const fs::path dir = a.out_dir;
  ensure_dir(dir);

  const CorruptedData out = inject_outliers(data.x, data.y, ospec);
  write_csv(dir / "X.csv", out.x);
  write_csv(dir / "Y.csv", out.y);
  if (ospec.kind != OutlierKind::kNone) {
    write_csv(dir / "X_clean.csv", data.x);
    write_csv(dir / "Y_clean.csv", data.y);
    write_csv(dir / "mask_X.csv", mask_matrix(out.x_mask));
    write_csv(dir / "mask_Y.csv", mask_matrix(out.y_mask));
  }
  write_csv(dir / "truth_theta.csv", data.truth.theta_true);
  write_csv(dir / "truth_q.csv", data.truth.q_true);
  write_csv(dir / "truth_loadings.csv", data.truth.loadings);
  std::cout << fmt::format("wrote X {}x{} and Y {}x{} to {}\n", out.x.rows(),
                           out.x.cols(), out.y.rows(), out.y.cols(),
                           dir.string());
}

// --- fit -----------------------------------------------------------------

struct FitArgs {
  std::string method;
  InputFlags input;
  SolverFlags solver;
  std::string out_dir;
};

void run_fit(const FitArgs &a) {
  const MethodTag tag = parse_method(a.method);
  const DenseMatrix x = load_csv({a.input.x_path, a.input.header});
  const DenseMatrix y = load_csv({a.input.y_path, a.input.header});
  const RplsOverrides overrides = solver_overrides(a.solver);
  const std::size_t k = overrides.k.value_or(5);
  const BaselineOptions bopts{a.solver.scale};
  const fs::path dir = a.out_dir;
  ensure_dir(dir);

  if (tag == MethodTag::kRplsProj) {
    const RplsModel model = fit(x, y, overrides.resolve(x, y, k));
    save_json(dir / "model.json", to_json(model));
    DenseMatrix trace(static_cast<Eigen::Index>(model.residual_trace.size()), 4);
    for (std::size_t i = 0; i < model.residual_trace.size(); ++i) {
      const TraceEntry &e = model.residual_trace[i];
      trace.row(static_cast<Eigen::Index>(i))
          << static_cast<double>(e.iter), e.primal_residual, e.alpha1, e.alpha2;
    }
    write_csv(dir / "trace.csv", trace,
              {"iter", "primal_residual", "alpha1", "alpha2"});
    std::cout << fmt::format(
        "rpls: {} after {} iterations, residual {}\n",
        model.converged ? "converged" : "NOT converged", model.state.iter,
        format_double(model.residual_trace.back().primal_residual));
    return;
  }

  LinearModel model;
  switch (tag) {
  case MethodTag::kMlr:
    model = fit_mlr(x, y, bopts);
    break;
  case MethodTag::kPcr:
    model = fit_pcr(x, y, k, bopts).model;
    break;
  case MethodTag::kPlsr:
    model = fit_pls_nipals(x, y, k, bopts).model;
    break;
  case MethodTag::kPlsProj:
    model = from_pls(fit_pls_nipals(x, y, k, bopts))
                .to_linear_model(MethodTag::kPlsProj);
    break;
  case MethodTag::kRplsProj:
    break;
  }
  save_json(dir / "model.json", to_json(model));
  std::cout << fmt::format("{}: fitted {}x{} coefficients{}\n", to_string(tag),
                           model.theta.rows(), model.theta.cols(),
                           model.rank_deficient ? " (pseudoinverse)" : "");
}

// --- predict -------------------------------------------------------------

struct PredictArgs {
  std::string model_path;
  std::string x_path;
  bool header = false;
  std::string out;
  std::string out_dir;
};

void run_predict(const PredictArgs &a) {
  if (a.out.empty() == a.out_dir.empty())
    throw UsageError("predict: give exactly one of --out or --out-dir");
  const nlohmann::json doc = load_json(a.model_path);
  const DenseMatrix x = load_csv({a.x_path, a.header});
  const DenseMatrix y_hat =
      model_kind(doc) == ModelKind::kRpls
          ? predict_projection(from_rpls(rpls_model_from_json(doc)), x)
          : predict(linear_model_from_json(doc), x);
  fs::path target = a.out;
  if (target.empty()) {
    ensure_dir(a.out_dir);
    target = fs::path(a.out_dir) / "predictions.csv";
  }
  write_csv(target, y_hat);
  std::cout << fmt::format("wrote {} predictions to {}\n", y_hat.rows(),
                           target.string());
}

// --- bench ---------------------------------------------------------------

struct BenchArgs {
  InputFlags input;
  std::vector<std::string> methods{"mlr", "pcr", "pls-proj", "plsr", "rpls"};
  SolverFlags solver;
  OutlierFlags outliers;
  double split = 0.8;
  std::uint64_t seed = 0;
  std::string out_dir;
};

void write_report_csv(const fs::path &path, const ExperimentReport &report,
                      const std::vector<MethodTag> &tags) {
  const Eigen::Index r = report.y_test.cols();
  std::vector<std::string> header{"sample"};
  for (auto &h : column_names("truth", r))
    header.push_back(h);
  for (MethodTag t : tags)
    for (auto &h : column_names(to_string(t), r))
      header.push_back(h);

  std::string text;
  for (std::size_t j = 0; j < header.size(); ++j)
    text += (j ? "," : "") + header[j];
  text += '\n';
  for (Eigen::Index i = 0; i < report.y_test.rows(); ++i) {
    text += std::to_string(report.split.test[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < r; ++j)
      text += "," + format_double(report.y_test(i, j));
    for (MethodTag t : tags)
      for (Eigen::Index j = 0; j < r; ++j)
        text += "," + format_double(report.results.at(t).predictions(i, j));
    text += '\n';
  }
  text += "NMSE";
  for (Eigen::Index j = 0; j < r; ++j)
    text += ",";
  for (MethodTag t : tags)
    for (Eigen::Index j = 0; j < r; ++j)
      text += "," + format_double(report.results.at(t).nmse);
  text += '\n';
  write_text(path, text);
}

void run_bench(const BenchArgs &a) {
  std::vector<MethodTag> tags;
  for (const std::string &m : a.methods) {
    try {
      tags.push_back(parse_method(m));
    } catch (const ConfigError &e) {
      throw UsageError(e.what());
    }
  }
  const DenseMatrix x = load_csv({a.input.x_path, a.input.header});
  const DenseMatrix y = load_csv({a.input.y_path, a.input.header});
  if (x.rows() != y.rows())
    throw ConfigError(
        fmt::format("X has {} rows but Y has {}", x.rows(), y.rows()));

  ExperimentConfig cfg;
  cfg.rpls = solver_overrides(a.solver);
  cfg.components = cfg.rpls.k.value_or(5);
  cfg.baseline.scale = a.solver.scale;
  cfg.train_outliers = outlier_spec(a.outliers, a.seed);

  const Split split =
      make_split(static_cast<std::size_t>(x.rows()), a.split, a.seed);
  const ExperimentReport report = run_experiment(
      x, y, split, tags, cfg, fs::path(a.input.x_path).stem().string());

  const fs::path dir = a.out_dir;
  ensure_dir(dir);
  save_json(dir / "report.json", to_json(report));
  write_csv(dir / "y_test.csv", report.y_test);

  std::vector<MethodTag> ok;
  DenseMatrix ellipses(0, 5);
  std::vector<std::string> ellipse_methods;
  for (MethodTag t : tags) {
    const MethodResult &res = report.results.at(t);
    if (res.error) {
      std::cerr << fmt::format("warning: {} failed: {}\n", to_string(t), *res.error);
      continue;
    }
    ok.push_back(t);
    write_csv(dir / fmt::format("predictions_{}.csv", to_string(t)), res.predictions);
    if (res.train_scores.cols() >= 2) {
      const DenseMatrix scores = res.train_scores.leftCols(2);
      write_csv(dir / fmt::format("scores_{}.csv", to_string(t)), scores,
                {"score_1", "score_2"});
      try {
        const ConfidenceEllipse e = confidence_ellipse(scores, 0.95);
        ellipses.conservativeResize(ellipses.rows() + 1, Eigen::NoChange);
        ellipses.row(ellipses.rows() - 1) << e.center[0], e.center[1],
            e.semi_axes[0], e.semi_axes[1], e.rotation_angle;
        ellipse_methods.emplace_back(to_string(t));
      } catch (const DegenerateError &e) {
        std::cerr << fmt::format("warning: {} ellipse: {}\n", to_string(t), e.what());
      }
    }
    if (t == MethodTag::kRplsProj && !res.converged)
      std::cerr << "warning: RPLS did not converge; predictions use the last iterate\n";
  }
  write_report_csv(dir / "report.csv", report, ok);

  std::string etext = "method,center_1,center_2,semi_major,semi_minor,angle\n";
  for (Eigen::Index i = 0; i < ellipses.rows(); ++i) {
    etext += ellipse_methods[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < 5; ++j)
      etext += "," + format_double(ellipses(i, j));
    etext += '\n';
  }
  write_text(dir / "ellipses.csv", etext);

  std::cout << fmt::format("{} train / {} test rows\n", report.split.train.size(),
                           report.split.test.size());
  for (MethodTag t : ok)
    std::cout << fmt::format("{:<10} NMSE {}\n", to_string(t),
                             format_double(report.results.at(t).nmse));
}

} // namespace

int cli_main(const std::vector<std::string> &args) {
  CLI::App app{"Robust partial least squares: fit, predict and benchmark"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto *synth_cmd = app.add_subcommand("synth", "Generate synthetic data");
  synth_cmd->add_option("--n", synth.spec.n, "Samples")->capture_default_str();
  synth_cmd->add_option("--p", synth.spec.p, "Predictors")->capture_default_str();
  synth_cmd->add_option("--r", synth.spec.r, "Responses")->capture_default_str();
  synth_cmd->add_option("--k", synth.spec.k_true, "Latent rank")->capture_default_str();
  synth_cmd->add_option("--collinear", synth.spec.n_collinear,
                        "Predictors built from other predictors")
      ->capture_default_str();
  synth_cmd->add_option("--active", synth.spec.active_per_response,
                        "Predictors feeding each response")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.spec.noise_sigma, "Response noise std")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.spec.seed, "Random seed")->capture_default_str();
  add_outlier_flags(*synth_cmd, synth.outliers);
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->required();

  FitArgs fit_args;
  auto *fit_cmd = app.add_subcommand("fit", "Fit one method and save the model");
  fit_cmd->add_option("--method", fit_args.method, "rpls|mlr|pcr|plsr|pls-proj")
      ->required()
      ->check(CLI::IsMember({"rpls", "mlr", "pcr", "plsr", "pls-proj"}));
  fit_cmd->add_option("--x", fit_args.input.x_path, "Predictor CSV")->required();
  fit_cmd->add_option("--y", fit_args.input.y_path, "Response CSV")->required();
  fit_cmd->add_flag("--header", fit_args.input.header, "CSV files have a header row");
  add_solver_flags(*fit_cmd, fit_args.solver);
  fit_cmd->add_option("--out-dir", fit_args.out_dir, "Output directory")->required();

  PredictArgs pred;
  auto *pred_cmd = app.add_subcommand("predict", "Predict responses with a saved model");
  pred_cmd->add_option("--model", pred.model_path, "Model JSON")->required();
  pred_cmd->add_option("--x", pred.x_path, "Predictor CSV")->required();
  pred_cmd->add_flag("--header", pred.header, "CSV has a header row");
  pred_cmd->add_option("--out", pred.out, "Output CSV path");
  pred_cmd->add_option("--out-dir", pred.out_dir, "Output directory");

  BenchArgs bench;
  auto *bench_cmd = app.add_subcommand("bench", "Train/test comparison of methods");
  bench_cmd->add_option("--x", bench.input.x_path, "Predictor CSV")->required();
  bench_cmd->add_option("--y", bench.input.y_path, "Response CSV")->required();
  bench_cmd->add_flag("--header", bench.input.header, "CSV files have a header row");
  bench_cmd->add_option("--methods", bench.methods, "Comma-separated method list")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--split", bench.split, "Training fraction")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Split and outlier seed")->capture_default_str();
  add_solver_flags(*bench_cmd, bench.solver);
  add_outlier_flags(*bench_cmd, bench.outliers);
  bench_cmd->add_option("--out-dir", bench.out_dir, "Output directory")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp &) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      std::cout << app.help();
      return kExitOk;
    }
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*synth_cmd)
      run_synth(synth);
    else if (*fit_cmd)
      run_fit(fit_args);
    else if (*pred_cmd)
      run_predict(pred);
    else if (*bench_cmd)
      run_bench(bench);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

} // namespace rpls::cli

// sbnn: split-boost and feed-forward trainers for tabular regression.
//
// Subcommands: train, bench, sweep, gradcheck. Exit codes: 0 success,
// 1 runtime/training failure, 2 usage/ingestion error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbnn/bench.hpp"
#include "sbnn/gradcheck.hpp"
#include "sbnn/model_io.hpp"

namespace {

using nlohmann::json;

struct RunConfig {
  std::string trainer = "splitboost";
  std::string data_path;
  std::string target_column = "charges";
  int hidden = 10;
  double gamma = 0.1;
  double lambda = 0.01;  // baseline only
  double epsilon = 1e-6;
  int max_epochs = 500;
  std::uint64_t seed = 0;
  bool standardize = true;
  bool one_hot_region = false;
  bool lr_switch_as_written = true;
  int workers = 1;
};

std::uint64_t env_seed() {
  if (const char* v = std::getenv("SBNN_SEED")) {
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      throw sbnn::ConfigError(std::string("SBNN_SEED is not an integer: '") +
                              v + "'");
    }
  }
  return 0;
}

// Config-file values replace the defaults; explicit flags win over both.
void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw sbnn::ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw sbnn::ConfigError("config file '" + path + "': " + e.what());
  }
  auto get = [&](const char* key, auto& target) {
    if (j.contains(key)) {
      target = j.at(key).get<std::decay_t<decltype(target)>>();
    }
  };
  get("trainer", cfg.trainer);
  get("data_path", cfg.data_path);
  get("target_column", cfg.target_column);
  get("hidden", cfg.hidden);
  get("gamma", cfg.gamma);
  get("lambda", cfg.lambda);
  get("epsilon", cfg.epsilon);
  get("max_epochs", cfg.max_epochs);
  get("seed", cfg.seed);
  get("standardize", cfg.standardize);
  get("one_hot_region", cfg.one_hot_region);
  get("lr_switch_as_written", cfg.lr_switch_as_written);
  get("workers", cfg.workers);
}

sbnn::TrainConfig sb_config(const RunConfig& c) {
  sbnn::TrainConfig cfg;
  cfg.gamma_star = c.gamma;
  cfg.epsilon = c.epsilon;
  cfg.max_epochs = c.max_epochs;
  cfg.hidden = c.hidden;
  cfg.seed = c.seed;
  cfg.lr_switch_as_written = c.lr_switch_as_written;
  return cfg;
}

sbnn::BaselineConfig ff_config(const RunConfig& c) {
  sbnn::BaselineConfig cfg;
  cfg.gamma = c.gamma;
  cfg.lambda = c.lambda;
  cfg.epsilon = c.epsilon;
  cfg.max_epochs = c.max_epochs;
  cfg.hidden = c.hidden;
  cfg.seed = c.seed;
  return cfg;
}

sbnn::Dataset load_data(const RunConfig& c) {
  sbnn::LoadOptions opts;
  opts.target_column = c.target_column;
  opts.one_hot_region = c.one_hot_region;
  return sbnn::load_csv(c.data_path, opts);
}

int cmd_train(const RunConfig& cfg, const std::string& out_path,
              const std::string& history_path,
              const std::string& retrain_history_path, bool report_usd) {
  const sbnn::Dataset ds = load_data(cfg);
  const sbnn::TrainerKind kind = cfg.trainer == "splitboost"
                                     ? sbnn::TrainerKind::SplitBoost
                                     : sbnn::TrainerKind::Baseline;
  const sbnn::PipelineResult result = sbnn::run_pipeline(
      kind, sb_config(cfg), ff_config(cfg), ds, cfg.standardize);

  if (!out_path.empty()) {
    sbnn::save_model({result.retrained.params, result.scaler}, out_path);
  }
  if (!history_path.empty()) {
    sbnn::write_history_csv(history_path, result.initial.history);
  }
  if (!retrain_history_path.empty()) {
    sbnn::write_history_csv(retrain_history_path, result.retrained.history);
  }

  double j_test = result.j_test;
  if (report_usd) {
    // Undo the target standardization: costs scale with the variance.
    j_test *= result.scaler.target_std * result.scaler.target_std;
  }
  std::cout << "best_epoch=" << result.initial.best_epoch
            << " j_test=" << sbnn::format_double(j_test) << "\n";
  return 0;
}

int cmd_bench(const RunConfig& cfg, int seeds, const std::string& out_path) {
  const sbnn::Dataset ds = load_data(cfg);
  const sbnn::BenchmarkReport report = sbnn::run_monte_carlo(
      seeds, sb_config(cfg), ff_config(cfg), ds, cfg.workers);

  sbnn::write_report_json(out_path, report);
  std::filesystem::path csv_path(out_path);
  csv_path.replace_extension(".csv");
  sbnn::write_report_csv(csv_path.string(), report);

  std::cout << "win_rate=" << sbnn::format_double(report.win_rate)
            << " sb_epoch_time_s=" << sbnn::format_double(report.sb_epoch_time_s)
            << " ff_epoch_time_s=" << sbnn::format_double(report.ff_epoch_time_s)
            << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& param,
              const std::string& values_csv, const std::string& out_path) {
  sbnn::SweepSpec spec;
  spec.parameter = param == "lambda" ? sbnn::SweepSpec::Param::Lambda
                                     : sbnn::SweepSpec::Param::Gamma;
  spec.trainer = cfg.trainer == "splitboost" ? sbnn::TrainerKind::SplitBoost
                                             : sbnn::TrainerKind::Baseline;
  spec.base_sb = sb_config(cfg);
  spec.base_ff = ff_config(cfg);
  spec.standardize = cfg.standardize;

  if (values_csv.empty()) {
    spec.values = spec.parameter == sbnn::SweepSpec::Param::Gamma
                      ? sbnn::kDefaultGammaGrid
                      : sbnn::kDefaultLambdaGrid;
  } else {
    std::istringstream in(values_csv);
    std::string token;
    while (std::getline(in, token, ',')) {
      try {
        spec.values.push_back(std::stod(token));
      } catch (const std::exception&) {
        throw sbnn::ConfigError("sweep: bad value '" + token + "'");
      }
    }
  }

  const sbnn::Dataset ds = load_data(cfg);
  const sbnn::SweepResult result = sbnn::run_sweep(spec, ds);
  if (!out_path.empty()) sbnn::write_sweep_csv(out_path, result);

  for (const sbnn::SweepRow& row : result.rows) {
    std::cout << sbnn::format_double(row.value) << ","
              << sbnn::format_double(row.final_j_val) << "\n";
  }
  std::cout << "argmin=" << sbnn::format_double(result.rows[result.argmin].value)
            << "\n";
  return 0;
}

int cmd_gradcheck(std::uint64_t seed, int instances) {
  const sbnn::GradCheckReport report = sbnn::run_gradcheck(seed, instances);
  const bool ok =
      report.w1_gradient_max_rel_err < sbnn::kW1GradientTol &&
      report.w2_jacobian_max_scaled_err < sbnn::kW2JacobianTol &&
      report.baseline_max_rel_err < sbnn::kBaselineGradientTol;
  std::cout << "w1_gradient max rel err:      "
            << sbnn::format_double(report.w1_gradient_max_rel_err)
            << "  (tol " << sbnn::kW1GradientTol << ")\n"
            << "w2_jacobian max scaled err:   "
            << sbnn::format_double(report.w2_jacobian_max_scaled_err)
            << "  (tol " << sbnn::kW2JacobianTol << ")\n"
            << "baseline grads max rel err:   "
            << sbnn::format_double(report.baseline_max_rel_err) << "  (tol "
            << sbnn::kBaselineGradientTol << ")\n"
            << (ok ? "gradcheck passed" : "gradcheck FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"split-boost neural network trainer and benchmark harness"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  // shared flags, registered per subcommand
  auto add_common = [&](CLI::App* cmd, bool with_trainer) {
    cmd->add_option("--config", config_path,
                    "JSON config file; explicit flags override it");
    cmd->add_option("--data", cfg.data_path, "input CSV path");
    cmd->add_option("--target-column", cfg.target_column,
                    "target column for non-canonical CSVs (default charges)");
    if (with_trainer) {
      cmd->add_option("--trainer", cfg.trainer,
                      "splitboost or baseline (default splitboost)")
          ->check(CLI::IsMember({"splitboost", "baseline"}));
    }
    cmd->add_option("--hidden", cfg.hidden, "hidden width (default 10)");
    cmd->add_option("--gamma", cfg.gamma, "learning rate (default 0.1)");
    cmd->add_option("--lambda", cfg.lambda,
                    "baseline regularization intensity (default 0.01)");
    cmd->add_option("--epsilon", cfg.epsilon,
                    "early-stop threshold (default 1e-6)");
    cmd->add_option("--max-epochs", cfg.max_epochs,
                    "epoch budget (default 500)");
    cmd->add_option("--seed", cfg.seed,
                    "RNG seed (default 0; SBNN_SEED env as fallback)");
    cmd->add_flag("--standardize,!--no-standardize", cfg.standardize,
                  "z-score features and target on training rows (default on)");
    cmd->add_flag("--one-hot-region", cfg.one_hot_region,
                  "expand region into four indicator columns");
    cmd->add_flag("--lr-switch-as-written,!--inverted-lr-switch",
                  cfg.lr_switch_as_written,
                  "split-boost learning-rate switch branch direction "
                  "(default as written)");
    cmd->add_option("--workers", cfg.workers,
                    "bench worker threads (default 1)");
  };

  // train
  std::string out_path, history_path, retrain_history_path;
  bool report_usd = false;
  CLI::App* train_cmd =
      app.add_subcommand("train", "train one model, retrain, report j_test");
  add_common(train_cmd, true);
  train_cmd->add_option("--out", out_path, "model JSON output path");
  train_cmd->add_option("--history", history_path, "history CSV output path");
  train_cmd->add_option("--retrain-history", retrain_history_path,
                        "retraining-phase history CSV output path");
  train_cmd->add_flag("--usd", report_usd,
                      "report j_test in squared target units instead of "
                      "standardized units");

  // bench
  int seeds = 50;
  std::string report_path = "report.json";
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Monte Carlo comparison of split-boost vs baseline");
  add_common(bench_cmd, false);
  bench_cmd->add_option("--seeds", seeds, "number of seeds (default 50)");
  bench_cmd->add_option("--out", report_path,
                        "report JSON path; a .csv companion is written too");

  // sweep
  std::string param = "gamma", values_csv, sweep_out;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "hyperparameter sensitivity sweep");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--param", param, "gamma or lambda (default gamma)")
      ->check(CLI::IsMember({"gamma", "lambda"}));
  sweep_cmd->add_option("--values", values_csv,
                        "comma-separated grid (default grids built in)");
  sweep_cmd->add_option("--out", sweep_out, "sweep CSV output path");

  // gradcheck
  int instances = 10;
  CLI::App* grad_cmd = app.add_subcommand(
      "gradcheck", "verify analytic derivatives against finite differences");
  grad_cmd->add_option("--seed", cfg.seed, "base instance seed (default 0)");
  grad_cmd->add_option("--instances", instances,
                       "number of random instances (default 10)");

  try {
    cfg.seed = env_seed();
    app.parse(argc, argv);

    // precedence: flag > config file > SBNN_SEED/defaults
    if (!config_path.empty()) {
      RunConfig from_file = cfg;
      apply_config_file(config_path, from_file);
      CLI::App* active = app.get_subcommands().front();
      auto keep_flag = [&](const std::string& name, auto member) {
        if (active->count(name) > 0) from_file.*member = cfg.*member;
      };
      keep_flag("--trainer", &RunConfig::trainer);
      keep_flag("--data", &RunConfig::data_path);
      keep_flag("--target-column", &RunConfig::target_column);
      keep_flag("--hidden", &RunConfig::hidden);
      keep_flag("--gamma", &RunConfig::gamma);
      keep_flag("--lambda", &RunConfig::lambda);
      keep_flag("--epsilon", &RunConfig::epsilon);
      keep_flag("--max-epochs", &RunConfig::max_epochs);
      keep_flag("--seed", &RunConfig::seed);
      keep_flag("--standardize", &RunConfig::standardize);
      keep_flag("--one-hot-region", &RunConfig::one_hot_region);
      keep_flag("--lr-switch-as-written", &RunConfig::lr_switch_as_written);
      keep_flag("--workers", &RunConfig::workers);
      cfg = from_file;
    }

    CLI::App* active = app.get_subcommands().front();
    if (active == train_cmd || active == sweep_cmd) {
      if (cfg.trainer == "splitboost" && active->count("--lambda") > 0) {
        throw sbnn::ConfigError("split-boost has no lambda (drop --lambda or "
                                "use --trainer baseline)");
      }
      if (cfg.data_path.empty()) {
        throw sbnn::ConfigError("--data is required");
      }
    }

    if (active == train_cmd) {
      return cmd_train(cfg, out_path, history_path, retrain_history_path,
                       report_usd);
    }
    if (active == bench_cmd) {
      if (cfg.data_path.empty()) throw sbnn::ConfigError("--data is required");
      return cmd_bench(cfg, seeds, report_path);
    }
    if (active == sweep_cmd) {
      return cmd_sweep(cfg, param, values_csv, sweep_out);
    }
    return cmd_gradcheck(cfg.seed, instances);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const sbnn::IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sbnn::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sbnn::TrainingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

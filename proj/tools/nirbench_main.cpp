// nirbench: deterministic NIR glucose-sensing simulator and model benchmark.
//
// Subcommands: generate | train | eval | bench | report | features
// Exit codes: 0 success, 2 usage, 3 data/config error, 4 numeric/training error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nirbench/config.hpp"
#include "nirbench/features.hpp"
#include "nirbench/io_util.hpp"
#include "nirbench/pipeline.hpp"
#include "nirbench/train.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool no_noise = false;
};

nirbench::ScenarioConfig resolve_config(const CommonOpts& opts) {
  nirbench::ScenarioConfig cfg;
  if (!opts.config_path.empty()) cfg = nirbench::load_config(opts.config_path);
  if (const char* env = std::getenv("NIRBENCH_SEED"); env && !opts.seed_set)
    cfg.seed = std::stoull(env);
  if (opts.seed_set) cfg.seed = opts.seed;
  if (opts.no_noise) {
    cfg.noise.hardware = false;
    cfg.noise.environment = false;
    cfg.noise.physiology = false;
  }
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "scenario config file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "override the config seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_flag("--no-noise", opts.no_noise, "disable all three noise layers");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic NIR glucose simulator + six-model benchmark"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string model_id;
  std::vector<std::string> model_paths;
  std::vector<std::string> report_paths;
  std::vector<std::string> history_paths;
  std::string dataset_path;
  bool with_timing = false;

  auto* gen = app.add_subcommand("generate", "generate the synthetic dataset + audit");
  add_common(gen, opts);

  auto* train = app.add_subcommand("train", "train one model on an existing dataset");
  add_common(train, opts);
  train->add_option("--data", dataset_path, "dataset csv")->required();
  train->add_option("--model", model_id, "model id")->required();

  auto* eval = app.add_subcommand("eval", "evaluate trained models on the test split");
  add_common(eval, opts);
  eval->add_option("--data", dataset_path, "dataset csv")->required();
  eval->add_option("--models", model_paths, "model artifact json files")->required();
  eval->add_flag("--time", with_timing, "measure per-sample inference time (non-deterministic)");

  auto* bench = app.add_subcommand("bench", "generate + train all six models + eval + report");
  add_common(bench, opts);
  bench->add_flag("--time", with_timing, "measure per-sample inference time (non-deterministic)");

  auto* report = app.add_subcommand("report", "emit SVG plots from eval reports");
  add_common(report, opts);
  report->add_option("--reports", report_paths, "report json files")->required();
  report->add_option("--histories", history_paths, "loss history csv files");

  auto* features = app.add_subcommand("features", "feature tooling");
  bool list_features = false;
  features->add_flag("--list", list_features, "print the 56 feature names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      auto cfg = resolve_config(opts);
      auto res = nirbench::run_generate(cfg, opts.out_dir);
      std::cout << "dataset: " << res.dataset_path << "\n"
                << "audit best |rho|: " << res.audit.best_abs_rho << "\n";
    } else if (train->parsed()) {
      auto cfg = resolve_config(opts);
      bool known = false;
      for (const auto& id : nirbench::all_model_ids()) known |= id == model_id;
      if (!known) {
        std::cerr << "unknown model id '" << model_id << "'; valid ids:";
        for (const auto& id : nirbench::all_model_ids()) std::cerr << " " << id;
        std::cerr << "\n";
        return 2;
      }
      auto res = nirbench::run_train(cfg, dataset_path, model_id, opts.out_dir);
      std::cout << "model: " << res.model_path << "\n";
      if (!res.history_path.empty()) std::cout << "history: " << res.history_path << "\n";
    } else if (eval->parsed()) {
      auto cfg = resolve_config(opts);
      auto res = nirbench::run_eval(cfg, dataset_path, model_paths, opts.out_dir, with_timing);
      std::cout << "benchmark table: " << res.table_path << "\n";
    } else if (bench->parsed()) {
      auto cfg = resolve_config(opts);
      auto res = nirbench::run_bench(cfg, opts.out_dir, with_timing);
      std::cout << "manifest: " << res.manifest_path << "\n"
                << "audit best |rho|: " << res.gen.audit.best_abs_rho << "\n"
                << "benchmark table: " << res.eval.table_path << "\n";
    } else if (report->parsed()) {
      auto plots = nirbench::run_report(opts.out_dir, report_paths, history_paths);
      for (const auto& p : plots) std::cout << p << "\n";
    } else if (features->parsed()) {
      for (const auto& name : nirbench::feature_names()) std::cout << name << "\n";
    }
  } catch (const nirbench::nn::TrainingError& e) {
    std::cerr << "training error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

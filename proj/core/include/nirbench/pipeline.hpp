#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nirbench/config.hpp"
#include "nirbench/datagen.hpp"
#include "nirbench/features.hpp"
#include "nirbench/metrics.hpp"
#include "nirbench/ridge.hpp"
#include "nirbench/train.hpp"

namespace nirbench {

const std::vector<std::string>& all_model_ids();  // enhanced_beer_lambert + 5 neural ids
inline constexpr const char* kEblModelId = "enhanced_beer_lambert";

struct EblArtifact {
  RidgeModel model;
  StandardScaler scaler;
  double lambda = 0.0;
};

struct NeuralArtifact {
  nn::NetworkSpec spec;
  std::vector<nn::Tensor> params;
  StandardScaler nir_scaler;
  StandardScaler pmf_scaler;
  std::vector<nn::EpochRow> history;
};

struct ModelArtifact {
  std::string model_id;
  std::string dataset_hash;
  std::vector<double> i0;
  std::vector<double> wavelengths_nm;
  std::optional<EblArtifact> ebl;
  std::optional<NeuralArtifact> neural;

  std::int64_t param_count() const;
  std::string to_json() const;
  static ModelArtifact from_json(const std::string& text);
};

/// Split-aware views; training code never touches the test split.
nn::TrainBatch make_neural_batch(const Dataset& d, Split split, const StandardScaler& nir_scaler,
                                 const StandardScaler& pmf_scaler);

ModelArtifact train_model(const Dataset& d, const std::string& dataset_hash,
                          const ScenarioConfig& cfg, const std::string& model_id);

std::vector<double> predict_split(const ModelArtifact& art, const Dataset& d, Split split,
                                  const ExtinctionTable& table);

/// Median wall time per sample (ns) of one end-to-end inference.
double time_inference_ns(const ModelArtifact& art, const Dataset& d, const ExtinctionTable& table,
                         int repetitions = 2000);

struct EvalOutput {
  std::vector<ModelReport> reports;
  std::vector<std::vector<double>> test_ref;   // per model (identical content)
  std::vector<std::vector<double>> test_pred;  // per model
};

EvalOutput evaluate_models(const std::vector<ModelArtifact>& artifacts, const Dataset& d,
                           const std::string& dataset_hash, const ScenarioConfig& cfg,
                           bool with_timing);

// ---- file-level commands shared by the CLI and the test-suites ----

struct GenerateResult {
  std::string dataset_path;
  std::string sidecar_path;
  std::string audit_path;
  CorrelationAudit audit;
};
GenerateResult run_generate(const ScenarioConfig& cfg, const std::string& out_dir);

struct TrainResult {
  std::string model_path;
  std::string history_path;  // empty for the ridge model
};
TrainResult run_train(const ScenarioConfig& cfg, const std::string& dataset_path,
                      const std::string& model_id, const std::string& out_dir);

struct EvalResult {
  std::vector<std::string> report_paths;
  std::string table_path;
};
EvalResult run_eval(const ScenarioConfig& cfg, const std::string& dataset_path,
                    const std::vector<std::string>& model_paths, const std::string& out_dir,
                    bool with_timing);

std::vector<std::string> run_report(const std::string& out_dir,
                                    const std::vector<std::string>& report_paths,
                                    const std::vector<std::string>& history_paths);

struct BenchResult {
  GenerateResult gen;
  std::vector<TrainResult> trainings;
  EvalResult eval;
  std::vector<std::string> plots;
  std::string manifest_path;
};
BenchResult run_bench(const ScenarioConfig& cfg, const std::string& out_dir, bool with_timing);

}  // namespace nirbench

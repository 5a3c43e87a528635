#include "nirbench/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "nirbench/io_util.hpp"
#include "nirbench/rng.hpp"
#include "nirbench/svg_report.hpp"

namespace nirbench {

namespace {

ExtinctionTable table_for(const ScenarioConfig& cfg) {
  return cfg.extinction_table_path.empty() ? ExtinctionTable::builtin_default()
                                           : ExtinctionTable::load_csv(cfg.extinction_table_path);
}

std::vector<const SpectralSample*> rows_of(const Dataset& d, Split split) {
  auto rows = d.split_samples(split);
  if (rows.empty())
    throw std::invalid_argument(std::string("dataset has no rows in split ") + split_name(split));
  return rows;
}

std::vector<double> intensity_row(const SpectralSample& s) {
  std::vector<double> out;
  out.reserve(s.adc_codes.size());
  for (int c : s.adc_codes) out.push_back(c / 4095.0);
  return out;
}

std::vector<FeatureVector> feature_rows(const std::vector<const SpectralSample*>& rows,
                                        const Dataset& d, const ExtinctionTable& table) {
  std::vector<FeatureVector> out;
  out.reserve(rows.size());
  for (const auto* s : rows)
    out.push_back(extract_features(*s, d.i0_reference, d.wavelengths_nm, table));
  return out;
}

std::vector<std::vector<double>> standardized_features(const std::vector<FeatureVector>& raw,
                                                       const StandardScaler& scaler) {
  std::vector<std::vector<double>> out;
  out.reserve(raw.size());
  for (const auto& r : raw) out.push_back(scaler.apply(std::vector<double>(r.begin(), r.end())));
  return out;
}

std::vector<double> targets_of(const std::vector<const SpectralSample*>& rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto* s : rows) out.push_back(s->glucose_interstitial);
  return out;
}

nlohmann::ordered_json scaler_json(const StandardScaler& s) {
  return {{"mean", s.mean()}, {"sd", s.stddev()}};
}

StandardScaler scaler_from_json(const nlohmann::json& j) {
  StandardScaler s;
  s.set(j.at("mean").get<std::vector<double>>(), j.at("sd").get<std::vector<double>>());
  return s;
}

}  // namespace

const std::vector<std::string>& all_model_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v{kEblModelId};
    for (const auto& id : nn::neural_model_ids()) v.push_back(id);
    return v;
  }();
  return ids;
}

std::int64_t ModelArtifact::param_count() const {
  if (ebl) return static_cast<std::int64_t>(ebl->model.weights().size()) + 1;
  return nn::count_params(neural->spec);
}

std::string ModelArtifact::to_json() const {
  nlohmann::ordered_json j;
  j["tool_version"] = "nirbench 1.0.0";
  j["model_id"] = model_id;
  j["dataset_hash"] = dataset_hash;
  j["wavelengths_nm"] = wavelengths_nm;
  j["i0_reference"] = i0;
  if (ebl) {
    j["kind"] = "ridge";
    j["lambda"] = ebl->lambda;
    j["bias"] = ebl->model.bias();
    j["weights"] = ebl->model.weights();
    j["feature_names"] = feature_names();
    j["feature_scaler"] = scaler_json(ebl->scaler);
  } else {
    j["kind"] = "neural";
    j["arch"] = nn::arch_id(neural->spec.arch);
    j["rte_wavelengths_nm"] = neural->spec.rte_wavelengths_nm;
    j["nir_scaler"] = scaler_json(neural->nir_scaler);
    j["pmf_scaler"] = scaler_json(neural->pmf_scaler);
    nlohmann::ordered_json params = nlohmann::ordered_json::array();
    auto layout = nn::parameter_layout(neural->spec);
    for (std::size_t i = 0; i < layout.size(); ++i) {
      params.push_back({{"name", layout[i].name},
                        {"rows", neural->params[i].rows},
                        {"cols", neural->params[i].cols},
                        {"values", neural->params[i].v}});
    }
    j["parameters"] = params;
  }
  return j.dump(2) + "\n";
}

ModelArtifact ModelArtifact::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  ModelArtifact a;
  a.model_id = j.at("model_id").get<std::string>();
  a.dataset_hash = j.at("dataset_hash").get<std::string>();
  a.wavelengths_nm = j.at("wavelengths_nm").get<std::vector<double>>();
  a.i0 = j.at("i0_reference").get<std::vector<double>>();
  if (j.at("kind") == "ridge") {
    EblArtifact e;
    e.lambda = j.at("lambda").get<double>();
    nlohmann::ordered_json rj;
    rj["lambda"] = e.lambda;
    rj["bias"] = j.at("bias");
    rj["weights"] = j.at("weights");
    e.model = RidgeModel::from_json(rj.dump());
    e.scaler = scaler_from_json(j.at("feature_scaler"));
    a.ebl = std::move(e);
  } else {
    NeuralArtifact n;
    n.spec = nn::NetworkSpec::make(nn::arch_from_id(j.at("arch").get<std::string>()),
                                   a.wavelengths_nm);
    n.spec.rte_wavelengths_nm = j.at("rte_wavelengths_nm").get<std::vector<double>>();
    n.nir_scaler = scaler_from_json(j.at("nir_scaler"));
    n.pmf_scaler = scaler_from_json(j.at("pmf_scaler"));
    for (const auto& pj : j.at("parameters")) {
      nn::Tensor t(pj.at("rows").get<int>(), pj.at("cols").get<int>());
      t.v = pj.at("values").get<std::vector<double>>();
      n.params.push_back(std::move(t));
    }
    a.neural = std::move(n);
  }
  return a;
}

nn::TrainBatch make_neural_batch(const Dataset& d, Split split, const StandardScaler& nir_scaler,
                                 const StandardScaler& pmf_scaler) {
  nn::TrainBatch b;
  for (const auto* s : rows_of(d, split)) {
    auto raw = intensity_row(*s);
    b.raw_intensity.push_back(raw);
    b.nir.push_back(nir_scaler.apply(raw));
    b.pmf.push_back(pmf_scaler.apply(std::vector<double>(s->pmf_raw.begin(), s->pmf_raw.end())));
    b.target_mgdl.push_back(s->glucose_interstitial);
    b.subject_ids.push_back(s->subject_id);
    b.t_min.push_back(s->t_min);
  }
  return b;
}

ModelArtifact train_model(const Dataset& d, const std::string& dataset_hash,
                          const ScenarioConfig& cfg, const std::string& model_id) {
  ExtinctionTable table = table_for(cfg);
  ModelArtifact art;
  art.model_id = model_id;
  art.dataset_hash = dataset_hash;
  art.i0 = d.i0_reference;
  art.wavelengths_nm = d.wavelengths_nm;

  if (model_id == kEblModelId) {
    auto train_rows = rows_of(d, Split::Train);
    auto val_rows = rows_of(d, Split::Val);
    auto raw_train = feature_rows(train_rows, d, table);
    auto raw_val = feature_rows(val_rows, d, table);

    EblArtifact e;
    std::vector<std::vector<double>> plain_train;
    for (const auto& r : raw_train) plain_train.emplace_back(r.begin(), r.end());
    e.scaler.fit_lenient(plain_train);

    auto x_train = standardized_features(raw_train, e.scaler);
    auto x_val = standardized_features(raw_val, e.scaler);
    auto y_train = targets_of(train_rows);
    auto y_val = targets_of(val_rows);
    e.lambda = select_lambda(x_train, y_train, x_val, y_val, cfg.ridge_lambda_grid);
    e.model = RidgeModel::fit(x_train, y_train, e.lambda);
    art.ebl = std::move(e);
    return art;
  }

  nn::Arch arch = nn::arch_from_id(model_id);
  NeuralArtifact n;
  n.spec = nn::NetworkSpec::make(arch, d.wavelengths_nm);

  auto train_rows = rows_of(d, Split::Train);
  std::vector<std::vector<double>> nir_rows, pmf_rows;
  for (const auto* s : train_rows) {
    nir_rows.push_back(intensity_row(*s));
    pmf_rows.emplace_back(s->pmf_raw.begin(), s->pmf_raw.end());
  }
  n.nir_scaler.fit_lenient(nir_rows);
  n.pmf_scaler.fit_lenient(pmf_rows);

  auto train_batch = make_neural_batch(d, Split::Train, n.nir_scaler, n.pmf_scaler);
  auto val_batch = make_neural_batch(d, Split::Val, n.nir_scaler, n.pmf_scaler);

  RandomStream root(cfg.seed);
  RandomStream model_rng = root.derive("model").derive(model_id);
  auto state = nn::train(n.spec, train_batch, val_batch, cfg.hyper_for(model_id), d.i0_reference,
                         d.wavelengths_nm, table, model_rng);
  n.params = std::move(state.params);
  n.history = std::move(state.history);
  art.neural = std::move(n);
  return art;
}

std::vector<double> predict_split(const ModelArtifact& art, const Dataset& d, Split split,
                                  const ExtinctionTable& table) {
  auto rows = rows_of(d, split);
  if (art.ebl) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto* s : rows) {
      auto fv = extract_features(*s, art.i0, art.wavelengths_nm, table);
      auto x = art.ebl->scaler.apply(std::vector<double>(fv.begin(), fv.end()));
      out.push_back(art.ebl->model.predict_one(x));
    }
    return out;
  }
  std::vector<std::vector<double>> nir, pmf;
  for (const auto* s : rows) {
    nir.push_back(art.neural->nir_scaler.apply(intensity_row(*s)));
    pmf.push_back(
        art.neural->pmf_scaler.apply(std::vector<double>(s->pmf_raw.begin(), s->pmf_raw.end())));
  }
  return nn::forward_eval(art.neural->spec, art.neural->params, nir, pmf);
}

double time_inference_ns(const ModelArtifact& art, const Dataset& d, const ExtinctionTable& table,
                         int repetitions) {
  auto rows = rows_of(d, Split::Test);
  std::vector<double> times;
  times.reserve(repetitions);
  volatile double sink = 0.0;
  for (int r = 0; r < repetitions; ++r) {
    const SpectralSample& s = *rows[r % rows.size()];
    auto t0 = std::chrono::steady_clock::now();
    double value;
    if (art.ebl) {
      auto fv = extract_features(s, art.i0, art.wavelengths_nm, table);
      auto x = art.ebl->scaler.apply(std::vector<double>(fv.begin(), fv.end()));
      value = art.ebl->model.predict_one(x);
    } else {
      auto nir = art.neural->nir_scaler.apply(intensity_row(s));
      auto pmf =
          art.neural->pmf_scaler.apply(std::vector<double>(s.pmf_raw.begin(), s.pmf_raw.end()));
      value = nn::forward_eval(art.neural->spec, art.neural->params, {nir}, {pmf})[0];
    }
    auto t1 = std::chrono::steady_clock::now();
    sink = sink + value;
    times.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
  }
  (void)sink;
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

EvalOutput evaluate_models(const std::vector<ModelArtifact>& artifacts, const Dataset& d,
                           const std::string& dataset_hash, const ScenarioConfig& cfg,
                           bool with_timing) {
  ExtinctionTable table = table_for(cfg);
  EvalOutput out;
  auto test_rows = rows_of(d, Split::Test);
  auto ref = targets_of(test_rows);
  for (const auto& art : artifacts) {
    if (art.dataset_hash != dataset_hash)
      throw std::runtime_error("eval: model '" + art.model_id +
                               "' was trained on a different dataset (hash " + art.dataset_hash +
                               " vs " + dataset_hash + "); refusing to evaluate");
    auto pred = predict_split(art, d, Split::Test, table);
    ModelReport r = evaluate_predictions(art.model_id, pred, ref);
    r.param_count = art.param_count();
    r.feature_count = art.ebl ? kNumFeatures : 0;
    if (with_timing) r.inference_ns_per_sample = time_inference_ns(art, d, table);
    out.reports.push_back(std::move(r));
    out.test_ref.push_back(ref);
    out.test_pred.push_back(std::move(pred));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string audit_json(const CorrelationAudit& a, const Dataset& d) {
  nlohmann::ordered_json j;
  for (std::size_t k = 0; k < a.per_channel_rho.size(); ++k)
    j["rho_per_channel"][std::to_string(static_cast<int>(d.wavelengths_nm[k]))] =
        a.per_channel_rho[k];
  j["best_abs_rho"] = a.best_abs_rho;
  j["best_channel_nm"] = d.wavelengths_nm[a.best_channel];
  return j.dump(2) + "\n";
}

}  // namespace

GenerateResult run_generate(const ScenarioConfig& cfg, const std::string& out_dir) {
  Dataset d = generate_dataset(cfg);
  GenerateResult res;
  res.dataset_path = join(out_dir, "dataset.csv");
  res.sidecar_path = join(out_dir, "dataset_meta.json");
  res.audit_path = join(out_dir, "audit.json");
  write_file(res.dataset_path, dataset_to_csv(d));
  write_file(res.sidecar_path, dataset_sidecar_json(d, cfg));
  res.audit = audit_correlation(d);
  write_file(res.audit_path, audit_json(res.audit, d));
  return res;
}

TrainResult run_train(const ScenarioConfig& cfg, const std::string& dataset_path,
                      const std::string& model_id, const std::string& out_dir) {
  std::string csv = read_file(dataset_path);
  Dataset d = dataset_from_csv(csv);
  d.i0_reference.assign(d.wavelengths_nm.size(), cfg.hardware.cal_fraction);
  std::string hash = hash_hex(csv);
  ModelArtifact art = train_model(d, hash, cfg, model_id);
  TrainResult res;
  res.model_path = join(out_dir, "model_" + model_id + ".json");
  write_file(res.model_path, art.to_json());
  if (art.neural) {
    res.history_path = join(out_dir, "history_" + model_id + ".csv");
    write_file(res.history_path, nn::history_to_csv(art.neural->history));
  }
  return res;
}

EvalResult run_eval(const ScenarioConfig& cfg, const std::string& dataset_path,
                    const std::vector<std::string>& model_paths, const std::string& out_dir,
                    bool with_timing) {
  std::string csv = read_file(dataset_path);
  Dataset d = dataset_from_csv(csv);
  d.i0_reference.assign(d.wavelengths_nm.size(), cfg.hardware.cal_fraction);
  std::string hash = hash_hex(csv);
  std::vector<ModelArtifact> artifacts;
  for (const auto& p : model_paths) artifacts.push_back(ModelArtifact::from_json(read_file(p)));
  auto out = evaluate_models(artifacts, d, hash, cfg, with_timing);

  EvalResult res;
  for (std::size_t i = 0; i < out.reports.size(); ++i) {
    auto j = nlohmann::ordered_json::parse(report_to_json(out.reports[i]));
    j["test_ref"] = out.test_ref[i];
    j["test_pred"] = out.test_pred[i];
    std::string path = join(out_dir, "report_" + out.reports[i].model_id + ".json");
    write_file(path, j.dump(2) + "\n");
    res.report_paths.push_back(path);
  }
  res.table_path = join(out_dir, "benchmark.csv");
  write_file(res.table_path, reports_to_csv(out.reports));
  return res;
}

std::vector<std::string> run_report(const std::string& out_dir,
                                    const std::vector<std::string>& report_paths,
                                    const std::vector<std::string>& history_paths) {
  if (report_paths.empty()) throw std::invalid_argument("report: need at least one model report");
  std::vector<std::string> plots;
  std::vector<ModelReport> reports;
  for (const auto& path : report_paths) {
    auto j = nlohmann::json::parse(read_file(path));
    ModelReport r = report_from_json(read_file(path));
    reports.push_back(r);
    auto ref = j.at("test_ref").get<std::vector<double>>();
    auto pred = j.at("test_pred").get<std::vector<double>>();
    auto emit = [&](const std::string& name, const std::string& content) {
      std::string p = join(out_dir, name);
      write_file(p, content);
      plots.push_back(p);
    };
    emit("clarke_" + r.model_id + ".svg", clarke_grid_svg(ref, pred, "Clarke grid: " + r.model_id));
    emit("bland_altman_" + r.model_id + ".svg",
         bland_altman_svg(ref, pred, "Bland-Altman: " + r.model_id));
    emit("linearity_" + r.model_id + ".svg", linearity_svg(ref, pred, "Linearity: " + r.model_id));
  }
  for (const auto& hp : history_paths) {
    auto lines = split(read_file(hp), '\n');
    std::vector<nn::EpochRow> hist;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (trim(lines[i]).empty()) continue;
      auto f = split(lines[i], ',');
      if (f.size() != 5) continue;
      hist.push_back({std::stoi(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3]),
                      std::stod(f[4])});
    }
    std::string stem = fs::path(hp).stem().string();  // history_<id>
    std::string model = stem.size() > 8 ? stem.substr(8) : stem;
    std::string p = join(out_dir, "loss_" + model + ".svg");
    write_file(p, loss_history_svg(hist, "training loss: " + model));
    plots.push_back(p);
  }
  std::string radar = join(out_dir, "radar.svg");
  write_file(radar, radar_svg(reports));
  plots.push_back(radar);
  return plots;
}

BenchResult run_bench(const ScenarioConfig& cfg, const std::string& out_dir, bool with_timing) {
  BenchResult res;
  res.gen = run_generate(cfg, out_dir);
  std::vector<std::string> model_paths, history_paths;
  for (const auto& id : all_model_ids()) {
    auto tr = run_train(cfg, res.gen.dataset_path, id, out_dir);
    model_paths.push_back(tr.model_path);
    if (!tr.history_path.empty()) history_paths.push_back(tr.history_path);
    res.trainings.push_back(std::move(tr));
  }
  res.eval = run_eval(cfg, res.gen.dataset_path, model_paths, out_dir, with_timing);
  res.plots = run_report(out_dir, res.eval.report_paths, history_paths);

  nlohmann::ordered_json manifest;
  manifest["tool_version"] = "nirbench 1.0.0";
  manifest["config_hash"] = cfg.config_hash();
  manifest["dataset"] = res.gen.dataset_path;
  manifest["sidecar"] = res.gen.sidecar_path;
  manifest["audit"] = res.gen.audit_path;
  manifest["models"] = model_paths;
  manifest["histories"] = history_paths;
  manifest["reports"] = res.eval.report_paths;
  manifest["benchmark_table"] = res.eval.table_path;
  manifest["plots"] = res.plots;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  manifest["timestamp_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  // every referenced path must exist at manifest write time
  for (const auto& key : {"dataset", "sidecar", "audit"})
    if (!file_exists(manifest[key].get<std::string>()))
      throw std::runtime_error("manifest: missing artifact " + manifest[key].get<std::string>());
  for (const auto& group : {"models", "histories", "reports", "plots"})
    for (const auto& p : manifest[group])
      if (!file_exists(p.get<std::string>()))
        throw std::runtime_error("manifest: missing artifact " + p.get<std::string>());
  res.manifest_path = join(out_dir, "manifest.json");
  write_file(res.manifest_path, manifest.dump(2) + "\n");
  return res;
}

}  // namespace nirbench

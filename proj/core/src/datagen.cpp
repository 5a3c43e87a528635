#include "nirbench/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nirbench/glucose.hpp"
#include "nirbench/hardware.hpp"
#include "nirbench/io_util.hpp"
#include "nirbench/rng.hpp"

#include <json.hpp>

namespace nirbench {

const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  throw std::logic_error("unknown split");
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::Train;
  if (name == "val") return Split::Val;
  if (name == "test") return Split::Test;
  throw std::invalid_argument("unknown split name: " + name);
}

int Dataset::count_in_split(Split s) const {
  int n = 0;
  for (const auto& x : samples) n += x.split == s;
  return n;
}

std::vector<const SpectralSample*> Dataset::split_samples(Split s) const {
  std::vector<const SpectralSample*> out;
  for (const auto& x : samples)
    if (x.split == s) out.push_back(&x);
  return out;
}

std::vector<Split> split_subjects(int n_subjects, const std::array<double, 3>& fractions,
                                  RandomStream& rng) {
  int nonzero = 0;
  for (double f : fractions) nonzero += f > 0;
  if (n_subjects < nonzero)
    throw std::invalid_argument("split_subjects: fewer subjects than nonzero splits");

  // Largest-remainder apportionment; remainder ties resolve toward train.
  std::array<int, 3> counts;
  std::array<double, 3> rema;
  int assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double exact = fractions[i] * n_subjects;
    counts[i] = static_cast<int>(std::floor(exact));
    rema[i] = exact - counts[i];
    assigned += counts[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rema[a] > rema[b]; });
  for (int k = 0; k < n_subjects - assigned; ++k) counts[order[k % 3]] += 1;

  std::vector<int> ids(n_subjects);
  std::iota(ids.begin(), ids.end(), 0);
  for (int i = n_subjects - 1; i > 0; --i)
    std::swap(ids[i], ids[rng.uniform_int(static_cast<std::uint64_t>(i + 1))]);

  std::vector<Split> out(n_subjects);
  int pos = 0;
  for (int s = 0; s < 3; ++s)
    for (int k = 0; k < counts[s]; ++k) out[ids[pos++]] = static_cast<Split>(s);
  return out;
}

namespace {

struct ChannelDevice {
  LedModel led;
  PhotodiodeModel pd;
  AdcModel adc;
};

// Per-wear calibration: absorbance of the subject at lab conditions with the
// calibration glucose level. The per-channel TIA gain is trimmed so this
// reference state reads cal_fraction of full scale.
constexpr double kCalibrationGlucose = 100.0;  // mg/dL

double calibration_absorbance(const Subject& subj, double wavelength_nm,
                              const ExtinctionTable& table, const PhysiologyConfig& pcfg) {
  auto so = subject_optics(subj, kCalibrationGlucose, 0.0, wavelength_nm, table, pcfg);
  return so.medium.mu_a * so.medium.path_length;
}

}  // namespace

std::vector<SpectralSample> generate_subject_samples(const ScenarioConfig& cfg,
                                                     const ExtinctionTable& table,
                                                     const AmbientWeights& ambient, int subject_id,
                                                     Split split) {
  RandomStream root(cfg.seed);
  RandomStream sub = root.derive("subject").derive(std::to_string(subject_id));
  const auto& hw = cfg.hardware;
  const auto& pcfg = cfg.physiology;
  const std::size_t nw = cfg.wavelengths_nm.size();

  RandomStream anat = sub.derive("anatomy");
  Subject subj = cfg.noise.physiology ? sample_subject(anat) : reference_subject();

  RandomStream gstream = sub.derive("glucose");
  BergmanParams params;
  params.basal_mgdl = gstream.uniform(80.0, 140.0);
  auto events = default_event_schedule(gstream);
  auto traj = simulate_plasma(params, events);
  double tau = gstream.uniform(7.0, 15.0);
  if (!cfg.noise.physiology) tau = 11.0;
  RandomStream lag_stream = sub.derive("lag");
  traj.interstitial_mgdl = interstitial_lag(traj.plasma_mgdl, tau, lag_stream,
                                            cfg.noise.physiology ? 1.0 : 0.0);

  RandomStream tstream = sub.derive("times");
  auto times = sample_measurement_times(kMinutesPerDay, cfg.measurements_per_subject, tstream);

  // Device state: per-channel INL phase and LED age, one draw order fixed by
  // channel index.
  RandomStream dstream = sub.derive("device");
  std::vector<ChannelDevice> devices(nw);
  for (std::size_t k = 0; k < nw; ++k) {
    auto& dev = devices[k];
    dev.led.nominal_power_mw = hw.p0_mw;
    dev.led.wavelength_nm = cfg.wavelengths_nm[k];
    dev.led.flicker_sd = hw.flicker_sd;
    dev.led.age_hours = cfg.noise.hardware ? dstream.uniform(0.0, hw.led_age_max_hours) : 0.0;
    dev.pd.responsivity_a_per_w = hw.responsivity_a_per_w;
    dev.pd.dark_current_25_a = hw.dark_current_25_a;
    dev.pd.bandwidth_hz = hw.bandwidth_hz;
    dev.pd.load_resistance_ohm = hw.load_resistance_ohm;
    double inl_amp = cfg.noise.hardware ? hw.inl_amplitude_codes : 0.0;
    double drift = cfg.noise.hardware ? hw.offset_drift_codes_per_degc : 0.0;
    dev.adc = AdcModel::with_phase(hw.v_ref_v, 1.0, inl_amp, drift, dstream);

    // Gain trim against the noise-free reference reading.
    double a_cal = calibration_absorbance(subj, cfg.wavelengths_nm[k], table, pcfg);
    double i_cal = hw.responsivity_a_per_w *
                       (hw.p0_mw * std::exp(-a_cal) * hw.geometric_coupling) * 1e-3 +
                   hw.dark_current_25_a;
    dev.adc.tia_gain_v_per_a = hw.cal_fraction * hw.v_ref_v / i_cal;
  }

  std::vector<SpectralSample> out;
  for (int j = 0; j < cfg.measurements_per_subject; ++j) {
    RandomStream meas = sub.derive("meas").derive(std::to_string(j));
    RandomStream env_rng = meas.derive("env");
    RandomStream hw_rng = meas.derive("hw");

    EnvState env = cfg.noise.environment ? sample_environment(env_rng) : lab_state();
    auto pert = env_perturbations(env, cfg.wavelengths_nm, ambient, cfg.noise.environment);
    double contact = cfg.noise.hardware
                         ? std::exp(hw_rng.gaussian(0.0, hw.contact_coupling_sd))
                         : 1.0;

    SpectralSample s;
    s.subject_id = subject_id;
    s.split = split;
    s.t_min = times[j];
    s.env = env;
    s.pmf_raw = pmf_raw(subj, env);
    s.glucose_plasma = traj.plasma_mgdl[times[j]];
    s.glucose_interstitial = traj.interstitial_mgdl[times[j]];
    s.adc_codes.resize(nw);
    s.debug_intensities.resize(nw);

    double temp = cfg.noise.environment ? env.temp_c : 25.0;
    for (std::size_t k = 0; k < nw; ++k) {
      auto so = subject_optics(subj, s.glucose_interstitial, pert.perfusion_delta,
                               cfg.wavelengths_nm[k], table, pcfg);
      double absorb = so.medium.mu_a * so.medium.path_length;
      EnvOffsets offsets;
      offsets.coupling_factor = hw.geometric_coupling * pert.coupling * contact;
      offsets.ambient_power_mw = pert.leakage_mw[k];
      auto reading = channel_measurement(devices[k].led, devices[k].pd, devices[k].adc, absorb,
                                         offsets, temp, hw_rng, cfg.noise.hardware);
      s.adc_codes[k] = reading.code;
      s.debug_intensities[k] = reading.debug_intensity;
    }
    out.push_back(std::move(s));
  }
  return out;
}

Dataset generate_dataset(const ScenarioConfig& cfg) {
  cfg.validate();
  ExtinctionTable table = cfg.extinction_table_path.empty()
                              ? ExtinctionTable::builtin_default()
                              : ExtinctionTable::load_csv(cfg.extinction_table_path);
  for (double w : cfg.wavelengths_nm)
    if (!table.has_wavelength(w))
      throw std::invalid_argument("extinction table missing configured wavelength " + fmt_double(w));
  AmbientWeights ambient = AmbientWeights::builtin_default();

  Dataset d;
  d.wavelengths_nm = cfg.wavelengths_nm;
  d.i0_reference.assign(cfg.wavelengths_nm.size(), cfg.hardware.cal_fraction);
  d.config_hash = cfg.config_hash();

  RandomStream root(cfg.seed);
  RandomStream split_rng = root.derive("split");
  d.subject_split = split_subjects(cfg.n_subjects, cfg.split_fractions, split_rng);

  for (int i = 0; i < cfg.n_subjects; ++i) {
    auto rows = generate_subject_samples(cfg, table, ambient, i, d.subject_split[i]);
    for (auto& r : rows) d.samples.push_back(std::move(r));
  }
  // canonical order: by subject then time (generation already emits this)
  std::stable_sort(d.samples.begin(), d.samples.end(), [](const auto& a, const auto& b) {
    return a.subject_id != b.subject_id ? a.subject_id < b.subject_id : a.t_min < b.t_min;
  });
  return d;
}

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y,
               const std::string& xname) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0) throw std::domain_error("audit_correlation: zero variance in " + xname);
  if (syy <= 0) throw std::domain_error("audit_correlation: zero variance in glucose");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

CorrelationAudit audit_correlation(const Dataset& d) {
  if (d.samples.size() < 10) throw std::invalid_argument("audit_correlation: need >= 10 samples");
  CorrelationAudit audit;
  std::vector<double> y;
  y.reserve(d.samples.size());
  for (const auto& s : d.samples) y.push_back(s.glucose_interstitial);
  for (std::size_t k = 0; k < d.wavelengths_nm.size(); ++k) {
    std::vector<double> x;
    x.reserve(d.samples.size());
    for (const auto& s : d.samples)
      x.push_back(-std::log(std::max(s.adc_codes[k], 1) / 4095.0));
    double rho = pearson(x, y, "channel " + fmt_double(d.wavelengths_nm[k]));
    audit.per_channel_rho.push_back(rho);
    if (std::abs(rho) > audit.best_abs_rho) {
      audit.best_abs_rho = std::abs(rho);
      audit.best_channel = static_cast<int>(k);
    }
  }
  return audit;
}

std::string dataset_to_csv(const Dataset& d) {
  std::ostringstream os;
  os << "subject_id,split,t_min";
  for (double w : d.wavelengths_nm) os << ",adc_" << static_cast<int>(w);
  for (double w : d.wavelengths_nm) os << ",i0_" << static_cast<int>(w);
  os << ",temp_c,rh_pct,pressure_mbar,ambient_lux,ambient_profile";
  for (const char* n : pmf_names()) os << "," << n;
  os << ",glucose_plasma,glucose_interstitial\n";
  for (const auto& s : d.samples) {
    os << s.subject_id << "," << split_name(s.split) << "," << s.t_min;
    for (int c : s.adc_codes) os << "," << c;
    for (double v : s.debug_intensities) os << "," << fmt_double(v);
    os << "," << fmt_double(s.env.temp_c) << "," << fmt_double(s.env.rh_pct) << ","
       << fmt_double(s.env.pressure_mbar) << "," << fmt_double(s.env.ambient_lux) << ","
       << ambient_profile_name(s.env.profile);
    for (double v : s.pmf_raw) os << "," << fmt_double(v);
    os << "," << fmt_double(s.glucose_plasma) << "," << fmt_double(s.glucose_interstitial) << "\n";
  }
  return os.str();
}

Dataset dataset_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("dataset csv: empty");
  auto header = split(trim(line), ',');
  std::size_t nw = 0;
  while (3 + nw < header.size() && header[3 + nw].rfind("adc_", 0) == 0) ++nw;
  if (nw == 0) throw std::runtime_error("dataset csv: no adc columns");
  const std::size_t expected = 3 + 2 * nw + 5 + kPmfSize + 2;
  if (header.size() != expected) throw std::runtime_error("dataset csv: unexpected column count");

  Dataset d;
  for (std::size_t k = 0; k < nw; ++k) d.wavelengths_nm.push_back(std::stod(header[3 + k].substr(4)));
  int max_subject = -1;
  std::vector<std::pair<int, Split>> subject_splits;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto f = split(line, ',');
    if (f.size() != expected) throw std::runtime_error("dataset csv: bad row width");
    SpectralSample s;
    std::size_t i = 0;
    s.subject_id = std::stoi(f[i++]);
    s.split = split_from_name(f[i++]);
    s.t_min = std::stoi(f[i++]);
    for (std::size_t k = 0; k < nw; ++k) s.adc_codes.push_back(std::stoi(f[i++]));
    for (std::size_t k = 0; k < nw; ++k) s.debug_intensities.push_back(std::stod(f[i++]));
    s.env.temp_c = std::stod(f[i++]);
    s.env.rh_pct = std::stod(f[i++]);
    s.env.pressure_mbar = std::stod(f[i++]);
    s.env.ambient_lux = std::stod(f[i++]);
    s.env.profile = ambient_profile_from_name(f[i++]);
    for (int k = 0; k < kPmfSize; ++k) s.pmf_raw[k] = std::stod(f[i++]);
    s.glucose_plasma = std::stod(f[i++]);
    s.glucose_interstitial = std::stod(f[i++]);
    max_subject = std::max(max_subject, s.subject_id);
    subject_splits.emplace_back(s.subject_id, s.split);
    d.samples.push_back(std::move(s));
  }
  d.subject_split.assign(max_subject + 1, Split::Train);
  for (auto& [id, sp] : subject_splits) d.subject_split[id] = sp;
  return d;
}

std::string dataset_sidecar_json(const Dataset& d, const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["tool_version"] = "nirbench 1.0.0";
  j["config_hash"] = d.config_hash;
  j["wavelengths_nm"] = d.wavelengths_nm;
  j["i0_reference"] = d.i0_reference;
  j["n_samples"] = d.samples.size();
  j["config_text"] = cfg.canonical_text();
  return j.dump(2) + "\n";
}

}  // namespace nirbench

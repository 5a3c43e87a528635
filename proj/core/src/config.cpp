#include "nirbench/config.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "nirbench/io_util.hpp"

namespace nirbench {

namespace {

double parse_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config line " + std::to_string(line) + ": not a number: '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& v, int line) {
  try {
    size_t pos = 0;
    unsigned long long u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return u;
  } catch (const std::exception&) {
    throw std::runtime_error("config line " + std::to_string(line) + ": not an unsigned integer: '" + v + "'");
  }
}

int parse_int(const std::string& v, int line) {
  try {
    size_t pos = 0;
    int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return i;
  } catch (const std::exception&) {
    throw std::runtime_error("config line " + std::to_string(line) + ": not an integer: '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw std::runtime_error("config line " + std::to_string(line) + ": not a boolean (on/off/true/false): '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  for (const auto& part : split(v, ',')) out.push_back(parse_double(trim(part), line));
  return out;
}

const std::vector<std::string> kModelIds = {
    "enhanced_beer_lambert", "original_pinn", "optimized_pinn",
    "full_rte_pinn", "selective_rte_pinn", "sdnn"};

bool apply_hyper_key(ModelHyper& h, const std::string& key, const std::string& value, int line) {
  if (key == "learning_rate") h.learning_rate = parse_double(value, line);
  else if (key == "max_epochs") h.max_epochs = parse_int(value, line);
  else if (key == "patience") h.patience = parse_int(value, line);
  else if (key == "lambda_physics") h.lambda_physics = parse_double(value, line);
  else if (key == "balance_every") h.balance_every = parse_int(value, line);
  else if (key == "ema_decay") h.ema_decay = parse_double(value, line);
  else return false;
  return true;
}

}  // namespace

ModelHyper ScenarioConfig::hyper_for(const std::string& model_id) const {
  auto it = model_overrides.find(model_id);
  return it == model_overrides.end() ? model_default : it->second;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
  };
  if (n_subjects < 1) fail("run.n_subjects", "must be >= 1");
  if (measurements_per_subject < 1) fail("run.measurements_per_subject", "must be >= 1");
  double s = split_fractions[0] + split_fractions[1] + split_fractions[2];
  if (std::abs(s - 1.0) > 1e-9)
    fail("run.split_fractions", "must sum to 1 within 1e-9, got " + fmt_double(s));
  for (double f : split_fractions)
    if (f < 0) fail("run.split_fractions", "fractions must be >= 0");
  if (wavelengths_nm.empty()) fail("run.wavelengths_nm", "must be nonempty");
  for (size_t i = 0; i < wavelengths_nm.size(); ++i) {
    double w = wavelengths_nm[i];
    if (w < 700.0 || w > 1300.0)
      fail("run.wavelengths_nm", "wavelength " + fmt_double(w) + " outside [700, 1300] nm");
    if (i > 0 && wavelengths_nm[i - 1] >= w)
      fail("run.wavelengths_nm", "wavelengths must be strictly increasing");
  }
  if (hardware.v_ref_v <= 0) fail("hardware.v_ref_v", "must be > 0");
  if (hardware.p0_mw <= 0) fail("hardware.p0_mw", "must be > 0");
  if (hardware.cal_fraction <= 0 || hardware.cal_fraction > 1)
    fail("hardware.cal_fraction", "must be in (0, 1]");
  if (physiology.anisotropy < 0 || physiology.anisotropy >= 1)
    fail("physiology.anisotropy", "must be in [0, 1)");
  if (ridge_lambda_grid.empty()) fail("ridge.lambda_grid", "must be nonempty");
}

std::string ScenarioConfig::canonical_text() const {
  std::ostringstream os;
  auto kv = [&os](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };
  auto list = [](const std::vector<double>& xs) {
    std::string s;
    for (size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + fmt_double(xs[i]);
    return s;
  };
  kv("hardware.bandwidth_hz", fmt_double(hardware.bandwidth_hz));
  kv("hardware.cal_fraction", fmt_double(hardware.cal_fraction));
  kv("hardware.contact_coupling_sd", fmt_double(hardware.contact_coupling_sd));
  kv("hardware.dark_current_25_a", fmt_double(hardware.dark_current_25_a));
  kv("hardware.flicker_sd", fmt_double(hardware.flicker_sd));
  kv("hardware.geometric_coupling", fmt_double(hardware.geometric_coupling));
  kv("hardware.inl_amplitude_codes", fmt_double(hardware.inl_amplitude_codes));
  kv("hardware.led_age_max_hours", fmt_double(hardware.led_age_max_hours));
  kv("hardware.load_resistance_ohm", fmt_double(hardware.load_resistance_ohm));
  kv("hardware.offset_drift_codes_per_degc", fmt_double(hardware.offset_drift_codes_per_degc));
  kv("hardware.p0_mw", fmt_double(hardware.p0_mw));
  kv("hardware.responsivity_a_per_w", fmt_double(hardware.responsivity_a_per_w));
  kv("hardware.v_ref_v", fmt_double(hardware.v_ref_v));
  for (const auto& id : kModelIds) {
    ModelHyper h = hyper_for(id);
    kv("model." + id + ".balance_every", std::to_string(h.balance_every));
    kv("model." + id + ".ema_decay", fmt_double(h.ema_decay));
    kv("model." + id + ".lambda_physics", fmt_double(h.lambda_physics));
    kv("model." + id + ".learning_rate", fmt_double(h.learning_rate));
    kv("model." + id + ".max_epochs", std::to_string(h.max_epochs));
    kv("model." + id + ".patience", std::to_string(h.patience));
  }
  kv("noise.environment", noise.environment ? "on" : "off");
  kv("noise.hardware", noise.hardware ? "on" : "off");
  kv("noise.physiology", noise.physiology ? "on" : "off");
  kv("optics.extinction_table", extinction_table_path);
  kv("physiology.anisotropy", fmt_double(physiology.anisotropy));
  kv("physiology.detour_l0_mm", fmt_double(physiology.detour_l0_mm));
  kv("physiology.scatter_a_mm_inv", fmt_double(physiology.scatter_a_mm_inv));
  kv("physiology.scatter_b", fmt_double(physiology.scatter_b));
  kv("ridge.lambda_grid", list(ridge_lambda_grid));
  kv("run.measurements_per_subject", std::to_string(measurements_per_subject));
  kv("run.n_subjects", std::to_string(n_subjects));
  kv("run.seed", std::to_string(seed));
  kv("run.split_fractions", list({split_fractions[0], split_fractions[1], split_fractions[2]}));
  kv("run.wavelengths_nm", list(wavelengths_nm));
  return os.str();
}

std::string ScenarioConfig::config_hash() const { return hash_hex(canonical_text()); }

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line) + ": expected 'section.key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    // strip trailing comment
    size_t hash = value.find('#');
    if (hash != std::string::npos) value = trim(value.substr(0, hash));

    if (key == "run.seed") cfg.seed = parse_u64(value, line);
    else if (key == "run.n_subjects") cfg.n_subjects = parse_int(value, line);
    else if (key == "run.measurements_per_subject") cfg.measurements_per_subject = parse_int(value, line);
    else if (key == "run.split_fractions") {
      auto xs = parse_double_list(value, line);
      if (xs.size() != 3)
        throw std::runtime_error("config line " + std::to_string(line) + ": split_fractions needs 3 values");
      cfg.split_fractions = {xs[0], xs[1], xs[2]};
    } else if (key == "run.wavelengths_nm") cfg.wavelengths_nm = parse_double_list(value, line);
    else if (key == "noise.hardware") cfg.noise.hardware = parse_bool(value, line);
    else if (key == "noise.environment") cfg.noise.environment = parse_bool(value, line);
    else if (key == "noise.physiology") cfg.noise.physiology = parse_bool(value, line);
    else if (key == "optics.extinction_table") cfg.extinction_table_path = value;
    else if (key == "hardware.p0_mw") cfg.hardware.p0_mw = parse_double(value, line);
    else if (key == "hardware.responsivity_a_per_w") cfg.hardware.responsivity_a_per_w = parse_double(value, line);
    else if (key == "hardware.dark_current_25_a") cfg.hardware.dark_current_25_a = parse_double(value, line);
    else if (key == "hardware.bandwidth_hz") cfg.hardware.bandwidth_hz = parse_double(value, line);
    else if (key == "hardware.load_resistance_ohm") cfg.hardware.load_resistance_ohm = parse_double(value, line);
    else if (key == "hardware.v_ref_v") cfg.hardware.v_ref_v = parse_double(value, line);
    else if (key == "hardware.inl_amplitude_codes") cfg.hardware.inl_amplitude_codes = parse_double(value, line);
    else if (key == "hardware.offset_drift_codes_per_degc") cfg.hardware.offset_drift_codes_per_degc = parse_double(value, line);
    else if (key == "hardware.flicker_sd") cfg.hardware.flicker_sd = parse_double(value, line);
    else if (key == "hardware.geometric_coupling") cfg.hardware.geometric_coupling = parse_double(value, line);
    else if (key == "hardware.contact_coupling_sd") cfg.hardware.contact_coupling_sd = parse_double(value, line);
    else if (key == "hardware.cal_fraction") cfg.hardware.cal_fraction = parse_double(value, line);
    else if (key == "hardware.led_age_max_hours") cfg.hardware.led_age_max_hours = parse_double(value, line);
    else if (key == "physiology.scatter_a_mm_inv") cfg.physiology.scatter_a_mm_inv = parse_double(value, line);
    else if (key == "physiology.scatter_b") cfg.physiology.scatter_b = parse_double(value, line);
    else if (key == "physiology.anisotropy") cfg.physiology.anisotropy = parse_double(value, line);
    else if (key == "physiology.detour_l0_mm") cfg.physiology.detour_l0_mm = parse_double(value, line);
    else if (key == "ridge.lambda_grid") cfg.ridge_lambda_grid = parse_double_list(value, line);
    else if (key.rfind("model.", 0) == 0) {
      auto rest = key.substr(6);
      size_t dot = rest.find('.');
      bool ok = false;
      if (dot != std::string::npos) {
        std::string id = rest.substr(0, dot);
        std::string sub = rest.substr(dot + 1);
        if (id == "default") {
          ok = apply_hyper_key(cfg.model_default, sub, value, line);
        } else {
          for (const auto& known : kModelIds) {
            if (id == known) {
              ModelHyper h = cfg.hyper_for(id);
              ok = apply_hyper_key(h, sub, value, line);
              if (ok) cfg.model_overrides[id] = h;
              break;
            }
          }
        }
      }
      if (!ok)
        throw std::runtime_error("config line " + std::to_string(line) + ": unknown model key '" + key + "'");
    } else {
      throw std::runtime_error("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

}  // namespace nirbench

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nirbench {

struct NoiseToggles {
  bool hardware = true;
  bool environment = true;
  bool physiology = true;
};

struct HardwareConfig {
  double p0_mw = 5.0;
  double responsivity_a_per_w = 0.5;
  double dark_current_25_a = 2e-9;
  double bandwidth_hz = 1e3;
  double load_resistance_ohm = 1e6;
  double v_ref_v = 3.3;
  double inl_amplitude_codes = 2.0;
  double offset_drift_codes_per_degc = 0.05;
  double flicker_sd = 0.001;
  // Optical power fraction geometrically coupled into the photodiode.
  double geometric_coupling = 0.01;
  // Per-measurement contact/repositioning coupling jitter (lognormal sd).
  double contact_coupling_sd = 0.055;
  // Per-wear gain calibration maps the reference reading to this ADC fraction.
  double cal_fraction = 0.7;
  // Device age drawn uniformly in [0, max] hours when hardware noise is on.
  double led_age_max_hours = 2000.0;
};

struct PhysiologyConfig {
  double scatter_a_mm_inv = 20.0;  // mu_s = a * (lambda/1000nm)^-b
  double scatter_b = 1.3;
  double anisotropy = 0.9;
  double detour_l0_mm = 3.0;       // reference length in the detour factor
};

struct ModelHyper {
  double learning_rate = 1e-3;
  int max_epochs = 2000;
  int patience = 100;
  double lambda_physics = 0.01;
  int balance_every = 10;
  double ema_decay = 0.9;
};

struct ScenarioConfig {
  std::uint64_t seed = 42;
  int n_subjects = 80;
  int measurements_per_subject = 3;
  std::array<double, 3> split_fractions{0.6, 0.2, 0.2};
  std::vector<double> wavelengths_nm{850.0, 940.0, 1050.0, 1150.0};
  NoiseToggles noise;
  std::string extinction_table_path;  // empty: built-in table
  HardwareConfig hardware;
  PhysiologyConfig physiology;
  ModelHyper model_default;
  std::map<std::string, ModelHyper> model_overrides;  // keyed by model id
  std::vector<double> ridge_lambda_grid{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};

  ModelHyper hyper_for(const std::string& model_id) const;

  /// Throws std::invalid_argument naming the violated field.
  void validate() const;

  /// Canonical key-sorted text rendering; input to config_hash().
  std::string canonical_text() const;
  std::string config_hash() const;
};

/// Parse the flat `section.key = value` format. Unknown keys and malformed
/// lines raise std::runtime_error with the 1-based line number; the parsed
/// config is validated before being returned.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

}  // namespace nirbench

#include "nirbench/physiology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nirbench/rng.hpp"

namespace nirbench {

void Subject::validate() const {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in(age_years, 18, 80)) throw std::invalid_argument("subject age outside [18, 80]");
  if (!in(bmi, 18, 40)) throw std::invalid_argument("subject bmi outside [18, 40]");
  if (fitzpatrick < 1 || fitzpatrick > 6) throw std::invalid_argument("fitzpatrick outside I..VI");
  if (!in(melanin_fraction, 0.01, 0.15)) throw std::invalid_argument("melanin outside [0.01, 0.15]");
  if (!in(skin_thickness_mm, 0.5, 4.0)) throw std::invalid_argument("skin thickness outside [0.5, 4]");
  if (!in(hydration_offset, -0.10, 0.10)) throw std::invalid_argument("hydration outside [-0.1, 0.1]");
  if (!in(systolic_bp, 90, 180)) throw std::invalid_argument("systolic bp outside [90, 180]");
  if (!in(heart_rate, 50, 120)) throw std::invalid_argument("heart rate outside [50, 120]");
  if (!in(resp_rate, 12, 20)) throw std::invalid_argument("resp rate outside [12, 20]");
  auto band = melanin_band(fitzpatrick);
  if (melanin_fraction < band[0] || melanin_fraction > band[1])
    throw std::invalid_argument("melanin outside its fitzpatrick band");
}

std::array<double, 2> melanin_band(int fitzpatrick) {
  if (fitzpatrick < 1 || fitzpatrick > 6) throw std::invalid_argument("fitzpatrick outside I..VI");
  constexpr double kLo = 0.01, kHi = 0.15;
  double width = (kHi - kLo) / 6.0;
  double lo = kLo + (fitzpatrick - 1) * width;
  return {lo, lo + width};
}

void compute_derived_fractions(Subject& s) {
  // Lean subjects carry more water, heavier ones more lipid; perfusion drops
  // slightly with bmi and tracks hydration.
  s.water_fraction = 0.70 - 0.004 * (s.bmi - 18.0);
  s.lipid_fraction = 0.10 + 0.006 * (s.bmi - 18.0);
  s.baseline_perfusion = 0.044 - 0.0004 * (s.bmi - 18.0) + 0.02 * s.hydration_offset;
}

Subject sample_subject(RandomStream& rng) {
  Subject s;
  s.age_years = rng.uniform(18.0, 80.0);
  s.bmi = rng.uniform(18.0, 40.0);
  s.fitzpatrick = static_cast<int>(rng.uniform_int(6)) + 1;
  auto band = melanin_band(s.fitzpatrick);
  s.melanin_fraction = rng.uniform(band[0], band[1]);
  s.skin_thickness_mm = rng.triangular(0.5, 1.5, 4.0);
  s.hydration_offset = rng.uniform(-0.10, 0.10);
  s.systolic_bp = rng.uniform(90.0, 180.0);
  s.heart_rate = rng.uniform(50.0, 120.0);
  s.resp_rate = rng.uniform(12.0, 20.0);
  compute_derived_fractions(s);
  return s;
}

Subject reference_subject() {
  Subject s;  // mid-range defaults from the struct
  auto band = melanin_band(s.fitzpatrick);
  s.melanin_fraction = 0.5 * (band[0] + band[1]);
  compute_derived_fractions(s);
  return s;
}

double scattering_mu_s(const Subject& s, double wavelength_nm, const PhysiologyConfig& cfg) {
  double collagen_scale = 1.0 - 0.003 * (s.age_years - 45.0);
  return cfg.scatter_a_mm_inv * std::pow(wavelength_nm / 1000.0, -cfg.scatter_b) * collagen_scale;
}

double detour_factor(double mu_s_prime, const PhysiologyConfig& cfg) {
  return std::min(5.0, 1.0 + 0.5 * mu_s_prime * cfg.detour_l0_mm);
}

SubjectOptics subject_optics(const Subject& s, double glucose_mgdl, double perfusion_delta,
                             double wavelength_nm, const ExtinctionTable& table,
                             const PhysiologyConfig& cfg) {
  SubjectOptics out;
  out.concentrations.glucose_mgdl = glucose_mgdl;
  out.concentrations.water_fraction = s.water_fraction * (1.0 + s.hydration_offset);
  out.concentrations.hemoglobin_fraction = s.baseline_perfusion * (1.0 + perfusion_delta);
  out.concentrations.lipid_fraction = s.lipid_fraction;
  out.concentrations.melanin_fraction = s.melanin_fraction;

  double mu_s = scattering_mu_s(s, wavelength_nm, cfg);
  double mu_sp = mu_s * (1.0 - cfg.anisotropy);
  double path = 2.0 * s.skin_thickness_mm * detour_factor(mu_sp, cfg);

  out.medium.mu_a = mixture_absorbance(table, out.concentrations, 1.0, wavelength_nm);
  out.medium.mu_s = mu_s;
  out.medium.anisotropy = cfg.anisotropy;
  out.medium.path_length = path;
  out.medium.validate();
  return out;
}

const std::array<const char*, kPmfSize>& pmf_names() {
  static const std::array<const char*, kPmfSize> names = {
      "pmf_age", "pmf_bmi", "pmf_melanin", "pmf_skin_thickness", "pmf_hydration",
      "pmf_systolic_bp", "pmf_heart_rate", "pmf_resp_rate", "pmf_perfusion",
      "pmf_water", "pmf_lipid", "pmf_env_temp"};
  return names;
}

std::array<double, kPmfSize> pmf_raw(const Subject& s, const EnvState& env) {
  return {s.age_years, s.bmi, s.melanin_fraction, s.skin_thickness_mm, s.hydration_offset,
          s.systolic_bp, s.heart_rate, s.resp_rate, s.baseline_perfusion, s.water_fraction,
          s.lipid_fraction, env.temp_c};
}

std::vector<double> pmf_vector(const Subject& s, const EnvState& env, const StandardScaler& scaler) {
  if (!scaler.fitted()) throw std::logic_error("pmf_vector: scaler not fitted");
  auto raw = pmf_raw(s, env);
  return scaler.apply(std::vector<double>(raw.begin(), raw.end()));
}

}  // namespace nirbench

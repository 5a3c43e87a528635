#include "nirbench/environment.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nirbench/io_util.hpp"
#include "nirbench/rng.hpp"

namespace nirbench {

const char* ambient_profile_name(AmbientProfile p) {
  switch (p) {
    case AmbientProfile::Sun: return "sun";
    case AmbientProfile::Fluorescent: return "fluorescent";
    case AmbientProfile::Led: return "led";
  }
  throw std::logic_error("unknown ambient profile");
}

AmbientProfile ambient_profile_from_name(const std::string& name) {
  if (name == "sun") return AmbientProfile::Sun;
  if (name == "fluorescent") return AmbientProfile::Fluorescent;
  if (name == "led") return AmbientProfile::Led;
  throw std::invalid_argument("unknown ambient profile: " + name);
}

void EnvState::validate() const {
  if (temp_c < 15.0 || temp_c > 45.0) throw std::invalid_argument("env temperature outside [15, 45] C");
  if (rh_pct < 30.0 || rh_pct > 90.0) throw std::invalid_argument("env RH outside [30, 90] %");
  if (pressure_mbar < 950.0 || pressure_mbar > 1050.0)
    throw std::invalid_argument("env pressure outside [950, 1050] mbar");
  if (ambient_lux < 0.1 || ambient_lux > 1e5)
    throw std::invalid_argument("env ambient lux outside [0.1, 1e5]");
}

EnvState lab_state() { return EnvState{}; }

EnvState sample_environment(RandomStream& rng) {
  EnvState e;
  e.temp_c = rng.uniform(15.0, 45.0);
  e.rh_pct = rng.uniform(30.0, 90.0);
  e.pressure_mbar = rng.uniform(950.0, 1050.0);
  e.ambient_lux = rng.log_uniform(0.1, 1e5);
  e.profile = static_cast<AmbientProfile>(rng.uniform_int(3));
  return e;
}

double humidity_coupling(const EnvState& env) {
  return 0.97 + (env.rh_pct - 30.0) / 60.0 * 0.06;
}

double pressure_to_perfusion_delta(const EnvState& env) {
  return (env.pressure_mbar - 1013.0) / 1260.0;
}

void AmbientWeights::add(AmbientProfile p, double wavelength_nm, double w) {
  rows_.push_back({p, wavelength_nm, w});
}

double AmbientWeights::weight(AmbientProfile p, double wavelength_nm) const {
  for (const auto& r : rows_)
    if (r.profile == p && r.wavelength_nm == wavelength_nm) return r.weight;
  throw std::out_of_range("ambient weight table has no entry for profile " +
                          std::string(ambient_profile_name(p)) + " at " +
                          fmt_double(wavelength_nm) + " nm");
}

AmbientWeights AmbientWeights::builtin_default() {
  // Sun is nearly flat across the NIR band, fluorescent falls off above
  // 950 nm, LED room lighting decays with wavelength. mW per lux before OD.
  AmbientWeights w;
  w.add(AmbientProfile::Sun, 850.0, 3.0e-7);
  w.add(AmbientProfile::Sun, 940.0, 2.6e-7);
  w.add(AmbientProfile::Sun, 1050.0, 2.2e-7);
  w.add(AmbientProfile::Sun, 1150.0, 1.8e-7);
  w.add(AmbientProfile::Fluorescent, 850.0, 1.2e-7);
  w.add(AmbientProfile::Fluorescent, 940.0, 5.0e-8);
  w.add(AmbientProfile::Fluorescent, 1050.0, 2.0e-9);
  w.add(AmbientProfile::Fluorescent, 1150.0, 1.0e-9);
  w.add(AmbientProfile::Led, 850.0, 2.0e-7);
  w.add(AmbientProfile::Led, 940.0, 1.0e-7);
  w.add(AmbientProfile::Led, 1050.0, 4.0e-8);
  w.add(AmbientProfile::Led, 1150.0, 1.5e-8);
  return w;
}

AmbientWeights AmbientWeights::load_csv(const std::string& path) {
  std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("ambient csv empty: " + path);
  if (trim(line) != "profile,wavelength_nm,weight")
    throw std::runtime_error("ambient csv: unexpected header in " + path);
  AmbientWeights w;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    auto parts = split(line, ',');
    if (parts.size() != 3)
      throw std::runtime_error("ambient csv line " + std::to_string(n) + ": expected 3 columns");
    w.add(ambient_profile_from_name(trim(parts[0])), std::stod(parts[1]), std::stod(parts[2]));
  }
  return w;
}

std::string AmbientWeights::to_csv() const {
  std::string out = "profile,wavelength_nm,weight\n";
  for (const auto& r : rows_)
    out += std::string(ambient_profile_name(r.profile)) + "," + fmt_double(r.wavelength_nm) + "," +
           fmt_double(r.weight) + "\n";
  return out;
}

double ambient_leakage(const EnvState& env, double wavelength_nm, const AmbientWeights& weights,
                       double od) {
  double atten = std::pow(10.0, -od);  // od = inf -> 0
  return env.ambient_lux * weights.weight(env.profile, wavelength_nm) * atten;
}

EnvPerturbations env_perturbations(const EnvState& env, const std::vector<double>& wavelengths_nm,
                                   const AmbientWeights& weights, bool enabled) {
  EnvPerturbations p;
  p.leakage_mw.assign(wavelengths_nm.size(), 0.0);
  if (!enabled) return p;
  p.coupling = humidity_coupling(env);
  p.perfusion_delta = pressure_to_perfusion_delta(env);
  for (std::size_t i = 0; i < wavelengths_nm.size(); ++i)
    p.leakage_mw[i] = ambient_leakage(env, wavelengths_nm[i], weights);
  return p;
}

}  // namespace nirbench

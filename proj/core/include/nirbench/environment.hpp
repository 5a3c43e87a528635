#pragma once

#include <string>
#include <vector>

namespace nirbench {

class RandomStream;

enum class AmbientProfile { Sun = 0, Fluorescent, Led };
const char* ambient_profile_name(AmbientProfile p);
AmbientProfile ambient_profile_from_name(const std::string& name);

struct EnvState {
  double temp_c = 25.0;
  double rh_pct = 45.0;
  double pressure_mbar = 1013.0;
  double ambient_lux = 0.1;
  AmbientProfile profile = AmbientProfile::Fluorescent;

  void validate() const;
};

/// Controlled lab conditions (25 C, 45 %RH, 1013 mbar, 0.1 lux).
EnvState lab_state();

EnvState sample_environment(RandomStream& rng);

/// Linear RH 30 -> 0.97, RH 90 -> 1.03.
double humidity_coupling(const EnvState& env);

/// Linear, 1013 mbar -> 0, slope 1/1260 per mbar (950 -> -0.05).
double pressure_to_perfusion_delta(const EnvState& env);

/// In-band ambient power per profile/wavelength, mW per lux (before the
/// optical-density attenuation applied by ambient_leakage).
class AmbientWeights {
 public:
  double weight(AmbientProfile p, double wavelength_nm) const;
  static AmbientWeights builtin_default();
  static AmbientWeights load_csv(const std::string& path);
  std::string to_csv() const;

  void add(AmbientProfile p, double wavelength_nm, double w);

 private:
  struct Row { AmbientProfile profile; double wavelength_nm; double weight; };
  std::vector<Row> rows_;
};

/// Leakage power at the detector: lux * weight * 10^-od. Unknown wavelength
/// throws std::out_of_range.
double ambient_leakage(const EnvState& env, double wavelength_nm, const AmbientWeights& weights,
                       double od = 2.0);

/// The three perturbations applied to a measurement; identity when disabled.
struct EnvPerturbations {
  double coupling = 1.0;
  double perfusion_delta = 0.0;
  std::vector<double> leakage_mw;  // per wavelength
};

EnvPerturbations env_perturbations(const EnvState& env, const std::vector<double>& wavelengths_nm,
                                   const AmbientWeights& weights, bool enabled);

}  // namespace nirbench

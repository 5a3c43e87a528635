#include "nirbench/hardware.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <stdexcept>

#include "nirbench/constants.hpp"

namespace nirbench {

AdcModel AdcModel::with_phase(double v_ref, double tia_gain, double inl_amplitude,
                              double offset_drift, RandomStream& device_rng) {
  AdcModel adc;
  adc.v_ref_v = v_ref;
  adc.tia_gain_v_per_a = tia_gain;
  adc.inl_amplitude_codes = inl_amplitude;
  adc.offset_drift_codes_per_degc = offset_drift;
  adc.inl_phase = device_rng.uniform(0.0, 2.0 * M_PI);
  return adc;
}

double led_power(const LedModel& led, double temp_c, RandomStream& rng, bool noise) {
  if (!std::isfinite(temp_c)) throw std::domain_error("led_power: temperature must be finite");
  double flicker = noise ? rng.gaussian(0.0, led.flicker_sd) : 0.0;
  double p = led.nominal_power_mw *
             (1.0 - 0.002 * (temp_c - 25.0) - 0.001 * led.age_hours / 1000.0 + flicker);
  return std::max(0.0, p);
}

double shot_noise_sd(double current_a, double bandwidth_hz) {
  return std::sqrt(2.0 * constants::kElectronCharge * current_a * bandwidth_hz);
}

double thermal_noise_sd(double temp_c, double bandwidth_hz, double load_resistance_ohm) {
  double t_k = temp_c + constants::kCelsiusToKelvin;
  return std::sqrt(4.0 * constants::kBoltzmann * t_k * bandwidth_hz / load_resistance_ohm);
}

PhotodiodeCurrents photodiode_currents(const PhotodiodeModel& pd, double p_opt_mw, double temp_c,
                                       RandomStream& rng, bool noise) {
  if (p_opt_mw < 0) throw std::domain_error("photodiode_currents: optical power must be >= 0");
  PhotodiodeCurrents c;
  c.signal_a = pd.responsivity_a_per_w * p_opt_mw * 1e-3;
  c.dark_a = pd.dark_current_25_a * std::exp(0.1 * (temp_c - 25.0));
  if (noise) {
    c.shot_a = rng.gaussian(0.0, shot_noise_sd(c.signal_a + c.dark_a, pd.bandwidth_hz));
    c.thermal_a = rng.gaussian(0.0, thermal_noise_sd(temp_c, pd.bandwidth_hz, pd.load_resistance_ohm));
  }
  c.total_a = c.signal_a + c.dark_a + c.shot_a + c.thermal_a;
  return c;
}

namespace {
// round-half-to-even (default FP rounding mode)
double round_even(double v) { return std::nearbyint(v); }
}  // namespace

int adc_read(const AdcModel& adc, double i_tot_a, double temp_c) {
  double v_in = std::max(0.0, i_tot_a * adc.tia_gain_v_per_a);
  double base = round_even(v_in / adc.v_ref_v * kAdcMaxCode);
  double inl = round_even(adc.inl_amplitude_codes *
                          std::sin(2.0 * M_PI * base / (kAdcMaxCode + 1) + adc.inl_phase));
  double off = round_even(adc.offset_drift_codes_per_degc * (temp_c - 25.0));
  double code = base + inl + off;
  return static_cast<int>(std::clamp(code, 0.0, static_cast<double>(kAdcMaxCode)));
}

SpectralChannelReading channel_measurement(const LedModel& led, const PhotodiodeModel& pd,
                                           const AdcModel& adc, double absorbance_total,
                                           const EnvOffsets& env, double temp_c,
                                           RandomStream& rng, bool noise) {
  if (absorbance_total < 0) throw std::domain_error("channel_measurement: absorbance must be >= 0");
  double transmission = std::exp(-absorbance_total);
  double p_det = led_power(led, temp_c, rng, noise) * transmission * env.coupling_factor +
                 env.ambient_power_mw;
  PhotodiodeCurrents cur = photodiode_currents(pd, std::max(0.0, p_det), temp_c, rng, noise);
  SpectralChannelReading out;
  out.code = adc_read(adc, cur.total_a, temp_c);
  out.debug_intensity = transmission;
  return out;
}

}  // namespace nirbench

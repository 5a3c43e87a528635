#pragma once

#include <cstdint>

#include "nirbench/rng.hpp"

namespace nirbench {

inline constexpr int kAdcMaxCode = 4095;  // 12-bit

struct LedModel {
  double nominal_power_mw = 5.0;
  double wavelength_nm = 850.0;
  double age_hours = 0.0;
  double flicker_sd = 0.001;
};

struct PhotodiodeModel {
  double responsivity_a_per_w = 0.5;
  double dark_current_25_a = 2e-9;
  double bandwidth_hz = 1e3;
  double load_resistance_ohm = 1e6;
};

struct AdcModel {
  double v_ref_v = 3.3;
  double tia_gain_v_per_a = 132000.0;  // default: full scale at max signal current
  double inl_amplitude_codes = 2.0;
  double offset_drift_codes_per_degc = 0.05;
  double inl_phase = 0.0;  // drawn once per device

  static AdcModel with_phase(double v_ref, double tia_gain, double inl_amplitude,
                             double offset_drift, RandomStream& device_rng);
};

struct PhotodiodeCurrents {
  double signal_a = 0.0;
  double dark_a = 0.0;
  double shot_a = 0.0;
  double thermal_a = 0.0;
  double total_a = 0.0;
};

struct SpectralChannelReading {
  int code = 0;                 // ADC word in [0, 4095]
  double debug_intensity = 0;   // noise-free Beer-Lambert transmission e^-A
};

/// P0 * (1 - 0.002 (T-25) - 0.001 t/1000 + N(0, flicker)); never negative.
double led_power(const LedModel& led, double temp_c, RandomStream& rng, bool noise);

double shot_noise_sd(double current_a, double bandwidth_hz);
double thermal_noise_sd(double temp_c, double bandwidth_hz, double load_resistance_ohm);

PhotodiodeCurrents photodiode_currents(const PhotodiodeModel& pd, double p_opt_mw, double temp_c,
                                       RandomStream& rng, bool noise);

/// Ideal transfer with round-half-to-even, plus the device INL sine and the
/// temperature offset, clamped to [0, 4095].
int adc_read(const AdcModel& adc, double i_tot_a, double temp_c);

struct EnvOffsets {
  double coupling_factor = 1.0;   // multiplies optical power on the skin path
  double ambient_power_mw = 0.0;  // leakage added at the detector
};

SpectralChannelReading channel_measurement(const LedModel& led, const PhotodiodeModel& pd,
                                           const AdcModel& adc, double absorbance_total,
                                           const EnvOffsets& env, double temp_c,
                                           RandomStream& rng, bool noise);

}  // namespace nirbench

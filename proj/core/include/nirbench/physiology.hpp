#pragma once

#include <array>
#include <vector>

#include "nirbench/config.hpp"
#include "nirbench/environment.hpp"
#include "nirbench/optics.hpp"
#include "nirbench/scaler.hpp"

namespace nirbench {

class RandomStream;

struct Subject {
  double age_years = 45.0;            // [18, 80]
  double bmi = 25.0;                  // [18, 40]
  int fitzpatrick = 3;                // I..VI as 1..6
  double melanin_fraction = 0.068;    // [0.01, 0.15], monotone in fitzpatrick
  double skin_thickness_mm = 1.5;     // [0.5, 4]
  double hydration_offset = 0.0;      // [-0.10, +0.10]
  double systolic_bp = 120.0;         // [90, 180]
  double heart_rate = 70.0;           // [50, 120]
  double resp_rate = 15.0;            // [12, 20]
  // Derived by documented linear maps of bmi and hydration:
  double baseline_perfusion = 0.0;
  double water_fraction = 0.0;
  double lipid_fraction = 0.0;

  void validate() const;
};

/// Melanin sub-band [lo, hi) for a Fitzpatrick class; the six bands tile
/// [0.01, 0.15] disjointly, so melanin is monotone in class.
std::array<double, 2> melanin_band(int fitzpatrick);

/// Documented derived-fraction formulas (linear in bmi / hydration).
void compute_derived_fractions(Subject& s);

Subject sample_subject(RandomStream& rng);
/// Fixed mid-range anatomy used when the physiology layer is disabled.
Subject reference_subject();

struct SubjectOptics {
  OpticalMedium medium;
  ChromophoreConcentrations concentrations;
};

/// Map anatomy + momentary environment to the optical medium at one
/// wavelength. The glucose concentration is supplied by the caller.
SubjectOptics subject_optics(const Subject& s, double glucose_mgdl, double perfusion_delta,
                             double wavelength_nm, const ExtinctionTable& table,
                             const PhysiologyConfig& cfg);

/// mu_s power law with the age-based collagen proxy.
double scattering_mu_s(const Subject& s, double wavelength_nm, const PhysiologyConfig& cfg);
/// detour >= 1; scattering never shortens the path.
double detour_factor(double mu_s_prime, const PhysiologyConfig& cfg);

inline constexpr int kPmfSize = 12;
const std::array<const char*, kPmfSize>& pmf_names();

/// Raw 12-entry physiological vector (last entry: environment temperature).
std::array<double, kPmfSize> pmf_raw(const Subject& s, const EnvState& env);

/// Standardized PMF vector; the scaler must be fitted (training split only).
std::vector<double> pmf_vector(const Subject& s, const EnvState& env, const StandardScaler& scaler);

}  // namespace nirbench

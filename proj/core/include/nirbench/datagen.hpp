#pragma once

#include <array>
#include <string>
#include <vector>

#include "nirbench/config.hpp"
#include "nirbench/environment.hpp"
#include "nirbench/optics.hpp"
#include "nirbench/physiology.hpp"

namespace nirbench {

enum class Split { Train = 0, Val, Test };
const char* split_name(Split s);
Split split_from_name(const std::string& name);

struct SpectralSample {
  int subject_id = 0;
  Split split = Split::Train;
  int t_min = 0;
  std::vector<int> adc_codes;            // per wavelength, [0, 4095]
  std::vector<double> debug_intensities; // noise-free e^-A per wavelength
  EnvState env;
  std::array<double, kPmfSize> pmf_raw{};
  double glucose_plasma = 0.0;
  double glucose_interstitial = 0.0;  // regression target
};

struct Dataset {
  std::vector<SpectralSample> samples;
  std::vector<Split> subject_split;      // indexed by subject_id
  std::vector<double> wavelengths_nm;
  std::vector<double> i0_reference;      // per-channel reference intensity (ADC fraction)
  std::string config_hash;

  int count_in_split(Split s) const;
  std::vector<const SpectralSample*> split_samples(Split s) const;
};

/// Subject-level split with largest-remainder rounding, deterministic in the
/// stream. Fewer subjects than nonzero splits throws std::invalid_argument.
std::vector<Split> split_subjects(int n_subjects, const std::array<double, 3>& fractions,
                                  RandomStream& rng);

/// Generate one subject's samples (anatomy, trajectory, measurements through
/// the hardware chain). Substreams are derived from the subject label only,
/// so generation is independent of subject processing order.
std::vector<SpectralSample> generate_subject_samples(const ScenarioConfig& cfg,
                                                     const ExtinctionTable& table,
                                                     const AmbientWeights& ambient, int subject_id,
                                                     Split split);

Dataset generate_dataset(const ScenarioConfig& cfg);

struct CorrelationAudit {
  std::vector<double> per_channel_rho;  // Pearson rho(glucose, -log intensity)
  double best_abs_rho = 0.0;
  int best_channel = 0;
};

/// Pearson correlation of the target against -log(code/4095) per channel.
/// Zero variance raises std::domain_error naming the degenerate series.
CorrelationAudit audit_correlation(const Dataset& d);

std::string dataset_to_csv(const Dataset& d);
Dataset dataset_from_csv(const std::string& csv);

/// JSON sidecar carrying the generating config, its hash, and the
/// per-channel reference intensities.
std::string dataset_sidecar_json(const Dataset& d, const ScenarioConfig& cfg);

}  // namespace nirbench

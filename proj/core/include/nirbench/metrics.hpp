#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nirbench {

double rmse(const std::vector<double>& pred, const std::vector<double>& ref);
/// Mean absolute relative difference, percent. ref <= 0 throws std::domain_error.
double mard(const std::vector<double>& pred, const std::vector<double>& ref);

enum class ClarkeZone { A = 0, B, C, D, E };
char clarke_zone_letter(ClarkeZone z);

/// Clarke (1987) error-grid zone of one (reference, prediction) pair; both
/// must lie in (0, 600] mg/dL. Boundary ties resolve toward the clinically
/// safer zone.
ClarkeZone clarke_zone(double ref, double pred);

/// Percent of points per zone; sums to 100.
std::array<double, 5> clarke_zone_percentages(const std::vector<double>& pred,
                                              const std::vector<double>& ref);

/// Percent of samples with |pred - ref| <= pct/100 * ref.
double within_pct(const std::vector<double>& pred, const std::vector<double>& ref,
                  double pct = 15.0);

struct BlandAltman {
  double bias = 0.0;
  double loa_low = 0.0;
  double loa_high = 0.0;
};
/// bias = mean(pred-ref), limits = bias +/- 1.96 * sample sd. Needs n >= 2.
BlandAltman bland_altman(const std::vector<double>& pred, const std::vector<double>& ref);

struct Linearity {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;
};
/// OLS of pred on ref plus Pearson r; zero ref variance throws.
Linearity linearity(const std::vector<double>& pred, const std::vector<double>& ref);

struct ModelReport {
  std::string model_id;
  double rmse_mgdl = 0.0;
  double mard_pct = 0.0;
  std::array<double, 5> clarke_zone_pct{};
  double within_15pct = 0.0;
  BlandAltman bland;
  Linearity linear;
  std::int64_t param_count = 0;
  std::int64_t feature_count = 0;       // reported beside param_count for the ridge model
  double inference_ns_per_sample = 0.0; // 0 when timing is disabled

  void validate() const;
};

ModelReport evaluate_predictions(const std::string& model_id, const std::vector<double>& pred,
                                 const std::vector<double>& ref);

std::string report_to_json(const ModelReport& r);
ModelReport report_from_json(const std::string& text);

/// Combined benchmark table (one row per model) with the standard column set.
std::string reports_to_csv(const std::vector<ModelReport>& reports);

}  // namespace nirbench

#pragma once

#include <array>
#include <string>
#include <vector>

#include "nirbench/datagen.hpp"
#include "nirbench/scaler.hpp"

namespace nirbench {

inline constexpr int kNumFeatures = 56;

/// The fixed 56-name feature enumeration (public contract; golden-file
/// tested). Requires the standard 4-channel wavelength set.
const std::vector<std::string>& feature_names();

using FeatureVector = std::array<double, kNumFeatures>;

/// Enhanced Beer-Lambert features for one sample. Channel intensities are
/// the ADC codes rescaled to [0, 1]; i0 is the per-channel reference
/// intensity shipped with the dataset. Nonpositive intensity throws
/// std::domain_error naming the channel; glucose extinction weights for the
/// PMF composite come from `table`.
FeatureVector extract_features(const SpectralSample& s, const std::vector<double>& i0,
                               const std::vector<double>& wavelengths_nm,
                               const ExtinctionTable& table);

class FeatureScaler {
 public:
  /// Strict: constant features are rejected with the feature name.
  void fit(const std::vector<FeatureVector>& rows);
  /// Pipeline variant: constant features pass through centered.
  void fit_lenient(const std::vector<FeatureVector>& rows);
  FeatureVector apply(const FeatureVector& fv) const;
  bool fitted() const { return scaler_.fitted(); }
  const StandardScaler& scaler() const { return scaler_; }
  StandardScaler& scaler() { return scaler_; }

 private:
  StandardScaler scaler_;
};

}  // namespace nirbench

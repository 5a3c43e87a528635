#include "nirbench/features.hpp"

#include <cmath>
#include <stdexcept>

#include "nirbench/hardware.hpp"

namespace nirbench {

namespace {

constexpr int kChannels = 4;
const std::array<std::pair<int, int>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// PMF composite weights of the weighted-absorbance block.
constexpr double kAlphaSkin = 1.0 / 3.0;
constexpr double kAlphaPerfusion = 1.0 / 3.0;
constexpr double kAlphaMelanin = 1.0 / 3.0;

}  // namespace

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    const std::array<int, 4> wl{850, 940, 1050, 1150};
    std::vector<std::string> n;
    for (int w : wl) n.push_back("norm_int_" + std::to_string(w));
    for (int w : wl) n.push_back("abs_" + std::to_string(w));
    for (auto [i, j] : kPairs)
      n.push_back("abs_diff_" + std::to_string(wl[i]) + "_" + std::to_string(wl[j]));
    for (int w : wl) n.push_back("abs_sq_" + std::to_string(w));
    for (auto [i, j] : kPairs)
      n.push_back("abs_prod_" + std::to_string(wl[i]) + "_" + std::to_string(wl[j]));
    for (int w : wl) n.push_back("pmf_weighted_abs_" + std::to_string(w));
    n.insert(n.end(), pmf_names().begin(), pmf_names().end());
    n.push_back("env_temp_c");
    n.push_back("env_rh_pct");
    n.push_back("env_pressure_mbar");
    n.push_back("env_log_ambient_lux");
    for (int w : wl) n.push_back("skin_abs_" + std::to_string(w));
    for (int w : wl) n.push_back("melanin_abs_" + std::to_string(w));
    for (int w : wl) n.push_back("temp_comp_abs_" + std::to_string(w));
    return n;
  }();
  return names;
}

FeatureVector extract_features(const SpectralSample& s, const std::vector<double>& i0,
                               const std::vector<double>& wavelengths_nm,
                               const ExtinctionTable& table) {
  if (s.adc_codes.size() != kChannels || i0.size() != kChannels ||
      wavelengths_nm.size() != kChannels)
    throw std::invalid_argument("extract_features: the feature contract needs 4 channels");

  std::array<double, kChannels> intensity{}, absn{};
  for (int k = 0; k < kChannels; ++k) {
    intensity[k] = s.adc_codes[k] / static_cast<double>(kAdcMaxCode);
    if (intensity[k] <= 0.0)
      throw std::domain_error("extract_features: nonpositive intensity on channel " +
                              std::to_string(static_cast<int>(wavelengths_nm[k])));
    absn[k] = std::log(i0[k] / intensity[k]);
  }

  // Glucose-extinction weights, normalized across channels (Eq.-17 style).
  std::array<double, kChannels> wg{};
  double wsum = 0.0;
  for (int k = 0; k < kChannels; ++k) {
    wg[k] = table.extinction(wavelengths_nm[k], Chromophore::Glucose);
    wsum += wg[k];
  }
  for (auto& w : wg) w /= wsum;

  const double t_skin = s.pmf_raw[3];
  const double perfusion = s.pmf_raw[8];
  const double melanin = s.pmf_raw[2];
  const double pmf_composite =
      kAlphaSkin * t_skin + kAlphaPerfusion * perfusion + kAlphaMelanin * melanin;

  FeatureVector f{};
  int p = 0;
  for (int k = 0; k < kChannels; ++k) f[p++] = intensity[k] / i0[k];
  for (int k = 0; k < kChannels; ++k) f[p++] = absn[k];
  for (auto [i, j] : kPairs) f[p++] = absn[i] - absn[j];
  for (int k = 0; k < kChannels; ++k) f[p++] = absn[k] * absn[k];
  for (auto [i, j] : kPairs) f[p++] = absn[i] * absn[j];
  for (int k = 0; k < kChannels; ++k) f[p++] = wg[k] * pmf_composite * absn[k];
  for (double v : s.pmf_raw) f[p++] = v;
  f[p++] = s.env.temp_c;
  f[p++] = s.env.rh_pct;
  f[p++] = s.env.pressure_mbar;
  f[p++] = std::log(s.env.ambient_lux);
  for (int k = 0; k < kChannels; ++k) f[p++] = t_skin * absn[k];
  for (int k = 0; k < kChannels; ++k) f[p++] = melanin * absn[k];
  for (int k = 0; k < kChannels; ++k) f[p++] = absn[k] * (1.0 + 0.002 * (s.env.temp_c - 25.0));
  if (p != kNumFeatures) throw std::logic_error("feature enumeration drifted");
  for (double v : f)
    if (!std::isfinite(v)) throw std::domain_error("extract_features: non-finite feature value");
  return f;
}

namespace {
std::vector<std::vector<double>> to_rows(const std::vector<FeatureVector>& rows) {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
  return out;
}
}  // namespace

void FeatureScaler::fit(const std::vector<FeatureVector>& rows) {
  scaler_.fit(to_rows(rows), feature_names());
}

void FeatureScaler::fit_lenient(const std::vector<FeatureVector>& rows) {
  scaler_.fit_lenient(to_rows(rows));
}

FeatureVector FeatureScaler::apply(const FeatureVector& fv) const {
  auto v = scaler_.apply(std::vector<double>(fv.begin(), fv.end()));
  FeatureVector out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

}  // namespace nirbench

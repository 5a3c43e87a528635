#include "nirbench/metrics.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nirbench/io_util.hpp"

namespace nirbench {

namespace {
void check_equal_nonempty(const std::vector<double>& pred, const std::vector<double>& ref) {
  if (pred.empty() || pred.size() != ref.size())
    throw std::invalid_argument("metrics: pred/ref must be equal-length and nonempty");
}
}  // namespace

double rmse(const std::vector<double>& pred, const std::vector<double>& ref) {
  check_equal_nonempty(pred, ref);
  double s = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double d = pred[i] - ref[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(pred.size()));
}

double mard(const std::vector<double>& pred, const std::vector<double>& ref) {
  check_equal_nonempty(pred, ref);
  double s = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (ref[i] <= 0) throw std::domain_error("mard: reference values must be > 0");
    s += std::abs(pred[i] - ref[i]) / ref[i];
  }
  return 100.0 * s / static_cast<double>(pred.size());
}

char clarke_zone_letter(ClarkeZone z) { return static_cast<char>('A' + static_cast<int>(z)); }

ClarkeZone clarke_zone(double ref, double pred) {
  if (ref <= 0 || ref > 600 || pred <= 0 || pred > 600)
    throw std::domain_error("clarke_zone: values must lie in (0, 600] mg/dL");
  // 1987 grid geometry as explicit piecewise regions, checked in clinical
  // safety order so shared boundaries land in the safer zone.
  if (std::abs(pred - ref) <= 0.2 * ref || (ref <= 70 && pred <= 70)) return ClarkeZone::A;
  if ((ref >= 70 && ref <= 290 && pred > ref + 110) ||
      (ref >= 130 && ref <= 180 && pred < 1.4 * ref - 182))
    return ClarkeZone::C;
  constexpr double kDLow = 175.0 / 3.0;
  if ((ref <= kDLow && pred >= 70 && pred <= 180) ||
      (ref >= kDLow && ref <= 70 && pred >= 1.2 * ref && pred <= 180) ||
      (ref >= 240 && pred >= 70 && pred < 180))
    return ClarkeZone::D;
  if ((ref <= 70 && pred >= 180) || (ref >= 180 && pred < 70)) return ClarkeZone::E;
  return ClarkeZone::B;
}

std::array<double, 5> clarke_zone_percentages(const std::vector<double>& pred,
                                              const std::vector<double>& ref) {
  check_equal_nonempty(pred, ref);
  std::array<std::int64_t, 5> counts{};
  for (std::size_t i = 0; i < pred.size(); ++i)
    counts[static_cast<int>(clarke_zone(ref[i], pred[i]))]++;
  std::array<double, 5> pct{};
  for (int z = 0; z < 5; ++z)
    pct[z] = 100.0 * static_cast<double>(counts[z]) / static_cast<double>(pred.size());
  return pct;
}

double within_pct(const std::vector<double>& pred, const std::vector<double>& ref, double pct) {
  check_equal_nonempty(pred, ref);
  std::size_t n = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (ref[i] <= 0) throw std::domain_error("within_pct: reference values must be > 0");
    n += std::abs(pred[i] - ref[i]) <= pct / 100.0 * ref[i];
  }
  return 100.0 * static_cast<double>(n) / static_cast<double>(pred.size());
}

BlandAltman bland_altman(const std::vector<double>& pred, const std::vector<double>& ref) {
  check_equal_nonempty(pred, ref);
  if (pred.size() < 2) throw std::invalid_argument("bland_altman: need n >= 2");
  std::vector<double> d(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) d[i] = pred[i] - ref[i];
  double bias = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  double var = 0;
  for (double v : d) var += (v - bias) * (v - bias);
  double sd = std::sqrt(var / static_cast<double>(d.size() - 1));
  return {bias, bias - 1.96 * sd, bias + 1.96 * sd};
}

Linearity linearity(const std::vector<double>& pred, const std::vector<double>& ref) {
  check_equal_nonempty(pred, ref);
  double n = static_cast<double>(pred.size());
  double mx = std::accumulate(ref.begin(), ref.end(), 0.0) / n;
  double my = std::accumulate(pred.begin(), pred.end(), 0.0) / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double dx = ref[i] - mx, dy = pred[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0) throw std::domain_error("linearity: zero variance in reference");
  Linearity out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r = syy > 0 ? sxy / std::sqrt(sxx * syy) : 1.0;
  return out;
}

void ModelReport::validate() const {
  double sum = 0;
  for (double z : clarke_zone_pct) sum += z;
  if (std::abs(sum - 100.0) > 1e-9)
    throw std::logic_error("model report: clarke fractions must sum to 100%");
  if (!(bland.loa_low <= bland.bias && bland.bias <= bland.loa_high))
    throw std::logic_error("model report: limits of agreement must bracket the bias");
}

ModelReport evaluate_predictions(const std::string& model_id, const std::vector<double>& pred,
                                 const std::vector<double>& ref) {
  ModelReport r;
  r.model_id = model_id;
  r.rmse_mgdl = rmse(pred, ref);
  r.mard_pct = mard(pred, ref);
  r.clarke_zone_pct = clarke_zone_percentages(pred, ref);
  r.within_15pct = within_pct(pred, ref, 15.0);
  r.bland = bland_altman(pred, ref);
  r.linear = linearity(pred, ref);
  r.validate();
  return r;
}

std::string report_to_json(const ModelReport& r) {
  nlohmann::ordered_json j;
  j["model_id"] = r.model_id;
  j["rmse_mgdl"] = r.rmse_mgdl;
  j["mard_pct"] = r.mard_pct;
  j["clarke_zone_pct"] = {{"A", r.clarke_zone_pct[0]},
                          {"B", r.clarke_zone_pct[1]},
                          {"C", r.clarke_zone_pct[2]},
                          {"D", r.clarke_zone_pct[3]},
                          {"E", r.clarke_zone_pct[4]}};
  j["within_15pct"] = r.within_15pct;
  j["bland_altman"] = {{"bias", r.bland.bias}, {"loa_low", r.bland.loa_low}, {"loa_high", r.bland.loa_high}};
  j["linearity"] = {{"slope", r.linear.slope}, {"intercept", r.linear.intercept}, {"r", r.linear.r}};
  j["param_count"] = r.param_count;
  j["feature_count"] = r.feature_count;
  j["inference_ns_per_sample"] = r.inference_ns_per_sample;
  return j.dump(2) + "\n";
}

ModelReport report_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  ModelReport r;
  r.model_id = j.at("model_id").get<std::string>();
  r.rmse_mgdl = j.at("rmse_mgdl").get<double>();
  r.mard_pct = j.at("mard_pct").get<double>();
  const char* keys = "ABCDE";
  for (int z = 0; z < 5; ++z)
    r.clarke_zone_pct[z] = j.at("clarke_zone_pct").at(std::string(1, keys[z])).get<double>();
  r.within_15pct = j.at("within_15pct").get<double>();
  r.bland.bias = j.at("bland_altman").at("bias").get<double>();
  r.bland.loa_low = j.at("bland_altman").at("loa_low").get<double>();
  r.bland.loa_high = j.at("bland_altman").at("loa_high").get<double>();
  r.linear.slope = j.at("linearity").at("slope").get<double>();
  r.linear.intercept = j.at("linearity").at("intercept").get<double>();
  r.linear.r = j.at("linearity").at("r").get<double>();
  r.param_count = j.at("param_count").get<std::int64_t>();
  r.feature_count = j.at("feature_count").get<std::int64_t>();
  r.inference_ns_per_sample = j.at("inference_ns_per_sample").get<double>();
  return r;
}

std::string reports_to_csv(const std::vector<ModelReport>& reports) {
  std::ostringstream os;
  os << "model,rmse_mgdl,mard_pct,clarke_a_pct,within_15pct,param_count,inference_ms\n";
  for (const auto& r : reports) {
    os << r.model_id << "," << fmt_double(r.rmse_mgdl) << "," << fmt_double(r.mard_pct) << ","
       << fmt_double(r.clarke_zone_pct[0]) << "," << fmt_double(r.within_15pct) << ","
       << r.param_count << "," << fmt_double(r.inference_ns_per_sample / 1e6) << "\n";
  }
  return os.str();
}

}  // namespace nirbench

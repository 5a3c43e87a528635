#include "nirbench/scaler.hpp"

#include <cmath>
#include <stdexcept>

namespace nirbench {

void StandardScaler::fit_impl(const std::vector<std::vector<double>>& rows,
                              const std::vector<std::string>& names, bool lenient) {
  if (rows.size() < 2) throw std::invalid_argument("scaler fit: need at least 2 rows");
  const std::size_t cols = rows[0].size();
  mean_.assign(cols, 0.0);
  sd_.assign(cols, 0.0);
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("scaler fit: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) mean_[j] += r[j];
  }
  for (std::size_t j = 0; j < cols; ++j) mean_[j] /= static_cast<double>(rows.size());
  for (const auto& r : rows)
    for (std::size_t j = 0; j < cols; ++j) {
      double d = r[j] - mean_[j];
      sd_[j] += d * d;
    }
  for (std::size_t j = 0; j < cols; ++j) {
    sd_[j] = std::sqrt(sd_[j] / static_cast<double>(rows.size()));
    double tol = 1e-12 * (std::abs(mean_[j]) + 1.0);
    if (sd_[j] <= tol) {
      if (!lenient) {
        std::string label = j < names.size() ? names[j] : ("column " + std::to_string(j));
        mean_.clear();
        sd_.clear();
        throw std::invalid_argument("scaler fit: constant feature '" + label + "'");
      }
      sd_[j] = 1.0;
    }
  }
}

void StandardScaler::fit(const std::vector<std::vector<double>>& rows,
                         const std::vector<std::string>& names) {
  fit_impl(rows, names, false);
}

void StandardScaler::fit_lenient(const std::vector<std::vector<double>>& rows) {
  fit_impl(rows, {}, true);
}

std::vector<double> StandardScaler::apply(const std::vector<double>& row) const {
  std::vector<double> out = row;
  apply_in_place(out);
  return out;
}

void StandardScaler::apply_in_place(std::vector<double>& row) const {
  if (!fitted()) throw std::logic_error("scaler apply: not fitted");
  if (row.size() != mean_.size()) throw std::invalid_argument("scaler apply: size mismatch");
  for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - mean_[j]) / sd_[j];
}

void StandardScaler::set(std::vector<double> mean, std::vector<double> sd) {
  if (mean.size() != sd.size()) throw std::invalid_argument("scaler set: size mismatch");
  mean_ = std::move(mean);
  sd_ = std::move(sd);
}

}  // namespace nirbench

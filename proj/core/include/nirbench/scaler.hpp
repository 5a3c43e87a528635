#pragma once

#include <string>
#include <vector>

namespace nirbench {

/// Column-wise standardization fitted on training data only.
class StandardScaler {
 public:
  /// Strict fit: a constant column throws std::invalid_argument naming the
  /// column (via `names` when provided). Needs >= 2 rows.
  void fit(const std::vector<std::vector<double>>& rows,
           const std::vector<std::string>& names = {});

  /// Constant columns are centered and passed through with unit scale
  /// instead of being rejected; used by the model pipelines so reduced-noise
  /// datasets (where some inputs are constant) remain trainable.
  void fit_lenient(const std::vector<std::vector<double>>& rows);

  std::vector<double> apply(const std::vector<double>& row) const;
  void apply_in_place(std::vector<double>& row) const;

  bool fitted() const { return !mean_.empty(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return sd_; }
  void set(std::vector<double> mean, std::vector<double> sd);

 private:
  void fit_impl(const std::vector<std::vector<double>>& rows,
                const std::vector<std::string>& names, bool lenient);
  std::vector<double> mean_;
  std::vector<double> sd_;
};

}  // namespace nirbench

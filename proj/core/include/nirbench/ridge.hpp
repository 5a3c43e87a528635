#pragma once

#include <string>
#include <vector>

namespace nirbench {

/// Closed-form ridge regression; bias handled by centering, not penalized.
class RidgeModel {
 public:
  /// w = (Xc' Xc + lambda I)^-1 Xc' (y - ybar) on the centered system,
  /// solved by Cholesky with a column-pivoted QR fallback. Non-finite
  /// solutions throw std::runtime_error advising lambda > 0.
  static RidgeModel fit(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                        double lambda);

  std::vector<double> predict(const std::vector<std::vector<double>>& x) const;
  double predict_one(const std::vector<double>& row) const;

  bool fitted() const { return fitted_; }
  double lambda() const { return lambda_; }
  /// Intercept of y = x.w + b (training-column centering folded in).
  double bias() const { return bias_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight_norm() const;

  std::string to_json() const;
  static RidgeModel from_json(const std::string& text);

 private:
  bool fitted_ = false;
  double lambda_ = 0.0;
  double bias_ = 0.0;
  std::vector<double> weights_;
};

/// Smallest validation RMSE wins; exact ties resolve toward the larger
/// lambda. The grid must be nonempty.
double select_lambda(const std::vector<std::vector<double>>& x_train,
                     const std::vector<double>& y_train,
                     const std::vector<std::vector<double>>& x_val,
                     const std::vector<double>& y_val, const std::vector<double>& grid);

}  // namespace nirbench

#include "nirbench/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

#include "nirbench/metrics.hpp"

namespace nirbench {

RidgeModel RidgeModel::fit(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                           double lambda) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("ridge fit: need at least 2 rows");
  if (y.size() != n) throw std::invalid_argument("ridge fit: x/y size mismatch");
  if (lambda < 0) throw std::invalid_argument("ridge fit: lambda must be >= 0");
  const std::size_t p = x[0].size();

  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != p) throw std::invalid_argument("ridge fit: ragged rows");
    for (std::size_t j = 0; j < p; ++j) X(i, j) = x[i][j];
    Y(i) = y[i];
  }
  Eigen::RowVectorXd xbar = X.colwise().mean();
  double ybar = Y.mean();
  Eigen::MatrixXd Xc = X.rowwise() - xbar;
  Eigen::VectorXd Yc = Y.array() - ybar;

  Eigen::MatrixXd A = Xc.transpose() * Xc;
  A.diagonal().array() += lambda;
  Eigen::VectorXd rhs = Xc.transpose() * Yc;

  Eigen::VectorXd w;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (lambda > 0 && llt.info() == Eigen::Success) {
    w = llt.solve(rhs);
  } else {
    // Rank-revealing fallback; for a zero centered system this yields w = 0.
    w = A.colPivHouseholderQr().solve(rhs);
  }
  if (!w.allFinite())
    throw std::runtime_error("ridge fit: singular system; retry with lambda > 0");

  RidgeModel m;
  m.fitted_ = true;
  m.lambda_ = lambda;
  m.weights_.assign(w.data(), w.data() + w.size());
  m.bias_ = ybar - xbar.dot(w);
  return m;
}

double RidgeModel::predict_one(const std::vector<double>& row) const {
  if (!fitted_) throw std::logic_error("ridge predict: model not fitted");
  if (row.size() != weights_.size())
    throw std::invalid_argument("ridge predict: feature count mismatch");
  double acc = bias_;
  for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * weights_[j];
  return acc;
}

std::vector<double> RidgeModel::predict(const std::vector<std::vector<double>>& x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict_one(row));
  return out;
}

double RidgeModel::weight_norm() const {
  double s = 0;
  for (double w : weights_) s += w * w;
  return std::sqrt(s);
}

std::string RidgeModel::to_json() const {
  nlohmann::ordered_json j;
  j["lambda"] = lambda_;
  j["bias"] = bias_;
  j["weights"] = weights_;
  return j.dump(2);
}

RidgeModel RidgeModel::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  RidgeModel m;
  m.fitted_ = true;
  m.lambda_ = j.at("lambda").get<double>();
  m.bias_ = j.at("bias").get<double>();
  m.weights_ = j.at("weights").get<std::vector<double>>();
  return m;
}

double select_lambda(const std::vector<std::vector<double>>& x_train,
                     const std::vector<double>& y_train,
                     const std::vector<std::vector<double>>& x_val,
                     const std::vector<double>& y_val, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("select_lambda: empty grid");
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  double best_lambda = sorted.front();
  double best_rmse = std::numeric_limits<double>::infinity();
  for (double lam : sorted) {
    auto m = RidgeModel::fit(x_train, y_train, lam);
    double r = rmse(m.predict(x_val), y_val);
    if (r <= best_rmse) {  // ties go to the larger lambda
      best_rmse = r;
      best_lambda = lam;
    }
  }
  return best_lambda;
}

}  // namespace nirbench

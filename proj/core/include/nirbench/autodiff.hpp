#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nirbench::nn {

/// Dense row-major matrix; vectors are 1 x n or n x 1.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, fill) {}
  double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
  std::size_t size() const { return v.size(); }
};

/// Reverse-mode tape over Tensor-valued nodes. A fresh tape is built per
/// loss evaluation; backward() accumulates into per-node gradients (same
/// shape as the value).
class Tape {
 public:
  using Id = int;

  Id input(Tensor t);

  Id matmul(Id a, Id b);
  Id add(Id a, Id b);                 // same shape
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);                 // elementwise, same shape
  Id add_rowvec(Id a, Id row);        // broadcast 1 x c over rows
  Id mul_rowvec(Id a, Id row);        // broadcast multiply
  Id relu(Id a);
  Id square(Id a);
  Id scale(Id a, double k);
  Id add_const(Id a, double k);
  Id mean_all(Id a);                  // 1x1
  Id sum_all(Id a);                   // 1x1
  Id concat_cols(Id a, Id b);
  Id softmax_rows(Id a);              // softmax across each row

  const Tensor& value(Id id) const { return nodes_[check(id)].val; }
  const Tensor& grad(Id id) const { return nodes_[check(id)].grad; }

  /// Seed d(node)/d(node) = 1 on a 1x1 node and run the reverse sweep.
  /// Gradients accumulate; call zero_grad() between backward passes on the
  /// same tape.
  void backward(Id loss);
  void zero_grad();

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor val;
    Tensor grad;
    std::function<void()> back;  // may be empty for inputs
  };
  std::vector<Node> nodes_;

  Id check(Id id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
      throw std::out_of_range("tape: bad node id");
    return id;
  }
  Id push(Tensor val, std::function<void()> back);
};

}  // namespace nirbench::nn

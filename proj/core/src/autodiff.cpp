#include "nirbench/autodiff.hpp"

#include <algorithm>
#include <cmath>

namespace nirbench::nn {

Tape::Id Tape::push(Tensor val, std::function<void()> back) {
  Node n;
  n.grad = Tensor(val.rows, val.cols);
  n.val = std::move(val);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::input(Tensor t) { return push(std::move(t), {}); }

Tape::Id Tape::matmul(Id a, Id b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.cols != B.rows) throw std::invalid_argument("matmul: inner dimensions differ");
  Tensor C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      double aik = A.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
    }
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, b, out] {
    const Tensor& G = nodes_[out].grad;
    const Tensor& A2 = nodes_[a].val;
    const Tensor& B2 = nodes_[b].val;
    Tensor& GA = nodes_[a].grad;
    Tensor& GB = nodes_[b].grad;
    // dA = G B^T ; dB = A^T G
    for (int i = 0; i < A2.rows; ++i)
      for (int j = 0; j < B2.cols; ++j) {
        double g = G.at(i, j);
        if (g == 0.0) continue;
        for (int k = 0; k < A2.cols; ++k) {
          GA.at(i, k) += g * B2.at(k, j);
          GB.at(k, j) += A2.at(i, k) * g;
        }
      }
  };
  return out;
}

Tape::Id Tape::add(Id a, Id b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("add: shape mismatch");
  Tensor C = A;
  for (std::size_t i = 0; i < C.size(); ++i) C.v[i] += B.v[i];
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, b, out] {
    for (std::size_t i = 0; i < nodes_[out].grad.size(); ++i) {
      nodes_[a].grad.v[i] += nodes_[out].grad.v[i];
      nodes_[b].grad.v[i] += nodes_[out].grad.v[i];
    }
  };
  return out;
}

Tape::Id Tape::sub(Id a, Id b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("sub: shape mismatch");
  Tensor C = A;
  for (std::size_t i = 0; i < C.size(); ++i) C.v[i] -= B.v[i];
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, b, out] {
    for (std::size_t i = 0; i < nodes_[out].grad.size(); ++i) {
      nodes_[a].grad.v[i] += nodes_[out].grad.v[i];
      nodes_[b].grad.v[i] -= nodes_[out].grad.v[i];
    }
  };
  return out;
}

Tape::Id Tape::mul(Id a, Id b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("mul: shape mismatch");
  Tensor C = A;
  for (std::size_t i = 0; i < C.size(); ++i) C.v[i] *= B.v[i];
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, b, out] {
    for (std::size_t i = 0; i < nodes_[out].grad.size(); ++i) {
      nodes_[a].grad.v[i] += nodes_[out].grad.v[i] * nodes_[b].val.v[i];
      nodes_[b].grad.v[i] += nodes_[out].grad.v[i] * nodes_[a].val.v[i];
    }
  };
  return out;
}

Tape::Id Tape::add_rowvec(Id a, Id row) {
  const Tensor& A = value(a);
  const Tensor& R = value(row);
  if (R.rows != 1 || R.cols != A.cols) throw std::invalid_argument("add_rowvec: shape mismatch");
  Tensor C = A;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) += R.at(0, j);
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, row, out] {
    const Tensor& G = nodes_[out].grad;
    for (int i = 0; i < G.rows; ++i)
      for (int j = 0; j < G.cols; ++j) {
        nodes_[a].grad.at(i, j) += G.at(i, j);
        nodes_[row].grad.at(0, j) += G.at(i, j);
      }
  };
  return out;
}

Tape::Id Tape::mul_rowvec(Id a, Id row) {
  const Tensor& A = value(a);
  const Tensor& R = value(row);
  if (R.rows != 1 || R.cols != A.cols) throw std::invalid_argument("mul_rowvec: shape mismatch");
  Tensor C = A;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) *= R.at(0, j);
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, row, out] {
    const Tensor& G = nodes_[out].grad;
    for (int i = 0; i < G.rows; ++i)
      for (int j = 0; j < G.cols; ++j) {
        nodes_[a].grad.at(i, j) += G.at(i, j) * nodes_[row].val.at(0, j);
        nodes_[row].grad.at(0, j) += G.at(i, j) * nodes_[a].val.at(i, j);
      }
  };
  return out;
}

Tape::Id Tape::relu(Id a) {
  Tensor C = value(a);
  for (auto& x : C.v) x = std::max(0.0, x);
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, out] {
    for (std::size_t i = 0; i < nodes_[out].grad.size(); ++i)
      if (nodes_[a].val.v[i] > 0) nodes_[a].grad.v[i] += nodes_[out].grad.v[i];
  };
  return out;
}

Tape::Id Tape::square(Id a) {
  Tensor C = value(a);
  for (auto& x : C.v) x *= x;
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, out] {
    for (std::size_t i = 0; i < nodes_[out].grad.size(); ++i)
      nodes_[a].grad.v[i] += 2.0 * nodes_[a].val.v[i] * nodes_[out].grad.v[i];
  };
  return out;
}

Tape::Id Tape::scale(Id a, double k) {
  Tensor C = value(a);
  for (auto& x : C.v) x *= k;
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, out, k] {
    for (std::size_t i = 0; i < nodes_[out].grad.size(); ++i)
      nodes_[a].grad.v[i] += k * nodes_[out].grad.v[i];
  };
  return out;
}

Tape::Id Tape::add_const(Id a, double k) {
  Tensor C = value(a);
  for (auto& x : C.v) x += k;
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, out] {
    for (std::size_t i = 0; i < nodes_[out].grad.size(); ++i)
      nodes_[a].grad.v[i] += nodes_[out].grad.v[i];
  };
  return out;
}

Tape::Id Tape::mean_all(Id a) {
  const Tensor& A = value(a);
  if (A.size() == 0) throw std::invalid_argument("mean_all: empty tensor");
  Tensor C(1, 1);
  for (double x : A.v) C.v[0] += x;
  C.v[0] /= static_cast<double>(A.size());
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, out] {
    double g = nodes_[out].grad.v[0] / static_cast<double>(nodes_[a].val.size());
    for (auto& x : nodes_[a].grad.v) x += g;
  };
  return out;
}

Tape::Id Tape::sum_all(Id a) {
  const Tensor& A = value(a);
  Tensor C(1, 1);
  for (double x : A.v) C.v[0] += x;
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, out] {
    double g = nodes_[out].grad.v[0];
    for (auto& x : nodes_[a].grad.v) x += g;
  };
  return out;
}

Tape::Id Tape::concat_cols(Id a, Id b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.rows != B.rows) throw std::invalid_argument("concat_cols: row mismatch");
  Tensor C(A.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
  }
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, b, out] {
    const Tensor& G = nodes_[out].grad;
    Tensor& GA = nodes_[a].grad;
    Tensor& GB = nodes_[b].grad;
    for (int i = 0; i < GA.rows; ++i) {
      for (int j = 0; j < GA.cols; ++j) GA.at(i, j) += G.at(i, j);
      for (int j = 0; j < GB.cols; ++j) GB.at(i, j) += G.at(i, GA.cols + j);
    }
  };
  return out;
}

Tape::Id Tape::softmax_rows(Id a) {
  Tensor C = value(a);
  for (int i = 0; i < C.rows; ++i) {
    double mx = C.at(i, 0);
    for (int j = 1; j < C.cols; ++j) mx = std::max(mx, C.at(i, j));
    double sum = 0;
    for (int j = 0; j < C.cols; ++j) {
      C.at(i, j) = std::exp(C.at(i, j) - mx);
      sum += C.at(i, j);
    }
    for (int j = 0; j < C.cols; ++j) C.at(i, j) /= sum;
  }
  Id out = push(std::move(C), {});
  nodes_[out].back = [this, a, out] {
    const Tensor& Y = nodes_[out].val;
    const Tensor& G = nodes_[out].grad;
    for (int i = 0; i < Y.rows; ++i) {
      double dot = 0;
      for (int j = 0; j < Y.cols; ++j) dot += G.at(i, j) * Y.at(i, j);
      for (int j = 0; j < Y.cols; ++j)
        nodes_[a].grad.at(i, j) += Y.at(i, j) * (G.at(i, j) - dot);
    }
  };
  return out;
}

void Tape::backward(Id loss) {
  const Tensor& L = value(loss);
  if (L.rows != 1 || L.cols != 1) throw std::invalid_argument("backward: loss must be 1x1");
  nodes_[loss].grad.v[0] += 1.0;
  for (Id id = loss; id >= 0; --id)
    if (nodes_[id].back) nodes_[id].back();
}

void Tape::zero_grad() {
  for (auto& n : nodes_) std::fill(n.grad.v.begin(), n.grad.v.end(), 0.0);
}

}  // namespace nirbench::nn

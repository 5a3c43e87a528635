#include "nirbench/train.hpp"

#include <algorithm>
#include <cmath>

#include "nirbench/io_util.hpp"
#include "nirbench/rng.hpp"

namespace nirbench::nn {

namespace {

Tensor to_tensor(const std::vector<std::vector<double>>& rows, int cols) {
  Tensor t(static_cast<int>(rows.size()), cols);
  for (int i = 0; i < t.rows; ++i) {
    if (rows[i].size() != static_cast<std::size_t>(cols))
      throw std::invalid_argument("batch row width mismatch");
    for (int j = 0; j < cols; ++j) t.at(i, j) = rows[i][j];
  }
  return t;
}

Tensor to_col(const std::vector<double>& v) {
  Tensor t(static_cast<int>(v.size()), 1);
  t.v = v;
  return t;
}

bool has_loss(const NetworkSpec& spec, PhysicsLoss l) {
  return std::find(spec.physics.begin(), spec.physics.end(), l) != spec.physics.end();
}

struct GraphLoss {
  Tape::Id data;
  std::optional<Tape::Id> physics;
  Tape::Id total;
};

GraphLoss build_loss_graph(Tape& t, const NetworkSpec& spec, const std::vector<Tape::Id>& pids,
                           const TrainBatch& batch, const PhysicsContext& ctx,
                           double lambda_physics) {
  Tape::Id nir = t.input(to_tensor(batch.nir, 4));
  Tape::Id pmf = t.input(to_tensor(batch.pmf, 12));
  auto fwd = forward(t, spec, pids, nir, pmf);
  Tape::Id target = t.input(to_col(batch.target_mgdl));

  GraphLoss out{};
  out.data = loss_data(t, fwd.prediction, target);
  std::optional<Tape::Id> phys;
  auto accumulate = [&](Tape::Id term) { phys = phys ? t.add(*phys, term) : term; };
  if (has_loss(spec, PhysicsLoss::BeerLambert))
    accumulate(loss_beer_lambert(t, fwd.prediction, ctx.absorbance, ctx.eps_row));
  if (has_loss(spec, PhysicsLoss::Rte)) accumulate(loss_rte(t, fwd.prediction, ctx.rte));
  if (has_loss(spec, PhysicsLoss::Conservation))
    accumulate(loss_conservation(t, fwd.prediction, ctx.diff_op));
  out.physics = phys;
  out.total = phys ? t.add(out.data, t.scale(*phys, lambda_physics)) : out.data;
  return out;
}

double grad_norm(const Tape& t, const std::vector<Tape::Id>& pids) {
  double s = 0;
  for (auto id : pids)
    for (double g : t.grad(id).v) s += g * g;
  return std::sqrt(s);
}

}  // namespace

PhysicsContext PhysicsContext::build(const NetworkSpec& spec, const TrainBatch& batch,
                                     const std::vector<double>& i0,
                                     const std::vector<double>& wavelengths_nm,
                                     const ExtinctionTable& table) {
  PhysicsContext ctx;
  ctx.absorbance = absorbance_matrix(batch.raw_intensity, i0);
  ctx.eps_row = Tensor(1, static_cast<int>(wavelengths_nm.size()));
  for (std::size_t k = 0; k < wavelengths_nm.size(); ++k)
    ctx.eps_row.v[k] = table.extinction(wavelengths_nm[k], Chromophore::Glucose);
  if (has_loss(spec, PhysicsLoss::Rte)) {
    std::vector<std::vector<double>> arows(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i)
      for (std::size_t k = 0; k < wavelengths_nm.size(); ++k)
        arows[i].push_back(ctx.absorbance.at(static_cast<int>(i), static_cast<int>(k)));
    RteLossConfig rcfg;
    ctx.rte = precompute_rte_terms(arows, wavelengths_nm, spec.rte_wavelengths_nm, table, rcfg);
  }
  if (has_loss(spec, PhysicsLoss::Conservation))
    ctx.diff_op = conservation_diff_op(batch.subject_ids, batch.t_min);
  return ctx;
}

double eval_composite_loss(const NetworkSpec& spec, const std::vector<Tensor>& params,
                           const TrainBatch& batch, const PhysicsContext& ctx,
                           double lambda_physics) {
  auto pred = forward_eval(spec, params, batch.nir, batch.pmf);
  const std::size_t n = pred.size();
  double data = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = pred[i] - batch.target_mgdl[i];
    data += d * d;
  }
  data /= static_cast<double>(n);

  double phys = 0;
  bool any = false;
  if (has_loss(spec, PhysicsLoss::BeerLambert)) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (int k = 0; k < ctx.absorbance.cols; ++k) {
        double r = ctx.absorbance.at(static_cast<int>(i), k) - ctx.eps_row.v[k] * pred[i];
        s += r * r;
      }
    phys += s / (static_cast<double>(n) * ctx.absorbance.cols);
    any = true;
  }
  if (has_loss(spec, PhysicsLoss::Rte)) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      s += ctx.rte.a[i] * pred[i] * pred[i] + ctx.rte.b[i] * pred[i] + ctx.rte.k[i];
    phys += s / static_cast<double>(n);
    any = true;
  }
  if (has_loss(spec, PhysicsLoss::Conservation)) {
    if (ctx.diff_op.rows > 0) {
      double s = 0;
      for (int r = 0; r < ctx.diff_op.rows; ++r) {
        double acc = 0;
        for (int c = 0; c < ctx.diff_op.cols; ++c) acc += ctx.diff_op.at(r, c) * pred[c];
        s += acc * acc;
      }
      phys += s / static_cast<double>(ctx.diff_op.rows);
    }
    any = true;
  }
  return any ? data + lambda_physics * phys : data;
}

LossBreakdown composite_loss_gradients(const NetworkSpec& spec, const std::vector<Tensor>& params,
                                       const TrainBatch& batch, const PhysicsContext& ctx,
                                       double lambda_physics, std::vector<Tensor>& grads_out) {
  Tape t;
  std::vector<Tape::Id> pids;
  pids.reserve(params.size());
  for (const auto& p : params) pids.push_back(t.input(p));
  auto loss = build_loss_graph(t, spec, pids, batch, ctx, lambda_physics);
  t.backward(loss.total);
  grads_out.clear();
  for (auto id : pids) grads_out.push_back(t.grad(id));
  LossBreakdown out;
  out.data = t.value(loss.data).v[0];
  out.physics = loss.physics ? t.value(*loss.physics).v[0] : 0.0;
  out.total = t.value(loss.total).v[0];
  return out;
}

TrainState train(const NetworkSpec& spec, const TrainBatch& train_batch,
                 const TrainBatch& val_batch, const ModelHyper& hyper,
                 const std::vector<double>& i0, const std::vector<double>& wavelengths_nm,
                 const ExtinctionTable& table, RandomStream& rng) {
  if (train_batch.size() == 0 || val_batch.size() == 0)
    throw std::invalid_argument("train: empty split");

  PhysicsContext ctx = PhysicsContext::build(spec, train_batch, i0, wavelengths_nm, table);

  TrainState st;
  st.params = init_params(spec, rng);
  st.lambda_physics = hyper.lambda_physics;

  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  std::vector<Tensor> m, v;
  for (const auto& p : st.params) {
    m.emplace_back(p.rows, p.cols);
    v.emplace_back(p.rows, p.cols);
  }

  std::vector<Tensor> best_params = st.params;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  double ema_ratio = 1.0;
  bool ema_started = false;

  for (int epoch = 1; epoch <= hyper.max_epochs; ++epoch) {
    Tape t;
    std::vector<Tape::Id> pids;
    pids.reserve(st.params.size());
    for (const auto& p : st.params) pids.push_back(t.input(p));
    auto loss = build_loss_graph(t, spec, pids, train_batch, ctx, st.lambda_physics);

    double train_data = t.value(loss.data).v[0];
    double train_phys = loss.physics ? t.value(*loss.physics).v[0] : 0.0;
    if (!std::isfinite(train_data) || !std::isfinite(train_phys))
      throw TrainingError("training diverged (non-finite loss)", epoch);

    bool balance = loss.physics && hyper.balance_every > 0 && epoch % hyper.balance_every == 0;
    if (balance) {
      t.backward(loss.data);
      double gd = grad_norm(t, pids);
      t.zero_grad();
      t.backward(*loss.physics);
      double gp = grad_norm(t, pids);
      t.zero_grad();
      if (gp > 0 && gd > 0) {
        double ratio = gd / gp;
        ema_ratio = ema_started ? hyper.ema_decay * ema_ratio + (1.0 - hyper.ema_decay) * ratio
                                : ratio;
        ema_started = true;
        st.lambda_physics = std::clamp(st.lambda_physics * ema_ratio, 1e-4, 10.0);
      }
    }

    t.backward(loss.total);

    double bc1 = 1.0 - std::pow(kBeta1, epoch);
    double bc2 = 1.0 - std::pow(kBeta2, epoch);
    for (std::size_t p = 0; p < st.params.size(); ++p) {
      const Tensor& g = t.grad(pids[p]);
      for (std::size_t k = 0; k < g.size(); ++k) {
        m[p].v[k] = kBeta1 * m[p].v[k] + (1.0 - kBeta1) * g.v[k];
        v[p].v[k] = kBeta2 * v[p].v[k] + (1.0 - kBeta2) * g.v[k] * g.v[k];
        double step = hyper.learning_rate * (m[p].v[k] / bc1) / (std::sqrt(v[p].v[k] / bc2) + kEps);
        st.params[p].v[k] -= step;
        if (!std::isfinite(st.params[p].v[k]))
          throw TrainingError("training diverged (non-finite parameter)", epoch);
      }
    }

    // Validation data loss with the updated parameters.
    auto val_pred = forward_eval(spec, st.params, val_batch.nir, val_batch.pmf);
    double val_data = 0;
    for (std::size_t i = 0; i < val_pred.size(); ++i) {
      double d = val_pred[i] - val_batch.target_mgdl[i];
      val_data += d * d;
    }
    val_data /= static_cast<double>(val_pred.size());
    if (!std::isfinite(val_data)) throw TrainingError("training diverged (non-finite val loss)", epoch);

    st.history.push_back({epoch, train_data, train_phys, val_data, st.lambda_physics});
    st.epochs_run = epoch;
    if (val_data < best_val) {
      best_val = val_data;
      best_epoch = epoch;
      best_params = st.params;
    }
    if (epoch - best_epoch >= hyper.patience) break;
  }

  st.params = std::move(best_params);
  st.best_val_loss = best_val;
  st.best_epoch = best_epoch;
  return st;
}

std::string history_to_csv(const std::vector<EpochRow>& history) {
  std::string out = "epoch,train_data,train_phys,val_data,lambda_phys\n";
  for (const auto& r : history)
    out += std::to_string(r.epoch) + "," + fmt_double(r.train_data) + "," +
           fmt_double(r.train_phys) + "," + fmt_double(r.val_data) + "," +
           fmt_double(r.lambda_phys) + "\n";
  return out;
}

}  // namespace nirbench::nn

#pragma once

#include <string>
#include <vector>

#include "nirbench/config.hpp"
#include "nirbench/losses.hpp"
#include "nirbench/networks.hpp"
#include "nirbench/optics.hpp"

namespace nirbench::nn {

struct TrainBatch {
  std::vector<std::vector<double>> nir;            // standardized intensities, n x 4
  std::vector<std::vector<double>> pmf;            // standardized PMF, n x 12
  std::vector<double> target_mgdl;
  std::vector<std::vector<double>> raw_intensity;  // ADC fraction, n x 4 (physics losses)
  std::vector<int> subject_ids;
  std::vector<int> t_min;

  std::size_t size() const { return target_mgdl.size(); }
};

/// Physics-loss inputs shared across epochs (all plain data).
struct PhysicsContext {
  Tensor absorbance;   // n x 4, ln(I0/I)
  Tensor eps_row;      // 1 x 4 glucose extinction
  RteLossTerms rte;
  Tensor diff_op;      // conservation forward differences

  static PhysicsContext build(const NetworkSpec& spec, const TrainBatch& batch,
                              const std::vector<double>& i0,
                              const std::vector<double>& wavelengths_nm,
                              const ExtinctionTable& table);
};

struct EpochRow {
  int epoch = 0;
  double train_data = 0.0;
  double train_phys = 0.0;
  double val_data = 0.0;
  double lambda_phys = 0.0;
};

struct TrainState {
  std::vector<Tensor> params;
  int epochs_run = 0;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  double lambda_physics = 0.0;
  std::vector<EpochRow> history;
};

class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, int epoch)
      : std::runtime_error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

/// Full-batch Adam on L_data + lambda_physics * sum(L_phys) with early
/// stopping on the validation data loss and periodic gradient-ratio
/// rebalancing of lambda_physics. Single-threaded and reproducible for a
/// fixed stream.
TrainState train(const NetworkSpec& spec, const TrainBatch& train_batch,
                 const TrainBatch& val_batch, const ModelHyper& hyper,
                 const std::vector<double>& i0, const std::vector<double>& wavelengths_nm,
                 const ExtinctionTable& table, RandomStream& rng);

/// Tape-free composite loss (identical function to the training loss) used
/// by finite-difference oracles.
double eval_composite_loss(const NetworkSpec& spec, const std::vector<Tensor>& params,
                           const TrainBatch& batch, const PhysicsContext& ctx,
                           double lambda_physics);

struct LossBreakdown {
  double data = 0.0;
  double physics = 0.0;
  double total = 0.0;
};

/// Analytic gradients of the composite loss for every parameter tensor.
LossBreakdown composite_loss_gradients(const NetworkSpec& spec, const std::vector<Tensor>& params,
                                       const TrainBatch& batch, const PhysicsContext& ctx,
                                       double lambda_physics, std::vector<Tensor>& grads_out);

std::string history_to_csv(const std::vector<EpochRow>& history);

}  // namespace nirbench::nn

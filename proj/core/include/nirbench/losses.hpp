#pragma once

#include <vector>

#include "nirbench/autodiff.hpp"
#include "nirbench/networks.hpp"
#include "nirbench/optics.hpp"

namespace nirbench::nn {

/// Mean squared error; empty batch throws std::invalid_argument.
Tape::Id loss_data(Tape& t, Tape::Id pred, Tape::Id target);

/// Beer-Lambert consistency: mean over batch and wavelengths of
/// |ln(I0/I_l) - eps_g(l) * c_hat * 1|^2 (unit path length; relative scale
/// lives in the learned bias). `absorbance` is the n x 4 matrix ln(I0/I)
/// and `eps_row` the 1 x 4 glucose extinction row, both plain data.
Tape::Id loss_beer_lambert(Tape& t, Tape::Id pred, const Tensor& absorbance, const Tensor& eps_row);

/// Helper: per-channel absorbance matrix from raw intensities.
Tensor absorbance_matrix(const std::vector<std::vector<double>>& intensities,
                         const std::vector<double>& i0);

/// Precomputed per-sample quadratic form of the RTE residual loss. The slab
/// radiance field is solved once per sample from the measured absorbance
/// (data only), so the loss in c_hat is exactly
///   mean_i( a_i c_i^2 + b_i c_i + k_i ).
struct RteLossTerms {
  std::vector<double> a, b, k;
};

struct RteLossConfig {
  double slab_depth_mm = 1.0;
  std::size_t n_depth = 25;
  std::size_t n_mu = 4;              // per hemisphere
  double mu_ref = 0.3;               // baseline absorption, mm^-1
  double mu_s_a = 20.0, mu_s_b = 1.3, g = 0.9;
  double calibration_glucose = 100.0;
  int sweep_iterations = 60;
};

/// Build the quadratic terms from measured absorbances A[sample][channel].
RteLossTerms precompute_rte_terms(const std::vector<std::vector<double>>& absorbance,
                                  const std::vector<double>& wavelengths_nm,
                                  const std::vector<double>& rte_wavelengths_nm,
                                  const ExtinctionTable& table, const RteLossConfig& cfg = {});

Tape::Id loss_rte(Tape& t, Tape::Id pred, const RteLossTerms& terms);

/// Temporal smoothness |dc/dt + div(c v)|^2 with v = 0 and forward
/// differences; `diff_op` is the (n-1) x n forward-difference matrix scaled
/// by 1/dt, built by conservation_diff_op().
Tape::Id loss_conservation(Tape& t, Tape::Id pred, const Tensor& diff_op);

/// Forward-difference operator for per-subject time-ordered groups:
/// one row per consecutive same-subject pair, entries -1/dt and +1/dt.
Tensor conservation_diff_op(const std::vector<int>& subject_ids, const std::vector<int>& t_min);

}  // namespace nirbench::nn

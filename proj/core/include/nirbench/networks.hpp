#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nirbench/autodiff.hpp"

namespace nirbench {
class RandomStream;
}

namespace nirbench::nn {

enum class Arch { OriginalPinn, OptimizedPinn, FullRtePinn, SelectiveRtePinn, Sdnn };

Arch arch_from_id(const std::string& model_id);  // throws on unknown id
const char* arch_id(Arch a);
const std::vector<std::string>& neural_model_ids();

enum class PhysicsLoss { BeerLambert, Rte, Conservation };

/// Architecture descriptor. Widths are fixed per architecture id:
///   PINN variants: NIR branch 4-32-64-32, PMF branch 12-16-32-16,
///                  head 48-128-64-1 (ReLU throughout);
///   optimized adds residual refinement blocks at NIR-64, PMF-32 and
///   head-64 plus per-channel spectral attention on the NIR inputs;
///   SDNN: 16-16-64-64-32-1.
struct NetworkSpec {
  Arch arch = Arch::Sdnn;
  bool use_residual = false;
  bool use_attention = false;
  std::vector<PhysicsLoss> physics;
  std::vector<double> rte_wavelengths_nm;  // full: all four; selective: {1050, 1150}

  static NetworkSpec make(Arch a, const std::vector<double>& wavelengths_nm);
};

/// One trainable tensor (weight matrix or bias row).
struct ParamSpec {
  std::string name;
  int rows = 0;
  int cols = 0;
  bool is_weight = false;  // weights get fan-in/out uniform init, biases zero
};

std::vector<ParamSpec> parameter_layout(const NetworkSpec& spec);
std::int64_t count_params(const NetworkSpec& spec);

/// Uniform +/- sqrt(6/(fan_in+fan_out)) weights, zero biases, drawn in
/// layout order from the stream.
std::vector<Tensor> init_params(const NetworkSpec& spec, RandomStream& rng);

struct ForwardResult {
  Tape::Id prediction;                    // n x 1
  std::optional<Tape::Id> attention;      // n x 4 attention weights (optimized)
};

/// Build the forward graph on the tape. `params` are tape ids in layout
/// order, `nir` is n x 4 (standardized intensities), `pmf` n x 12.
ForwardResult forward(Tape& tape, const NetworkSpec& spec, const std::vector<Tape::Id>& params,
                      Tape::Id nir, Tape::Id pmf);

/// Tape-free forward pass used for inference and finite-difference checks.
std::vector<double> forward_eval(const NetworkSpec& spec, const std::vector<Tensor>& params,
                                 const std::vector<std::vector<double>>& nir,
                                 const std::vector<std::vector<double>>& pmf);

}  // namespace nirbench::nn

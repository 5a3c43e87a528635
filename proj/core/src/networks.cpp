#include "nirbench/networks.hpp"

#include <cmath>
#include <stdexcept>

#include "nirbench/rng.hpp"

namespace nirbench::nn {

namespace {

constexpr int kNirIn = 4;
constexpr int kPmfIn = 12;

struct Layer {
  std::string name;
  int in = 0, out = 0;
  bool residual = false;  // residual refinement block: h + relu(h W + b)
};

// Branch/head layer tables per architecture.
struct Blueprint {
  std::vector<Layer> nir, pmf, head;  // head input = concat width
  bool attention = false;
  bool sdnn = false;
  std::vector<Layer> stack;  // sdnn only
};

Blueprint blueprint(const NetworkSpec& spec) {
  Blueprint b;
  if (spec.arch == Arch::Sdnn) {
    b.sdnn = true;
    b.stack = {{"stack1", kNirIn + kPmfIn, 16}, {"stack2", 16, 64}, {"stack3", 64, 64},
               {"stack4", 64, 32}, {"out", 32, 1}};
    return b;
  }
  b.attention = spec.use_attention;
  b.nir = {{"nir1", kNirIn, 32}, {"nir2", 32, 64}, {"nir3", 64, 32}};
  b.pmf = {{"pmf1", kPmfIn, 16}, {"pmf2", 16, 32}, {"pmf3", 32, 16}};
  b.head = {{"head1", 48, 128}, {"head2", 128, 64}, {"out", 64, 1}};
  if (spec.use_residual) {
    b.nir = {{"nir1", kNirIn, 32}, {"nir2", 32, 64}, {"nir2_res", 64, 64, true}, {"nir3", 64, 32}};
    b.pmf = {{"pmf1", kPmfIn, 16}, {"pmf2", 16, 32}, {"pmf2_res", 32, 32, true}, {"pmf3", 32, 16}};
    b.head = {{"head1", 48, 128}, {"head2", 128, 64}, {"head2_res", 64, 64, true}, {"out", 64, 1}};
  }
  return b;
}

void push_layer_params(std::vector<ParamSpec>& out, const Layer& l) {
  out.push_back({l.name + "_w", l.in, l.out, true});
  out.push_back({l.name + "_b", 1, l.out, false});
}

}  // namespace

Arch arch_from_id(const std::string& model_id) {
  if (model_id == "original_pinn") return Arch::OriginalPinn;
  if (model_id == "optimized_pinn") return Arch::OptimizedPinn;
  if (model_id == "full_rte_pinn") return Arch::FullRtePinn;
  if (model_id == "selective_rte_pinn") return Arch::SelectiveRtePinn;
  if (model_id == "sdnn") return Arch::Sdnn;
  throw std::invalid_argument("unknown neural model id: " + model_id);
}

const char* arch_id(Arch a) {
  switch (a) {
    case Arch::OriginalPinn: return "original_pinn";
    case Arch::OptimizedPinn: return "optimized_pinn";
    case Arch::FullRtePinn: return "full_rte_pinn";
    case Arch::SelectiveRtePinn: return "selective_rte_pinn";
    case Arch::Sdnn: return "sdnn";
  }
  throw std::logic_error("unknown arch");
}

const std::vector<std::string>& neural_model_ids() {
  static const std::vector<std::string> ids = {"original_pinn", "optimized_pinn", "full_rte_pinn",
                                               "selective_rte_pinn", "sdnn"};
  return ids;
}

NetworkSpec NetworkSpec::make(Arch a, const std::vector<double>& wavelengths_nm) {
  NetworkSpec s;
  s.arch = a;
  switch (a) {
    case Arch::OriginalPinn:
      s.physics = {PhysicsLoss::BeerLambert};
      break;
    case Arch::OptimizedPinn:
      s.use_residual = true;
      s.use_attention = true;
      s.physics = {PhysicsLoss::BeerLambert, PhysicsLoss::Conservation};
      break;
    case Arch::FullRtePinn:
      s.physics = {PhysicsLoss::Rte};
      s.rte_wavelengths_nm = wavelengths_nm;
      break;
    case Arch::SelectiveRtePinn:
      s.physics = {PhysicsLoss::Rte};
      for (double w : wavelengths_nm)
        if (w == 1050.0 || w == 1150.0) s.rte_wavelengths_nm.push_back(w);
      break;
    case Arch::Sdnn:
      break;
  }
  return s;
}

std::vector<ParamSpec> parameter_layout(const NetworkSpec& spec) {
  Blueprint b = blueprint(spec);
  std::vector<ParamSpec> out;
  if (b.attention) {
    out.push_back({"attn_w", 1, kNirIn, true});
    out.push_back({"attn_b", 1, kNirIn, false});
  }
  if (b.sdnn) {
    for (const auto& l : b.stack) push_layer_params(out, l);
    return out;
  }
  for (const auto& l : b.nir) push_layer_params(out, l);
  for (const auto& l : b.pmf) push_layer_params(out, l);
  for (const auto& l : b.head) push_layer_params(out, l);
  return out;
}

std::int64_t count_params(const NetworkSpec& spec) {
  std::int64_t n = 0;
  for (const auto& p : parameter_layout(spec)) n += static_cast<std::int64_t>(p.rows) * p.cols;
  return n;
}

std::vector<Tensor> init_params(const NetworkSpec& spec, RandomStream& rng) {
  std::vector<Tensor> out;
  for (const auto& p : parameter_layout(spec)) {
    Tensor t(p.rows, p.cols);
    if (p.is_weight) {
      double bound = std::sqrt(6.0 / (p.rows + p.cols));
      for (auto& v : t.v) v = rng.uniform(-bound, bound);
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

struct ParamCursor {
  const std::vector<Tape::Id>& ids;
  std::size_t pos = 0;
  Tape::Id next() {
    if (pos >= ids.size()) throw std::logic_error("forward: parameter list exhausted");
    return ids[pos++];
  }
};

Tape::Id run_layers(Tape& t, const std::vector<Layer>& layers, ParamCursor& cur, Tape::Id x) {
  for (const auto& l : layers) {
    Tape::Id w = cur.next();
    Tape::Id b = cur.next();
    Tape::Id z = t.add_rowvec(t.matmul(x, w), b);
    if (l.residual) {
      x = t.add(x, t.relu(z));
    } else if (l.name == "out") {
      x = z;  // linear output
    } else {
      x = t.relu(z);
    }
  }
  return x;
}

}  // namespace

ForwardResult forward(Tape& t, const NetworkSpec& spec, const std::vector<Tape::Id>& params,
                      Tape::Id nir, Tape::Id pmf) {
  if (t.value(nir).cols != kNirIn) throw std::invalid_argument("forward: nir input must have 4 columns");
  if (t.value(pmf).cols != kPmfIn) throw std::invalid_argument("forward: pmf input must have 12 columns");
  Blueprint b = blueprint(spec);
  ParamCursor cur{params};
  ForwardResult out{};

  Tape::Id x_nir = nir;
  if (b.attention) {
    Tape::Id aw = cur.next();
    Tape::Id ab = cur.next();
    // Per-channel score e_k = w_k * x_k + b_k, softmax across channels.
    Tape::Id scores = t.add_rowvec(t.mul_rowvec(nir, aw), ab);
    Tape::Id alpha = t.softmax_rows(scores);
    out.attention = alpha;
    x_nir = t.mul(nir, alpha);
  }

  if (b.sdnn) {
    Tape::Id x = t.concat_cols(x_nir, pmf);
    out.prediction = run_layers(t, b.stack, cur, x);
    return out;
  }
  Tape::Id hn = run_layers(t, b.nir, cur, x_nir);
  Tape::Id hp = run_layers(t, b.pmf, cur, pmf);
  Tape::Id x = t.concat_cols(hn, hp);
  out.prediction = run_layers(t, b.head, cur, x);
  return out;
}

std::vector<double> forward_eval(const NetworkSpec& spec, const std::vector<Tensor>& params,
                                 const std::vector<std::vector<double>>& nir,
                                 const std::vector<std::vector<double>>& pmf) {
  // Build a throwaway tape; sizes here are small enough that clarity wins,
  // and inference timing is dominated by the matmuls either way.
  Tape t;
  const int n = static_cast<int>(nir.size());
  Tensor tn(n, kNirIn), tp(n, kPmfIn);
  for (int i = 0; i < n; ++i) {
    if (nir[i].size() != kNirIn || pmf[i].size() != kPmfIn)
      throw std::invalid_argument("forward_eval: input width mismatch");
    for (int j = 0; j < kNirIn; ++j) tn.at(i, j) = nir[i][j];
    for (int j = 0; j < kPmfIn; ++j) tp.at(i, j) = pmf[i][j];
  }
  std::vector<Tape::Id> pids;
  pids.reserve(params.size());
  for (const auto& p : params) pids.push_back(t.input(p));
  auto res = forward(t, spec, pids, t.input(std::move(tn)), t.input(std::move(tp)));
  const Tensor& pred = t.value(res.prediction);
  return std::vector<double>(pred.v.begin(), pred.v.end());
}

}  // namespace nirbench::nn

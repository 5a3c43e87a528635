#include "nirbench/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace nirbench::nn {

Tape::Id loss_data(Tape& t, Tape::Id pred, Tape::Id target) {
  if (t.value(pred).size() == 0) throw std::invalid_argument("loss_data: empty batch");
  return t.mean_all(t.square(t.sub(pred, target)));
}

Tensor absorbance_matrix(const std::vector<std::vector<double>>& intensities,
                         const std::vector<double>& i0) {
  const int n = static_cast<int>(intensities.size());
  const int c = static_cast<int>(i0.size());
  Tensor A(n, c);
  for (int i = 0; i < n; ++i) {
    if (intensities[i].size() != static_cast<std::size_t>(c))
      throw std::invalid_argument("absorbance_matrix: ragged intensities");
    for (int j = 0; j < c; ++j) {
      if (intensities[i][j] <= 0)
        throw std::domain_error("absorbance_matrix: nonpositive intensity");
      A.at(i, j) = std::log(i0[j] / intensities[i][j]);
    }
  }
  return A;
}

Tape::Id loss_beer_lambert(Tape& t, Tape::Id pred, const Tensor& absorbance,
                           const Tensor& eps_row) {
  if (t.value(pred).rows != absorbance.rows)
    throw std::invalid_argument("loss_beer_lambert: batch size mismatch");
  Tape::Id a = t.input(absorbance);
  Tape::Id eps = t.input(eps_row);
  Tape::Id model = t.matmul(pred, eps);  // n x 1 times 1 x c
  return t.mean_all(t.square(t.sub(a, model)));
}

RteLossTerms precompute_rte_terms(const std::vector<std::vector<double>>& absorbance,
                                  const std::vector<double>& wavelengths_nm,
                                  const std::vector<double>& rte_wavelengths_nm,
                                  const ExtinctionTable& table, const RteLossConfig& cfg) {
  const std::size_t n = absorbance.size();
  RteLossTerms terms;
  terms.a.assign(n, 0.0);
  terms.b.assign(n, 0.0);
  terms.k.assign(n, 0.0);
  if (rte_wavelengths_nm.empty()) return terms;

  for (double wl : rte_wavelengths_nm) {
    std::size_t ch = wavelengths_nm.size();
    for (std::size_t k = 0; k < wavelengths_nm.size(); ++k)
      if (wavelengths_nm[k] == wl) ch = k;
    if (ch == wavelengths_nm.size())
      throw std::invalid_argument("rte loss: wavelength not among configured channels");
    double eps_g = table.extinction(wl, Chromophore::Glucose);
    double mu_s = cfg.mu_s_a * std::pow(wl / 1000.0, -cfg.mu_s_b);

    for (std::size_t i = 0; i < n; ++i) {
      double a_meas = absorbance[i][ch];
      OpticalMedium medium;
      medium.mu_a = std::max(1e-6, cfg.mu_ref + a_meas / cfg.slab_depth_mm);
      medium.mu_s = mu_s;
      medium.anisotropy = cfg.g;
      medium.path_length = cfg.slab_depth_mm;

      RadianceField field = make_slab_field(cfg.slab_depth_mm, cfg.n_depth, cfg.n_mu);
      solve_slab(field, medium, 1.0, cfg.sweep_iterations);
      // The sweep uses the transport-corrected medium, so evaluate the
      // residual with the same effective scattering.
      OpticalMedium eval = medium;
      eval.mu_s = reduced_scattering(medium);
      eval.anisotropy = 0.0;
      auto base = rte_residual(field, eval);

      // residual(c) = base + dmu(c) * I with
      // dmu(c) = (eps_g (c - c_cal) - a_meas) / L = alpha c + beta
      double alpha = eps_g / cfg.slab_depth_mm;
      double beta = (-eps_g * cfg.calibration_glucose - a_meas) / cfg.slab_depth_mm;
      double sum_gg = 0, sum_gi = 0, sum_ii = 0;
      std::size_t count = 0;
      for (std::size_t d = 0; d < base.size(); ++d)
        for (std::size_t o = 0; o < base[d].size(); ++o) {
          double g = base[d][o] + beta * field.radiance[d + 1][o];
          double ivl = field.radiance[d + 1][o];
          sum_gg += g * g;
          sum_gi += g * ivl;
          sum_ii += ivl * ivl;
          ++count;
        }
      double norm = static_cast<double>(count) * static_cast<double>(rte_wavelengths_nm.size());
      terms.a[i] += alpha * alpha * sum_ii / norm;
      terms.b[i] += 2.0 * alpha * sum_gi / norm;
      terms.k[i] += sum_gg / norm;
    }
  }
  return terms;
}

Tape::Id loss_rte(Tape& t, Tape::Id pred, const RteLossTerms& terms) {
  const Tensor& p = t.value(pred);
  if (p.cols != 1 || static_cast<std::size_t>(p.rows) != terms.a.size())
    throw std::invalid_argument("loss_rte: term/prediction size mismatch");
  const int n = p.rows;
  Tensor ta(n, 1), tb(n, 1), tk(n, 1);
  for (int i = 0; i < n; ++i) {
    ta.v[i] = terms.a[i];
    tb.v[i] = terms.b[i];
    tk.v[i] = terms.k[i];
  }
  Tape::Id a = t.input(std::move(ta));
  Tape::Id b = t.input(std::move(tb));
  Tape::Id k = t.input(std::move(tk));
  Tape::Id quad = t.add(t.add(t.mul(a, t.square(pred)), t.mul(b, pred)), k);
  return t.mean_all(quad);
}

Tensor conservation_diff_op(const std::vector<int>& subject_ids, const std::vector<int>& t_min) {
  if (subject_ids.size() != t_min.size())
    throw std::invalid_argument("conservation_diff_op: size mismatch");
  const int n = static_cast<int>(subject_ids.size());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i + 1 < n; ++i)
    if (subject_ids[i] == subject_ids[i + 1] && t_min[i + 1] > t_min[i]) pairs.emplace_back(i, i + 1);
  Tensor D(static_cast<int>(pairs.size()), n);
  for (int r = 0; r < D.rows; ++r) {
    auto [i, j] = pairs[r];
    double dt = static_cast<double>(t_min[j] - t_min[i]);
    D.at(r, i) = -1.0 / dt;
    D.at(r, j) = 1.0 / dt;
  }
  return D;
}

Tape::Id loss_conservation(Tape& t, Tape::Id pred, const Tensor& diff_op) {
  if (diff_op.rows == 0) {
    // no same-subject consecutive pairs: the penalty is identically zero but
    // must stay differentiable
    return t.scale(t.mean_all(t.sub(pred, pred)), 0.0);
  }
  Tape::Id d = t.input(diff_op);
  return t.mean_all(t.square(t.matmul(d, pred)));
}

}  // namespace nirbench::nn

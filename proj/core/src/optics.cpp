#include "nirbench/optics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nirbench/io_util.hpp"

namespace nirbench {

namespace {
constexpr double kFourPi = 4.0 * M_PI;
}

double ChromophoreConcentrations::operator[](Chromophore c) const {
  switch (c) {
    case Chromophore::Glucose: return glucose_mgdl;
    case Chromophore::Water: return water_fraction;
    case Chromophore::Hemoglobin: return hemoglobin_fraction;
    case Chromophore::Lipid: return lipid_fraction;
    case Chromophore::Melanin: return melanin_fraction;
  }
  throw std::logic_error("unknown chromophore");
}

void ExtinctionTable::add_row(double wavelength_nm, const std::array<double, kNumChromophores>& eps) {
  wavelengths_.push_back(wavelength_nm);
  rows_.push_back(eps);
}

std::size_t ExtinctionTable::index_of(double wavelength_nm) const {
  for (std::size_t i = 0; i < wavelengths_.size(); ++i)
    if (wavelengths_[i] == wavelength_nm) return i;
  throw std::out_of_range("extinction table has no entry for wavelength " + fmt_double(wavelength_nm) + " nm");
}

double ExtinctionTable::extinction(double wavelength_nm, Chromophore c) const {
  return rows_[index_of(wavelength_nm)][static_cast<int>(c)];
}

bool ExtinctionTable::has_wavelength(double wavelength_nm) const {
  return std::find(wavelengths_.begin(), wavelengths_.end(), wavelength_nm) != wavelengths_.end();
}

void ExtinctionTable::validate() const {
  constexpr double kTypicalWaterFraction = 0.65;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (double e : rows_[i])
      if (e < 0)
        throw std::invalid_argument("extinction table: negative entry at " + fmt_double(wavelengths_[i]) + " nm");
    double water = rows_[i][static_cast<int>(Chromophore::Water)] * kTypicalWaterFraction;
    double glucose100 = rows_[i][static_cast<int>(Chromophore::Glucose)] * 100.0;
    if (water < 50.0 * glucose100)
      throw std::invalid_argument("extinction table: water term below 50x glucose at " +
                                  fmt_double(wavelengths_[i]) + " nm");
  }
}

ExtinctionTable ExtinctionTable::builtin_default() {
  // Synthetic, order-of-magnitude faithful values (see data/extinction_default.csv).
  // Columns: glucose [mm^-1 per mg/dL], water/hemoglobin/lipid/melanin
  // [mm^-1 per volume fraction]; melanin is path-weighted for its thin layer.
  ExtinctionTable t;
  t.add_row(850.0, {2.0e-6, 0.020, 0.046, 0.011, 0.250});
  t.add_row(940.0, {3.0e-6, 0.070, 0.034, 0.013, 0.190});
  t.add_row(1050.0, {1.0e-5, 0.090, 0.021, 0.010, 0.130});
  t.add_row(1150.0, {2.2e-5, 0.200, 0.015, 0.016, 0.085});
  t.validate();
  return t;
}

ExtinctionTable ExtinctionTable::load_csv(const std::string& path) {
  std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("extinction csv empty: " + path);
  if (trim(line) != "wavelength_nm,glucose,water,hemoglobin,lipid,melanin")
    throw std::runtime_error("extinction csv: unexpected header in " + path);
  ExtinctionTable t;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    auto parts = split(line, ',');
    if (parts.size() != 6)
      throw std::runtime_error("extinction csv line " + std::to_string(n) + ": expected 6 columns");
    std::array<double, kNumChromophores> eps{};
    double wl = std::stod(parts[0]);
    for (int i = 0; i < kNumChromophores; ++i) eps[i] = std::stod(parts[i + 1]);
    t.add_row(wl, eps);
  }
  t.validate();
  return t;
}

std::string ExtinctionTable::to_csv() const {
  std::string out = "wavelength_nm,glucose,water,hemoglobin,lipid,melanin\n";
  for (std::size_t i = 0; i < wavelengths_.size(); ++i) {
    out += fmt_double(wavelengths_[i]);
    for (double e : rows_[i]) out += "," + fmt_double(e);
    out += "\n";
  }
  return out;
}

void OpticalMedium::validate() const {
  if (mu_a < 0 || mu_s < 0) throw std::invalid_argument("optical medium: mu_a and mu_s must be >= 0");
  if (anisotropy < 0 || anisotropy >= 1) throw std::invalid_argument("optical medium: g must be in [0, 1)");
  if (path_length <= 0) throw std::invalid_argument("optical medium: path length must be > 0");
}

double absorbance(double i_ref, double i_meas) {
  if (i_ref <= 0) throw std::domain_error("absorbance: reference intensity must be > 0");
  if (i_meas <= 0) throw std::domain_error("absorbance: measured intensity must be > 0");
  return std::log(i_ref / i_meas);
}

double mixture_absorbance(const ExtinctionTable& table, const ChromophoreConcentrations& conc,
                          double path_length_mm, double wavelength_nm) {
  double sum = 0.0;
  for (int i = 0; i < kNumChromophores; ++i) {
    auto c = static_cast<Chromophore>(i);
    double value = conc[c];
    if (value < 0) throw std::domain_error(std::string("mixture_absorbance: negative concentration for ") +
                                           kChromophoreNames[i]);
    sum += table.extinction(wavelength_nm, c) * value;
  }
  return sum * path_length_mm;
}

double reduced_scattering(const OpticalMedium& m) { return m.mu_s * (1.0 - m.anisotropy); }

double hg_phase(double g, double cos_theta) {
  double denom = 1.0 + g * g - 2.0 * g * cos_theta;
  return (1.0 - g * g) / (denom * std::sqrt(denom));
}

double diffusion_coefficient(const OpticalMedium& m) {
  double denom = 3.0 * (m.mu_a + reduced_scattering(m));
  if (denom <= 0) throw std::domain_error("diffusion_coefficient: mu_a + mu_s' must be > 0");
  return 1.0 / denom;
}

void RadianceField::validate() const {
  double wsum = 0.0;
  for (double w : weights) {
    if (w <= 0) throw std::invalid_argument("radiance field: weights must be positive");
    wsum += w;
  }
  if (std::abs(wsum - kFourPi) > 1e-9)
    throw std::invalid_argument("radiance field: weights must sum to 4*pi, got " + fmt_double(wsum));
  if (radiance.size() != depth_mm.size() || source.size() != depth_mm.size())
    throw std::invalid_argument("radiance field: value grid does not match depth grid");
  for (const auto& row : radiance) {
    if (row.size() != directions.size())
      throw std::invalid_argument("radiance field: value row does not match direction count");
    for (double v : row)
      if (v < 0) throw std::invalid_argument("radiance field: radiance must be >= 0");
  }
}

namespace {

// Nodes/weights of n-point Gauss-Legendre on [-1, 1] by Newton iteration.
void gauss_legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double xi = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * xi * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (xi * p0 - p1) / (xi * xi - 1.0);
      double dx = p0 / pp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[i] = -xi;
    x[n - 1 - i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace

RadianceField make_slab_field(double depth_mm, std::size_t n_depth, std::size_t n_mu_per_hemisphere) {
  if (n_depth < 3) throw std::invalid_argument("make_slab_field: need at least 3 depth points");
  RadianceField f;
  f.depth_mm.resize(n_depth);
  for (std::size_t i = 0; i < n_depth; ++i)
    f.depth_mm[i] = depth_mm * static_cast<double>(i) / static_cast<double>(n_depth - 1);

  std::vector<double> x, w;
  gauss_legendre(n_mu_per_hemisphere, x, w);
  // Map [-1,1] nodes to mu in (0,1) per hemisphere; azimuthal weight 2*pi.
  for (std::size_t i = 0; i < n_mu_per_hemisphere; ++i) {
    double mu = 0.5 * (x[i] + 1.0);
    double wq = 0.5 * w[i] * 2.0 * M_PI;
    double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    f.directions.push_back({s, 0.0, mu});
    f.weights.push_back(wq);
    f.directions.push_back({s, 0.0, -mu});
    f.weights.push_back(wq);
  }
  f.radiance.assign(n_depth, std::vector<double>(f.directions.size(), 0.0));
  f.source.assign(n_depth, std::vector<double>(f.directions.size(), 0.0));
  return f;
}

std::vector<std::vector<double>> rte_residual(const RadianceField& field, const OpticalMedium& m) {
  const std::size_t nd = field.n_depth();
  const std::size_t no = field.n_dir();
  if (nd < 3) throw std::invalid_argument("rte_residual: need at least 3 depth points for central differences");

  // Azimuthally collapsed scattering kernel with the 1/(4*pi) normalization
  // of the dimensionless HG phase function.
  std::vector<double> kernel(no * no);
  for (std::size_t i = 0; i < no; ++i) {
    for (std::size_t j = 0; j < no; ++j) {
      const auto& a = field.directions[i];
      const auto& b = field.directions[j];
      double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
      dot = std::clamp(dot, -1.0, 1.0);
      kernel[i * no + j] = hg_phase(m.anisotropy, dot) / kFourPi;
    }
  }

  std::vector<std::vector<double>> res(nd - 2, std::vector<double>(no, 0.0));
  for (std::size_t d = 1; d + 1 < nd; ++d) {
    double h_prev = field.depth_mm[d] - field.depth_mm[d - 1];
    double h_next = field.depth_mm[d + 1] - field.depth_mm[d];
    for (std::size_t i = 0; i < no; ++i) {
      double grad = (field.radiance[d + 1][i] - field.radiance[d - 1][i]) / (h_prev + h_next);
      double gain = 0.0;
      for (std::size_t j = 0; j < no; ++j)
        gain += field.weights[j] * kernel[i * no + j] * field.radiance[d][j];
      double mu_z = field.directions[i][2];
      res[d - 1][i] = mu_z * grad + (m.mu_a + m.mu_s) * field.radiance[d][i] -
                      m.mu_s * gain - field.source[d][i];
    }
  }
  return res;
}

void solve_slab(RadianceField& field, const OpticalMedium& m, double boundary_radiance,
                int iterations) {
  const std::size_t nd = field.n_depth();
  const std::size_t no = field.n_dir();
  double mu_s_tc = reduced_scattering(m);  // transport-corrected, isotropic kernel
  double mu_t = m.mu_a + mu_s_tc;

  for (auto& row : field.radiance) std::fill(row.begin(), row.end(), 0.0);
  for (std::size_t i = 0; i < no; ++i)
    if (field.directions[i][2] > 0) field.radiance[0][i] = boundary_radiance;

  std::vector<std::vector<double>> scat(nd, std::vector<double>(no, 0.0));
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t d = 0; d < nd; ++d) {
      double mean = 0.0;
      for (std::size_t j = 0; j < no; ++j) mean += field.weights[j] * field.radiance[d][j];
      mean /= kFourPi;
      double s = mu_s_tc * mean;
      for (std::size_t j = 0; j < no; ++j) scat[d][j] = s + field.source[d][j];
    }
    // Diamond-difference (trapezoidal) marching per ordinate; second order,
    // so the central-difference residual of the solution stays at the
    // discretization floor. Callers keep h*mu_t/(2*mu_min) < 1 for positivity.
    for (std::size_t i = 0; i < no; ++i) {
      double mu = field.directions[i][2];
      if (mu > 0) {
        field.radiance[0][i] = boundary_radiance;
        for (std::size_t d = 1; d < nd; ++d) {
          double h = field.depth_mm[d] - field.depth_mm[d - 1];
          double a = h * mu_t / (2.0 * mu);
          double s_mid = 0.5 * (scat[d - 1][i] + scat[d][i]);
          field.radiance[d][i] =
              ((1.0 - a) * field.radiance[d - 1][i] + h / mu * s_mid) / (1.0 + a);
        }
      } else {
        field.radiance[nd - 1][i] = 0.0;  // vacuum at the deep boundary
        for (std::size_t d = nd - 1; d-- > 0;) {
          double h = field.depth_mm[d + 1] - field.depth_mm[d];
          double a = h * mu_t / (2.0 * -mu);
          double s_mid = 0.5 * (scat[d + 1][i] + scat[d][i]);
          field.radiance[d][i] =
              ((1.0 - a) * field.radiance[d + 1][i] + h / -mu * s_mid) / (1.0 + a);
        }
      }
    }
  }
}

}  // namespace nirbench

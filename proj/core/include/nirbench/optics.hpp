#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace nirbench {

enum class Chromophore { Glucose = 0, Water, Hemoglobin, Lipid, Melanin };
inline constexpr int kNumChromophores = 5;
inline constexpr std::array<const char*, kNumChromophores> kChromophoreNames{
    "glucose", "water", "hemoglobin", "lipid", "melanin"};

/// Per-wavelength extinction coefficients. Glucose entries are
/// mm^-1 per (mg/dL); the rest are mm^-1 per volume fraction.
class ExtinctionTable {
 public:
  ExtinctionTable() = default;

  void add_row(double wavelength_nm, const std::array<double, kNumChromophores>& eps);
  /// Extinction of one chromophore; unknown wavelength throws std::out_of_range.
  double extinction(double wavelength_nm, Chromophore c) const;
  bool has_wavelength(double wavelength_nm) const;
  const std::vector<double>& wavelengths() const { return wavelengths_; }

  /// All entries >= 0 and, at every wavelength, water extinction at a typical
  /// 0.65 volume fraction is at least 50x the glucose extinction at 100 mg/dL.
  void validate() const;

  static ExtinctionTable builtin_default();
  static ExtinctionTable load_csv(const std::string& path);
  std::string to_csv() const;

 private:
  std::vector<double> wavelengths_;
  std::vector<std::array<double, kNumChromophores>> rows_;
  std::size_t index_of(double wavelength_nm) const;
};

struct ChromophoreConcentrations {
  double glucose_mgdl = 0.0;
  double water_fraction = 0.0;
  double hemoglobin_fraction = 0.0;
  double lipid_fraction = 0.0;
  double melanin_fraction = 0.0;

  double operator[](Chromophore c) const;
};

struct OpticalMedium {
  double mu_a = 0.0;        // mm^-1
  double mu_s = 0.0;        // mm^-1
  double anisotropy = 0.0;  // g in [0, 1)
  double path_length = 1.0; // mm

  void validate() const;  // throws std::invalid_argument
};

/// ln(i_ref / i_meas). Nonpositive intensities throw std::domain_error
/// naming the offending side.
double absorbance(double i_ref, double i_meas);

/// Sum_i eps_i(lambda) * c_i * l.
double mixture_absorbance(const ExtinctionTable& table, const ChromophoreConcentrations& conc,
                          double path_length_mm, double wavelength_nm);

/// mu_s * (1 - g).
double reduced_scattering(const OpticalMedium& m);

/// Henyey-Greenstein phase function, normalized so (1/2) int_{-1}^{1} p dmu = 1.
double hg_phase(double g, double cos_theta);

/// D = 1 / (3 (mu_a + mu_s')). Zero denominator throws std::domain_error.
double diffusion_coefficient(const OpticalMedium& m);

/// 1-D slab radiance field: depth grid (mm), discrete ordinate directions
/// (unit 3-vectors with quadrature weights summing to 4*pi), radiance and
/// source values indexed [depth][direction].
struct RadianceField {
  std::vector<double> depth_mm;
  std::vector<std::array<double, 3>> directions;
  std::vector<double> weights;
  std::vector<std::vector<double>> radiance;  // W mm^-2 sr^-1
  std::vector<std::vector<double>> source;

  void validate() const;
  std::size_t n_depth() const { return depth_mm.size(); }
  std::size_t n_dir() const { return directions.size(); }
};

/// Gauss-Legendre mu nodes per hemisphere, folded into slab directions
/// (+/- z). Weights include the azimuthal 2*pi and sum to 4*pi.
RadianceField make_slab_field(double depth_mm, std::size_t n_depth, std::size_t n_mu_per_hemisphere);

/// Steady-state RTE residual Omega.grad I + (mu_a+mu_s) I - scattering gain - S
/// at interior depth nodes (central differences). Result is indexed
/// [interior depth][direction]; fewer than 3 depth points throws
/// std::invalid_argument.
std::vector<std::vector<double>> rte_residual(const RadianceField& field, const OpticalMedium& m);

/// Discrete-ordinates forward solve of the slab with a collimated boundary
/// source injected at depth 0 into the downward hemisphere. Source-iteration
/// with a fixed iteration count keeps the result deterministic. Scattering is
/// transport-corrected (mu_s' with isotropic kernel).
void solve_slab(RadianceField& field, const OpticalMedium& m, double boundary_radiance,
                int iterations = 40);

}  // namespace nirbench

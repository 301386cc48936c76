#pragma once

#include <complex>

#include "talbot/model.hpp"

namespace talbot {

// A mode whose Gaussian exponent exceeds this is an exact zero. e^-46 ~ 1e-20,
// far below double significance of any pair sum the mode can enter.
inline constexpr double mode_exponent_cutoff = 46.0;

/// Per-z quantities shared by every mode evaluation on a z slice.
struct ModeBasis {
  double z = 0.0;
  double sigma_z = 0.0;
  double sigma_z_sq = 0.0;
  std::complex<double> sigma_tilde;
  std::complex<double> prefactor;   // (2 pi sigma~^2)^(-1/4), principal branch
  std::complex<double> inv_4ss;     // 1/(4 sigma0 sigma~); real part = 1/(4 sigma_z^2)
  std::complex<double> grad_coeff;  // -1/(2 sigma0 sigma~)
  double cutoff_r2 = 0.0;           // modes farther than sqrt of this from x are zero

  static ModeBasis at(const Model& m, double z);

  std::complex<double> amplitude(double center, double x) const {
    const double dx = x - center;
    const double r2 = dx * dx;
    if (r2 > cutoff_r2) return {0.0, 0.0};
    return prefactor * std::exp(-r2 * inv_4ss);
  }
  std::complex<double> gradient(double center, double x) const {
    return grad_coeff * (x - center) * amplitude(center, x);
  }
};

struct ModeValue {
  std::complex<double> amplitude;
  std::complex<double> gradient;
};

/// Propagated Gaussian mode of slit n (1-based) at (x, z).
std::complex<double> mode_amplitude(const Model& m, int n, double x, double z);

/// Analytic x-derivative of mode_amplitude.
std::complex<double> mode_gradient(const Model& m, int n, double x, double z);

ModeValue mode_value(const Model& m, int n, double x, double z);

/// Normalized coherent superposition (1/sqrt(N)) sum_n phi_n(x, z).
std::complex<double> coherent_wave(const Model& m, double x, double z);

/// |coherent_wave|^2.
double coherent_density(const Model& m, double x, double z);

/// The same coherent density evaluated through the explicit pair sum
/// (1/N) (2 pi sigma_z^2)^(-1/2) sum_{n,n'} cos(phi_nn') exp(-beta_nn').
/// Kept as an independent algebraic route for cross-checking; the complex
/// product form above is the canonical path.
double cosine_form_density(const Model& m, double x, double z);

}  // namespace talbot

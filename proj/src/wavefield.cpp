#include "talbot/wavefield.hpp"

#include <cmath>

namespace talbot {

ModeBasis ModeBasis::at(const Model& m, double z) {
  if (z < 0.0) throw std::domain_error("ModeBasis: z must be nonnegative");
  const double s0 = m.grating.sigma0;
  ModeBasis b;
  b.z = z;
  b.sigma_tilde = complex_width(s0, m.beam.k, z);
  b.sigma_z = std::abs(b.sigma_tilde);
  b.sigma_z_sq = std::norm(b.sigma_tilde);
  // Re sigma~ > 0, so arg(sigma~^2) stays inside (-pi, pi) and the principal
  // log gives a branch continuous in z.
  const std::complex<double> s2 = b.sigma_tilde * b.sigma_tilde;
  b.prefactor = std::exp(-0.25 * std::log(2.0 * pi * s2));
  b.inv_4ss = 1.0 / (4.0 * s0 * b.sigma_tilde);
  b.grad_coeff = -1.0 / (2.0 * s0 * b.sigma_tilde);
  b.cutoff_r2 = mode_exponent_cutoff * 4.0 * b.sigma_z_sq;
  return b;
}

static void check_slit_index(const Model& m, int n) {
  if (n < 1 || n > m.grating.n_slits)
    throw std::domain_error("slit index out of range");
}

std::complex<double> mode_amplitude(const Model& m, int n, double x, double z) {
  check_slit_index(m, n);
  return ModeBasis::at(m, z).amplitude(m.grating.centers[n - 1], x);
}

std::complex<double> mode_gradient(const Model& m, int n, double x, double z) {
  check_slit_index(m, n);
  return ModeBasis::at(m, z).gradient(m.grating.centers[n - 1], x);
}

ModeValue mode_value(const Model& m, int n, double x, double z) {
  check_slit_index(m, n);
  const ModeBasis b = ModeBasis::at(m, z);
  const double c = m.grating.centers[n - 1];
  const std::complex<double> a = b.amplitude(c, x);
  return ModeValue{a, b.grad_coeff * (x - c) * a};
}

std::complex<double> coherent_wave(const Model& m, double x, double z) {
  const ModeBasis b = ModeBasis::at(m, z);
  std::complex<long double> sum = 0.0;
  for (double c : m.grating.centers) sum += b.amplitude(c, x);
  sum /= std::sqrt(static_cast<long double>(m.grating.n_slits));
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

double coherent_density(const Model& m, double x, double z) {
  return std::norm(coherent_wave(m, x, z));
}

double cosine_form_density(const Model& m, double x, double z) {
  const ModeBasis b = ModeBasis::at(m, z);
  const auto& c = m.grating.centers;
  const int n_slits = m.grating.n_slits;
  const double inv_4sz2 = 1.0 / (4.0 * b.sigma_z_sq);
  const double phase_coeff =
      z / (8.0 * m.beam.k * m.grating.sigma0 * m.grating.sigma0 * b.sigma_z_sq);

  long double sum = 0.0;
  for (int n = 0; n < n_slits; ++n) {
    const double un = x - c[n];
    const double en = un * un * inv_4sz2;
    if (en > mode_exponent_cutoff) continue;  // matches the per-mode zeroing
    for (int np = 0; np < n_slits; ++np) {
      const double up = x - c[np];
      const double ep = up * up * inv_4sz2;
      if (ep > mode_exponent_cutoff) continue;
      const double beta = en + ep;
      const double phi = phase_coeff * (un * un - up * up);
      sum += std::cos(phi) * std::exp(-beta);
    }
  }
  const double pref = 1.0 / std::sqrt(2.0 * pi * b.sigma_z_sq);
  return static_cast<double>(sum) * pref / n_slits;
}

}  // namespace talbot

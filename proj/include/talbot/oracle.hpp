#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "talbot/model.hpp"

namespace talbot {

/// Complex field sampled on a uniform power-of-two lattice, propagated exactly
/// in the spectral basis. Used only to certify the analytic wavefield.
struct SpectralField {
  double x0 = 0.0;  // leftmost sample
  double dx = 0.0;  // lattice spacing
  std::vector<std::complex<double>> values;  // power-of-two count

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double half_span() const { return -x0; }  // lattice is symmetric about 0
  double norm() const;                      // dx * sum |psi|^2
  std::vector<double> density() const;      // |psi|^2 per sample
};

/// Lattice sized for propagation up to z_max with structure resolvable from
/// z_min_of_interest on: spans the grating extent plus 10 sigma_z(z_max) of
/// padding per side, point count from the spectral sampling bound.
SpectralField make_initial_lattice(const Model& m, double z_max,
                                   double z_min_of_interest);

/// Fill psi(x, 0) of the full grating superposition on the lattice.
void fill_grating_wave(const Model& m, SpectralField& f);

/// Fill phi_n(x, 0) of a single slit (1-based index).
void fill_single_mode(const Model& m, int n, SpectralField& f);

/// Free propagation to z_target: one exact multiply by exp(-i kx^2 z / 2k) in
/// the spectral domain. Rejects inadequate lattices (sampling bound) and
/// spectra with tail power above 1e-10 of the total beyond 0.9 kx_max.
SpectralField split_step_propagate(const SpectralField& initial, const Model& m,
                                   double z_target);

/// Huygens-Fresnel quadrature of the propagated mode of slit n at (x, z > 0):
/// sqrt(k / 2 pi i z) * integral of phi_n(x', 0) exp(i k (x-x')^2 / 2z) dx'
/// over x' within 12 sigma0 of the slit center, adaptive to relative 1e-8.
std::complex<double> fresnel_quadrature_mode(const Model& m, int n, double x,
                                             double z);

struct DensityProfile {
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<double> values;
};

struct FieldComparison {
  double max_rel = 0.0;  // where the reference exceeds 1e-6 of its max
  double l2_rel = 0.0;
  double pearson = 0.0;
};

/// Compare two density profiles sampled on the same lattice (else domain error).
FieldComparison compare_fields(const DensityProfile& a, const DensityProfile& b);

/// Pearson correlation of two equal-length sample sets.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace talbot

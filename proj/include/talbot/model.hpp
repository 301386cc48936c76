#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace talbot {

inline constexpr double pi = 3.14159265358979323846;

/// Longitudinal wavenumber k = 2*pi/lambda of a monochromatic matter wave.
double derive_wavenumber(double lambda_dB);

/// Near-field self-imaging distance z_T = 2 d^2 / lambda of a grating of period d.
double talbot_distance(double period, double lambda_dB);

/// Real width sigma_z = sigma0 * sqrt(1 + (z / 2 k sigma0^2)^2) of a freely
/// spreading Gaussian mode. Monotone nondecreasing in z.
double beam_width(double sigma0, double k, double z);

/// Complex width sigma~_z = sigma0 * (1 + i z / 2 k sigma0^2).
/// |sigma~_z| equals beam_width at the same arguments.
std::complex<double> complex_width(double sigma0, double k, double z);

/// Transverse separation 1/sqrt(Lambda z) over which mutual coherence survives
/// after propagating a distance z under localization strength Lambda.
/// Lambda == 0 or z == 0 gives +infinity (no decoherence yet), not an error.
double coherence_range(double Lambda, double z);

struct BeamParams {
  double lambda_dB = 0.0;  // de Broglie wavelength [m]
  double k = 0.0;          // 2*pi/lambda_dB [1/m]

  static BeamParams from_wavelength(double lambda_dB);
};

struct GratingSpec {
  double period = 0.0;      // d [m]
  double slit_width = 0.0;  // w [m], geometric opening
  double sigma0 = 0.0;      // Gaussian mode width per slit [m]
  int n_slits = 0;
  std::vector<double> centers;  // symmetric about x = 0, spacing d
  // set when exp(-d^2 / 8 sigma0^2) >= 1e-3, i.e. adjacent modes overlap enough
  // to perturb the per-slit normalization
  bool overlap_warning = false;

  static GratingSpec make(double period, double slit_width, int n_slits,
                          double sigma0);

  double overlap_adjacent() const;  // exp(-d^2 / 8 sigma0^2)
};

struct DecoherenceParams {
  double Lambda = 0.0;  // localization strength [1/m^3]

  static DecoherenceParams from_si(double Lambda);
};

// display unit used for Lambda throughout the literature on this model
inline constexpr double Lambda_mm_um2 = 1e15;  // 1 mm^-1 um^-2 in 1/m^3

struct SimulationGrid {
  double x_min = 0.0, x_max = 0.0;
  double z_min = 0.0, z_max = 0.0;
  int nx = 0, nz = 0;

  static SimulationGrid make(double x_min, double x_max, double z_min,
                             double z_max, int nx, int nz);

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dz() const { return nz > 1 ? (z_max - z_min) / (nz - 1) : 0.0; }
  double x(int i) const { return x_min + i * dx(); }
  double z(int j) const { return z_min + j * dz(); }
};

/// Immutable parameter bundle consumed by every field evaluator.
struct Model {
  BeamParams beam;
  GratingSpec grating;
  double z_talbot = 0.0;   // 2 d^2 / lambda
  double k0 = 0.0;         // transverse grating wavenumber 2*pi/d
  double z_spread = 0.0;   // 2 k sigma0^2, width-doubling scale of one mode

  static Model make(const BeamParams& beam, const GratingSpec& grating);

  double sigma_z(double z) const {
    return beam_width(grating.sigma0, beam.k, z);
  }
  std::complex<double> sigma_tilde(double z) const {
    return complex_width(grating.sigma0, beam.k, z);
  }
};

}  // namespace talbot

#include "talbot/model.hpp"

#include <cmath>
#include <limits>

namespace talbot {

double derive_wavenumber(double lambda_dB) {
  if (!(lambda_dB > 0.0))
    throw std::domain_error("derive_wavenumber: wavelength must be positive");
  return 2.0 * pi / lambda_dB;
}

double talbot_distance(double period, double lambda_dB) {
  if (!(period > 0.0) || !(lambda_dB > 0.0))
    throw std::domain_error("talbot_distance: period and wavelength must be positive");
  return 2.0 * period * period / lambda_dB;
}

double beam_width(double sigma0, double k, double z) {
  if (!(sigma0 > 0.0) || !(k > 0.0) || z < 0.0)
    throw std::domain_error("beam_width: requires sigma0 > 0, k > 0, z >= 0");
  const double zeta = z / (2.0 * k * sigma0 * sigma0);
  return sigma0 * std::sqrt(1.0 + zeta * zeta);
}

std::complex<double> complex_width(double sigma0, double k, double z) {
  if (!(sigma0 > 0.0) || !(k > 0.0) || z < 0.0)
    throw std::domain_error("complex_width: requires sigma0 > 0, k > 0, z >= 0");
  const double zeta = z / (2.0 * k * sigma0 * sigma0);
  return sigma0 * std::complex<double>(1.0, zeta);
}

double coherence_range(double Lambda, double z) {
  if (Lambda < 0.0 || z < 0.0)
    throw std::domain_error("coherence_range: Lambda and z must be nonnegative");
  const double p = Lambda * z;
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(p);
}

BeamParams BeamParams::from_wavelength(double lambda_dB) {
  BeamParams b;
  b.lambda_dB = lambda_dB;
  b.k = derive_wavenumber(lambda_dB);
  return b;
}

GratingSpec GratingSpec::make(double period, double slit_width, int n_slits,
                              double sigma0) {
  if (!(period > 0.0)) throw std::domain_error("GratingSpec: period must be positive");
  if (!(slit_width > 0.0)) throw std::domain_error("GratingSpec: slit width must be positive");
  if (!(slit_width < period)) throw std::domain_error("GratingSpec: slit width must be below the period");
  if (n_slits < 1) throw std::domain_error("GratingSpec: need at least one slit");
  if (!(sigma0 > 0.0)) throw std::domain_error("GratingSpec: sigma0 must be positive");

  GratingSpec g;
  g.period = period;
  g.slit_width = slit_width;
  g.sigma0 = sigma0;
  g.n_slits = n_slits;
  g.centers.resize(n_slits);
  // half-integer offsets are exact, so the array negates to itself bitwise
  for (int n = 0; n < n_slits; ++n)
    g.centers[n] = (n + 1 - 0.5 * (n_slits + 1)) * period;
  g.overlap_warning = g.overlap_adjacent() >= 1e-3;
  return g;
}

double GratingSpec::overlap_adjacent() const {
  return std::exp(-period * period / (8.0 * sigma0 * sigma0));
}

DecoherenceParams DecoherenceParams::from_si(double Lambda) {
  if (Lambda < 0.0)
    throw std::domain_error("DecoherenceParams: Lambda must be nonnegative");
  return DecoherenceParams{Lambda};
}

SimulationGrid SimulationGrid::make(double x_min, double x_max, double z_min,
                                    double z_max, int nx, int nz) {
  if (!(x_min < x_max)) throw std::domain_error("SimulationGrid: x_min must be below x_max");
  if (!(z_min >= 0.0) || !(z_min < z_max))
    throw std::domain_error("SimulationGrid: need 0 <= z_min < z_max");
  if (nx < 2 || nz < 2) throw std::domain_error("SimulationGrid: need nx >= 2 and nz >= 2");
  return SimulationGrid{x_min, x_max, z_min, z_max, nx, nz};
}

Model Model::make(const BeamParams& beam, const GratingSpec& grating) {
  Model m;
  m.beam = beam;
  m.grating = grating;
  m.z_talbot = talbot_distance(grating.period, beam.lambda_dB);
  m.k0 = 2.0 * pi / grating.period;
  m.z_spread = 2.0 * beam.k * grating.sigma0 * grating.sigma0;
  return m;
}

}  // namespace talbot

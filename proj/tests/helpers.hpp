#pragma once

#include <cmath>
#include <random>

#include "talbot/model.hpp"

namespace talbot::testing {

// sodium beamline used throughout: lambda = 16 pm, d = 0.4 um, w = 0.2 um,
// sigma0 = w/4, 50 slits
inline Model sodium_model(int n_slits = 50) {
  return Model::make(BeamParams::from_wavelength(16e-12),
                     GratingSpec::make(0.4e-6, 0.2e-6, n_slits, 0.05e-6));
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

// deterministic generator for property-style sweeps
inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed5u);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

// 6th-order central first derivative
template <class F>
double deriv6(F f, double x, double h) {
  return (-f(x - 3 * h) + 9 * f(x - 2 * h) - 45 * f(x - h) + 45 * f(x + h) -
          9 * f(x + 2 * h) + f(x + 3 * h)) /
         (60.0 * h);
}

// composite Simpson over [lo, hi] with n (even) intervals
template <class F>
double simpson(F f, double lo, double hi, int n) {
  if (n % 2) ++n;
  const double h = (hi - lo) / n;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// Independent brute-force oracle: the damped pair sum transcribed in extended
// precision through the cosine/exponential form, sharing nothing with the
// engine's complex-product path.
inline long double brute_force_density(const Model& m, double x, double z,
                                       double Lambda) {
  const long double s0 = m.grating.sigma0;
  const long double k = m.beam.k;
  const long double zeta = z / (2.0L * k * s0 * s0);
  const long double sz2 = s0 * s0 * (1.0L + zeta * zeta);
  const long double cutoff = 46.0L;
  long double sum = 0.0L;
  for (double cn : m.grating.centers)
    for (double cp : m.grating.centers) {
      const long double un = x - cn, up = x - cp;
      if (un * un / (4.0L * sz2) > cutoff) continue;
      if (up * up / (4.0L * sz2) > cutoff) continue;
      const long double beta = (un * un + up * up) / (4.0L * sz2);
      const long double phi = z / (8.0L * k * s0 * s0 * sz2) * (un * un - up * up);
      const long double sep = cn - cp;
      sum += std::cos(phi) * std::exp(-beta - static_cast<long double>(Lambda) * z * sep * sep);
    }
  return sum / (m.grating.n_slits * std::sqrt(2.0L * 3.14159265358979323846L * sz2));
}

}  // namespace talbot::testing

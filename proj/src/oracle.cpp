#include "talbot/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "talbot/wavefield.hpp"

namespace talbot {

double SpectralField::norm() const {
  long double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return static_cast<double>(sum) * dx;
}

std::vector<double> SpectralField::density() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::norm(values[i]);
  return out;
}

SpectralField make_initial_lattice(const Model& m, double z_max,
                                   double z_min_of_interest) {
  if (!(z_max > 0.0) || !(z_min_of_interest > 0.0) || z_min_of_interest > z_max)
    throw std::domain_error("make_initial_lattice: need 0 < z_min_of_interest <= z_max");
  const double extent =
      (m.grating.n_slits - 1) * m.grating.period + m.grating.slit_width;
  const double half = 0.5 * extent + 10.0 * m.sigma_z(z_max);
  // sampling bound: pi/dx >= 4 k half / z_min, so displaced spectral content
  // at the earliest z of interest still lands inside the band
  const double dx_req = pi * z_min_of_interest / (4.0 * m.beam.k * half);
  std::size_t n = 1;
  while (n * dx_req < 2.0 * half || n < 64) n <<= 1;

  SpectralField f;
  f.dx = 2.0 * half / static_cast<double>(n);
  f.x0 = -half;
  f.values.assign(n, {0.0, 0.0});
  return f;
}

void fill_grating_wave(const Model& m, SpectralField& f) {
  const ModeBasis b = ModeBasis::at(m, 0.0);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(m.grating.n_slits));
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    std::complex<double> sum = 0.0;
    for (double c : m.grating.centers) sum += b.amplitude(c, f.x(i));
    f.values[i] = inv_sqrt_n * sum;
  }
}

void fill_single_mode(const Model& m, int n, SpectralField& f) {
  if (n < 1 || n > m.grating.n_slits)
    throw std::domain_error("fill_single_mode: slit index out of range");
  const ModeBasis b = ModeBasis::at(m, 0.0);
  const double c = m.grating.centers[n - 1];
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = b.amplitude(c, f.x(i));
}

namespace {

void fft_inplace(std::vector<std::complex<double>>& v, int sign) {
  fftw_plan plan = fftw_plan_dft_1d(
      static_cast<int>(v.size()), reinterpret_cast<fftw_complex*>(v.data()),
      reinterpret_cast<fftw_complex*>(v.data()), sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

// Gauss-Kronrod G7/K15 pair on [-1, 1]; the odd Kronrod points interleave the
// Gauss subset.
constexpr double gk_nodes[8] = {
    0.0,
    0.2077849550078985,  // K
    0.4058451513773972,  // G
    0.5860872354676911,  // K
    0.7415311855993944,  // G
    0.8648644233597691,  // K
    0.9491079123427585,  // G
    0.9914553711208126,  // K
};
constexpr double k15_weights[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
    0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
    0.0630920926299786, 0.0229353220105292,
};
constexpr double g7_weights[8] = {
    0.4179591836734694, 0.0, 0.3818300505051189, 0.0,
    0.2797053914892767, 0.0, 0.1294849661688697, 0.0,
};

struct GkEstimate {
  std::complex<double> integral;
  double error = 0.0;   // |K15 - G7|
  double l1 = 0.0;      // K15 of |f|
};

template <class F>
GkEstimate gk15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  GkEstimate e;
  std::complex<double> gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const std::complex<double> hi = f(mid + half * gk_nodes[i]);
    const std::complex<double> lo = i ? f(mid - half * gk_nodes[i]) : 0.0;
    const std::complex<double> pair = i ? hi + lo : hi;
    e.integral += k15_weights[i] * pair;
    gauss += g7_weights[i] * pair;
    e.l1 += k15_weights[i] * (std::abs(hi) + (i ? std::abs(lo) : 0.0));
  }
  e.integral *= half;
  e.l1 *= half;
  e.error = std::abs(e.integral - half * gauss);
  return e;
}

struct AdaptiveQuadrature {
  std::function<std::complex<double>(double)> f;
  double tol_abs = 0.0;
  double span = 1.0;
  int max_depth = 12;
  long nodes = 0;
  double error = 0.0;
  double l1 = 0.0;
  bool depth_exhausted = false;

  std::complex<double> run(double a, double b, double tol_rel) {
    auto counted = [this](double x) {
      ++nodes;
      return f(x);
    };
    span = b - a;
    const GkEstimate whole = gk15(counted, a, b);
    // absolute budget proportional to the integrand mass, split per segment
    tol_abs = tol_rel * std::max(whole.l1, 1e-300);
    return refine(counted, a, b, whole, max_depth);
  }

  template <class F>
  std::complex<double> refine(const F& g, double a, double b,
                              const GkEstimate& est, int depth) {
    const double budget = tol_abs * (b - a) / span;
    if (est.error <= budget || depth == 0) {
      if (depth == 0 && est.error > budget) depth_exhausted = true;
      error += est.error;
      l1 += est.l1;
      return est.integral;
    }
    const double mid = 0.5 * (a + b);
    const GkEstimate left = gk15(g, a, mid);
    const GkEstimate right = gk15(g, mid, b);
    return refine(g, a, mid, left, depth - 1) +
           refine(g, mid, b, right, depth - 1);
  }
};

}  // namespace

SpectralField split_step_propagate(const SpectralField& initial, const Model& m,
                                   double z_target) {
  if (z_target < 0.0)
    throw std::domain_error("split_step_propagate: z_target must be nonnegative");
  const std::size_t n = initial.values.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::domain_error("split_step_propagate: lattice size must be a power of two");
  if (z_target == 0.0) return initial;

  const double kx_max = pi / initial.dx;
  const double kx_needed = 4.0 * m.beam.k * initial.half_span() / z_target;
  if (kx_max < kx_needed) {
    std::ostringstream msg;
    msg << "split_step_propagate: lattice too coarse (kx_max " << kx_max
        << " < required " << kx_needed << " at z = " << z_target << ")";
    throw std::domain_error(msg.str());
  }

  SpectralField out = initial;
  fft_inplace(out.values, FFTW_FORWARD);

  const double dk = 2.0 * pi / (n * initial.dx);
  long double total = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::norm(out.values[i]);
    total += p;
    const double kx = dk * (i <= n / 2 ? static_cast<double>(i)
                                       : static_cast<double>(i) - static_cast<double>(n));
    if (std::abs(kx) > 0.9 * kx_max) tail += p;
  }
  if (total > 0.0 && tail > 1e-10 * total) {
    std::ostringstream msg;
    msg << "split_step_propagate: spectral tail power " << static_cast<double>(tail / total)
        << " above 0.9 kx_max exceeds 1e-10; lattice under-resolves the field";
    throw std::runtime_error(msg.str());
  }

  const double phase_coeff = -z_target / (2.0 * m.beam.k);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double kx = dk * (i <= n / 2 ? static_cast<double>(i)
                                       : static_cast<double>(i) - static_cast<double>(n));
    out.values[i] *= std::polar(inv_n, phase_coeff * kx * kx);
  }
  fft_inplace(out.values, FFTW_BACKWARD);
  return out;
}

std::complex<double> fresnel_quadrature_mode(const Model& m, int n, double x,
                                             double z) {
  if (n < 1 || n > m.grating.n_slits)
    throw std::domain_error("fresnel_quadrature_mode: slit index out of range");
  if (!(z > 0.0))
    throw std::domain_error("fresnel_quadrature_mode: kernel is singular at z = 0");

  const double s0 = m.grating.sigma0;
  const double c = m.grating.centers[n - 1];
  const double k = m.beam.k;
  const double amp0 = std::pow(2.0 * pi * s0 * s0, -0.25);
  const double chirp = 0.5 * k / z;

  AdaptiveQuadrature quad;
  quad.f = [=](double xp) {
    const double u = xp - c;
    const double g = amp0 * std::exp(-u * u / (4.0 * s0 * s0));
    return std::polar(g, chirp * (x - xp) * (x - xp));
  };
  const std::complex<double> integral =
      quad.run(c - 12.0 * s0, c + 12.0 * s0, 1e-10);

  const double mag = std::abs(integral);
  if (quad.depth_exhausted || (mag > 0.0 && quad.error > 1e-8 * mag)) {
    std::ostringstream msg;
    msg << "fresnel_quadrature_mode: quadrature did not converge (error "
        << quad.error / (mag > 0.0 ? mag : 1.0) << " after " << quad.nodes
        << " integrand nodes)";
    throw std::runtime_error(msg.str());
  }
  // sqrt(k / 2 pi i z) on the branch continuous from z -> 0+
  const std::complex<double> pref =
      std::sqrt(k / (2.0 * pi * z)) * std::polar(1.0, -0.25 * pi);
  return pref * integral;
}

FieldComparison compare_fields(const DensityProfile& a, const DensityProfile& b) {
  if (a.values.size() != b.values.size() || a.x0 != b.x0 || a.dx != b.dx)
    throw std::domain_error("compare_fields: profiles on mismatched lattices");
  if (a.values.empty()) throw std::domain_error("compare_fields: empty profiles");

  double ref_max = 0.0;
  for (double v : b.values) ref_max = std::max(ref_max, std::abs(v));
  const double floor = 1e-6 * ref_max;

  FieldComparison out;
  long double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double diff = a.values[i] - b.values[i];
    num += diff * diff;
    den += b.values[i] * b.values[i];
    if (std::abs(b.values[i]) > floor)
      out.max_rel = std::max(out.max_rel, std::abs(diff) / std::abs(b.values[i]));
  }
  out.l2_rel = den > 0.0 ? static_cast<double>(std::sqrt(num / den)) : 0.0;
  out.pearson = pearson_correlation(a.values, b.values);
  return out;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw std::domain_error("pearson_correlation: size mismatch");
  long double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= a.size();
  mb /= b.size();
  long double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0)
    return std::numeric_limits<double>::quiet_NaN();  // degenerate profile
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

}  // namespace talbot

#include "talbot/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace talbot {

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

// Per-z-slice context: mode basis plus the offset damping table. On a uniform
// grating D_nn' depends only on m = n - n', so the pair sum collapses to
// per-offset correlations of the slit amplitude vector.
struct SliceContext {
  ModeBasis basis;
  std::vector<double> damping;  // damping[m-1] = exp(-Lambda z (m d)^2)
  int m_max = 0;                // largest contributing offset
  bool undamped = false;        // Lambda z == 0: every weight is exactly 1
  double floor_scale = 0.0;     // density scale used for pointwise node floors

  static SliceContext at(const Model& m, double z, double Lambda) {
    SliceContext ctx;
    ctx.basis = ModeBasis::at(m, z);
    const int n_slits = m.grating.n_slits;
    const double d = m.grating.period;
    const double lz = Lambda * z;
    if (lz == 0.0) {
      ctx.undamped = true;
      ctx.m_max = n_slits - 1;
    } else {
      ctx.damping.reserve(8);
      for (int off = 1; off < n_slits; ++off) {
        const double sep = off * d;
        const double w = std::exp(-lz * sep * sep);
        if (w < damping_cutoff) break;
        ctx.damping.push_back(w);
      }
      ctx.m_max = static_cast<int>(ctx.damping.size());
    }
    // incoherent central-peak estimate, within a factor N of the slice maximum
    const double peaks =
        std::min<double>(n_slits, 1.0 + std::sqrt(2.0 * pi) * ctx.basis.sigma_z / d);
    ctx.floor_scale = peaks / (n_slits * std::sqrt(2.0 * pi * ctx.basis.sigma_z_sq));
    return ctx;
  }

  double weight(int off) const { return undamped ? 1.0 : damping[off - 1]; }
};

struct RawSums {
  long double rho = 0.0;
  long double flux = 0.0;  // before the 1/(N k) factor
  long double sink = 0.0;
};

// Offset-factorized pair sums at one point. Amplitudes beyond the Gaussian
// cutoff are exact zeros, identically to the per-mode rule used everywhere.
RawSums pair_sums(const Model& m, const SliceContext& ctx, double x,
                  bool want_flux, bool want_sink) {
  thread_local std::vector<std::complex<double>> amp;
  thread_local std::vector<std::complex<double>> amp_x;  // (x - c_i) * a_i

  const auto& centers = m.grating.centers;
  const int n_slits = m.grating.n_slits;
  const double d = m.grating.period;
  const double radius = std::sqrt(ctx.basis.cutoff_r2);

  int lo = 0, hi = n_slits;
  if (n_slits > 1) {
    lo = std::clamp(static_cast<int>(std::floor((x - radius - centers[0]) / d)), 0,
                    n_slits);
    hi = std::clamp(static_cast<int>(std::ceil((x + radius - centers[0]) / d)) + 1, 0,
                    n_slits);
  }
  RawSums out;
  if (lo >= hi) return out;

  const int count = hi - lo;
  amp.resize(count);
  if (want_flux) amp_x.resize(count);
  for (int i = 0; i < count; ++i) {
    const double c = centers[lo + i];
    amp[i] = ctx.basis.amplitude(c, x);
    // the mode gradient, rounded exactly as the per-slit operation rounds it
    if (want_flux) amp_x[i] = ctx.basis.grad_coeff * (x - c) * amp[i];
  }

  long double c0 = 0.0;
  for (int i = 0; i < count; ++i) c0 += std::norm(amp[i]);
  out.rho = c0;

  long double flux = 0.0;
  if (want_flux)
    for (int i = 0; i < count; ++i) flux += (amp_x[i] * std::conj(amp[i])).imag();

  const int m_top = std::min(ctx.m_max, count - 1);
  for (int off = 1; off <= m_top; ++off) {
    const double w = ctx.weight(off);
    long double c_re = 0.0;
    long double uv_im = 0.0;
    for (int i = off; i < count; ++i) {
      c_re += (amp[i] * std::conj(amp[i - off])).real();
      if (want_flux) {
        uv_im += (amp_x[i] * std::conj(amp[i - off])).imag();
        uv_im += (amp_x[i - off] * std::conj(amp[i])).imag();
      }
    }
    out.rho += 2.0L * w * c_re;
    if (want_flux) flux += w * uv_im;
    if (want_sink) {
      const double sep = off * d;
      out.sink += w * (2.0L * c_re) * sep * sep;
    }
  }
  out.flux = flux;
  return out;
}

FieldSample sample_from_sums(const Model& m, const SliceContext& ctx,
                             const RawSums& s) {
  const int n_slits = m.grating.n_slits;
  FieldSample f;
  f.rho = static_cast<double>(s.rho) / n_slits;
  f.current = static_cast<double>(s.flux) / (n_slits * m.beam.k);
  f.valid = f.rho >= 1e-12 * ctx.floor_scale;
  if (f.valid) {
    f.v_eff = f.current / f.rho;
    f.kx_over_k0 = m.beam.k * f.v_eff / m.k0;
  } else {
    f.v_eff = quiet_nan;
    f.kx_over_k0 = quiet_nan;
  }
  return f;
}

void check_lambda(double Lambda) {
  if (Lambda < 0.0) throw std::domain_error("Lambda must be nonnegative");
}

}  // namespace

double damping_factor(const Model& m, int n, int nprime, double z, double Lambda) {
  if (n < 1 || n > m.grating.n_slits || nprime < 1 || nprime > m.grating.n_slits)
    throw std::domain_error("damping_factor: slit index out of range");
  if (z < 0.0) throw std::domain_error("damping_factor: z must be nonnegative");
  check_lambda(Lambda);
  if (n == nprime) return 1.0;
  // x_n - x_n' = (n - n') d on the uniform lattice, exactly
  const double lz = Lambda * z;
  const double sep = (n - nprime) * m.grating.period;
  return std::exp(-lz * sep * sep);
}

double density(const Model& m, double x, double z, double Lambda) {
  check_lambda(Lambda);
  const SliceContext ctx = SliceContext::at(m, z, Lambda);
  return static_cast<double>(pair_sums(m, ctx, x, false, false).rho) /
         m.grating.n_slits;
}

double incoherent_density(const Model& m, double x, double z) {
  const ModeBasis b = ModeBasis::at(m, z);
  long double sum = 0.0;
  for (double c : m.grating.centers) sum += std::norm(b.amplitude(c, x));
  return static_cast<double>(sum) / m.grating.n_slits;
}

double current(const Model& m, double x, double z, double Lambda) {
  check_lambda(Lambda);
  const SliceContext ctx = SliceContext::at(m, z, Lambda);
  return static_cast<double>(pair_sums(m, ctx, x, true, false).flux) /
         (m.grating.n_slits * m.beam.k);
}

double continuity_sink(const Model& m, double x, double z, double Lambda) {
  check_lambda(Lambda);
  const SliceContext ctx = SliceContext::at(m, z, Lambda);
  const RawSums s = pair_sums(m, ctx, x, false, true);
  return -Lambda * static_cast<double>(s.sink) / m.grating.n_slits;
}

FieldSample field_sample(const Model& m, double x, double z, double Lambda) {
  check_lambda(Lambda);
  const SliceContext ctx = SliceContext::at(m, z, Lambda);
  return sample_from_sums(m, ctx, pair_sums(m, ctx, x, true, false));
}

std::optional<double> drift_velocity(const Model& m, double x, double z,
                                     double Lambda) {
  const FieldSample f = field_sample(m, x, z, Lambda);
  if (!f.valid) return std::nullopt;
  return f.v_eff;
}

std::optional<double> transverse_momentum(const Model& m, double x, double z,
                                          double Lambda) {
  const FieldSample f = field_sample(m, x, z, Lambda);
  if (!f.valid) return std::nullopt;
  return f.kx_over_k0;
}

double drift_velocity_cosine_form(const Model& m, double x, double z,
                                  double Lambda) {
  check_lambda(Lambda);
  const ModeBasis b = ModeBasis::at(m, z);
  const auto& c = m.grating.centers;
  const int n_slits = m.grating.n_slits;
  const double s0 = m.grating.sigma0;
  const double k = m.beam.k;
  const double inv_4sz2 = 1.0 / (4.0 * b.sigma_z_sq);
  const double phase_coeff = z / (8.0 * k * s0 * s0 * b.sigma_z_sq);
  const double lz = Lambda * z;

  long double num = 0.0, den = 0.0;
  for (int n = 0; n < n_slits; ++n) {
    const double un = x - c[n];
    const double en = un * un * inv_4sz2;
    if (en > mode_exponent_cutoff) continue;
    for (int np = 0; np < n_slits; ++np) {
      const double up = x - c[np];
      const double ep = up * up * inv_4sz2;
      if (ep > mode_exponent_cutoff) continue;
      const double sep = c[n] - c[np];
      const double weight = std::exp(-(en + ep) - lz * sep * sep);
      const double phi = phase_coeff * (un * un - up * up);
      num += (z * std::cos(phi) - 2.0 * k * s0 * s0 * std::sin(phi)) * un * weight;
      den += std::cos(phi) * weight;
    }
  }
  const double pref = 1.0 / (4.0 * k * k * s0 * s0 * b.sigma_z_sq);
  return pref * static_cast<double>(num / den);
}

namespace {

void fill_derived_row(const Model& m, FieldGrid& g, int iz) {
  const int nx = g.grid.nx;
  const std::size_t base = g.index(iz, 0);
  double slice_max = 0.0;
  for (int ix = 0; ix < nx; ++ix) slice_max = std::max(slice_max, g.rho[base + ix]);
  const double floor = 1e-12 * slice_max;
  for (int ix = 0; ix < nx; ++ix) {
    const std::size_t idx = base + ix;
    const bool ok = g.rho[idx] >= floor && slice_max > 0.0;
    g.valid[idx] = ok ? 1 : 0;
    if (g.has(ch_velocity) || g.has(ch_momentum)) {
      const double v = ok ? g.current[idx] / g.rho[idx] : quiet_nan;
      if (g.has(ch_velocity)) g.v_eff[idx] = v;
      if (g.has(ch_momentum)) g.kx[idx] = ok ? m.beam.k * v / m.k0 : quiet_nan;
    }
  }
}

FieldGrid make_grid_storage(const SimulationGrid& grid, unsigned channels) {
  FieldGrid g;
  g.grid = grid;
  g.channels = channels | ch_density;
  const std::size_t total = static_cast<std::size_t>(grid.nz) * grid.nx;
  g.rho.resize(total);
  g.valid.resize(total);
  const bool need_current =
      (channels & ch_current) || (channels & ch_velocity) || (channels & ch_momentum);
  if (need_current) g.current.resize(total);
  if (channels & ch_velocity) g.v_eff.resize(total);
  if (channels & ch_momentum) g.kx.resize(total);
  return g;
}

}  // namespace

FieldGrid evaluate_grid(const Model& m, const SimulationGrid& grid, double Lambda,
                        unsigned channels, bool parallel) {
  check_lambda(Lambda);
  FieldGrid g = make_grid_storage(grid, channels);
  const bool want_flux = !g.current.empty();

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#else
  (void)parallel;
#endif
  for (int iz = 0; iz < grid.nz; ++iz) {
    const SliceContext ctx = SliceContext::at(m, grid.z(iz), Lambda);
    for (int ix = 0; ix < grid.nx; ++ix) {
      const RawSums s = pair_sums(m, ctx, grid.x(ix), want_flux, false);
      const std::size_t idx = g.index(iz, ix);
      g.rho[idx] = static_cast<double>(s.rho) / m.grating.n_slits;
      if (want_flux)
        g.current[idx] = static_cast<double>(s.flux) / (m.grating.n_slits * m.beam.k);
    }
    fill_derived_row(m, g, iz);
  }
  return g;
}

FieldSample evaluate_point_reference(const Model& m, double x, double z,
                                     double Lambda) {
  check_lambda(Lambda);
  const ModeBasis b = ModeBasis::at(m, z);
  const auto& c = m.grating.centers;
  const int n_slits = m.grating.n_slits;
  const double lz = Lambda * z;

  long double rho = 0.0, flux = 0.0;
  for (int n = 0; n < n_slits; ++n) {
    const std::complex<double> an = b.amplitude(c[n], x);
    const std::complex<double> gn = b.grad_coeff * (x - c[n]) * an;
    for (int np = 0; np < n_slits; ++np) {
      const std::complex<double> anp = b.amplitude(c[np], x);
      const double sep = (n - np) * m.grating.period;
      const double w = (n == np) ? 1.0 : std::exp(-lz * sep * sep);
      rho += w * (an * std::conj(anp)).real();
      flux += w * (gn * std::conj(anp)).imag();
    }
  }
  // rebuild the slice context only for the shared floor convention
  const SliceContext ctx = SliceContext::at(m, z, Lambda);
  RawSums s;
  s.rho = rho;
  s.flux = flux;
  return sample_from_sums(m, ctx, s);
}

FieldGrid evaluate_grid_reference(const Model& m, const SimulationGrid& grid,
                                  double Lambda, unsigned channels) {
  check_lambda(Lambda);
  FieldGrid g = make_grid_storage(grid, channels);
  const bool want_flux = !g.current.empty();
  for (int iz = 0; iz < grid.nz; ++iz) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const FieldSample f = evaluate_point_reference(m, grid.x(ix), grid.z(iz), Lambda);
      const std::size_t idx = g.index(iz, ix);
      g.rho[idx] = f.rho;
      if (want_flux) g.current[idx] = f.current;
    }
    fill_derived_row(m, g, iz);
  }
  return g;
}

}  // namespace talbot

#include "talbot/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "talbot/decoherence.hpp"
#include "talbot/oracle.hpp"

namespace talbot {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

std::vector<double> density_row(const Model& m, double Lambda,
                                std::span<const double> xs, double z) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = density(m, xs[i], z, Lambda);
  return out;
}

}  // namespace

RevivalReport revival_correlation(const Model& m, double Lambda, double z_probe,
                                  double window_half_width, double shift,
                                  int n_samples) {
  if (z_probe < 0.0)
    throw std::domain_error("revival_correlation: z_probe must be nonnegative");
  if (!(window_half_width > 0.0))
    throw std::domain_error("revival_correlation: window must be positive");
  n_samples = std::max(n_samples, 512);

  const auto xs = linspace(-window_half_width, window_half_width, n_samples);
  std::vector<double> probe(n_samples), reference(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    probe[i] = density(m, xs[i], z_probe, Lambda);
    reference[i] = density(m, xs[i] - shift, 0.0, Lambda);
  }
  RevivalReport r;
  r.z_probe = z_probe;
  r.window_half_width = window_half_width;
  r.shift = shift;
  r.pearson = pearson_correlation(probe, reference);
  r.defined = std::isfinite(r.pearson);
  if (!r.defined) r.pearson = 0.0;
  return r;
}

CrossingResult coherence_crossing(const Model& m, double Lambda) {
  if (!(Lambda > 0.0))
    throw std::domain_error("coherence_crossing: Lambda must be positive");
  const double s0 = m.grating.sigma0;
  const double k = m.beam.k;
  auto gap = [&](double z) { return coherence_range(Lambda, z) - beam_width(s0, k, z); };

  double lo = 1e-6 * m.z_talbot, hi = 1e3 * m.z_talbot;
  double g_lo = gap(lo), g_hi = gap(hi);
  if (g_lo == 0.0) return {true, lo};
  if (g_hi == 0.0) return {true, hi};
  if ((g_lo > 0.0) == (g_hi > 0.0)) return {false, 0.0};

  while (hi - lo > 1e-3 * m.z_talbot) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = gap(mid);
    if (g_mid == 0.0) return {true, mid};
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return {true, 0.5 * (lo + hi)};
}

std::vector<OrderReport> diffraction_order_positions(const Model& m, double Lambda,
                                                     double z, int max_order,
                                                     int n_samples) {
  if (!(z >= 10.0 * m.z_talbot))
    throw std::domain_error("diffraction_order_positions: requires far field z >= 10 z_T");
  if (max_order < 1)
    throw std::domain_error("diffraction_order_positions: max_order must be >= 1");

  const double spacing = m.beam.lambda_dB * z / m.grating.period;
  const double half = (max_order + 0.75) * spacing;
  const auto xs = linspace(-half, half, n_samples);
  const double dx = xs[1] - xs[0];
  const auto rho = density_row(m, Lambda, xs, z);
  const double slice_max = *std::max_element(rho.begin(), rho.end());

  // interior local maxima (strict on the left, ties resolved to the left)
  std::vector<int> peaks;
  for (int i = 1; i + 1 < n_samples; ++i)
    if (rho[i] > rho[i - 1] && rho[i] >= rho[i + 1]) peaks.push_back(i);

  std::vector<OrderReport> out;
  for (int ell = -max_order; ell <= max_order; ++ell) {
    OrderReport r;
    r.order = ell;
    r.predicted_x = ell * spacing;
    int best = -1;
    double best_dist = 0.5 * spacing;  // search window: half an order spacing
    for (int i : peaks) {
      const double dist = std::abs(xs[i] - r.predicted_x);
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    if (best < 0) {
      r.note = "no local maximum within half an order spacing";
    } else if (rho[best] < 1e-6 * slice_max) {
      r.note = "peak below noise floor";
    } else {
      const double denom = rho[best - 1] - 2.0 * rho[best] + rho[best + 1];
      r.peak_x = xs[best];
      if (denom < 0.0)
        r.peak_x += 0.5 * (rho[best - 1] - rho[best + 1]) / denom * dx;
      r.relative_error = r.predicted_x != 0.0
                             ? std::abs(r.peak_x - r.predicted_x) / std::abs(r.predicted_x)
                             : std::abs(r.peak_x);
      r.found = true;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Plateau> detect_momentum_plateaus(const Model& m, double Lambda,
                                              double z, double density_cut,
                                              double half_span, int n_samples) {
  if (!(z >= 10.0 * m.z_talbot))
    throw std::domain_error("detect_momentum_plateaus: requires far field z >= 10 z_T");
  if (!(density_cut > 0.0 && density_cut < 1.0))
    throw std::domain_error("detect_momentum_plateaus: density_cut must be in (0,1)");
  if (half_span <= 0.0)
    half_span = 2.875 * m.beam.lambda_dB * z / m.grating.period;

  const auto xs = linspace(-half_span, half_span, n_samples);
  const double dx = xs[1] - xs[0];
  std::vector<double> rho(n_samples), kx(n_samples);
  std::vector<bool> valid(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const FieldSample f = field_sample(m, xs[i], z, Lambda);
    rho[i] = f.rho;
    kx[i] = f.kx_over_k0;
    valid[i] = f.valid;
  }
  const double slice_max = *std::max_element(rho.begin(), rho.end());

  std::vector<double> slope(n_samples, 0.0);
  std::vector<bool> slope_ok(n_samples, false);
  std::vector<double> abs_slopes;
  for (int i = 1; i + 1 < n_samples; ++i) {
    if (!valid[i - 1] || !valid[i] || !valid[i + 1]) continue;
    slope[i] = (kx[i + 1] - kx[i - 1]) / (2.0 * dx);
    slope_ok[i] = true;
    abs_slopes.push_back(std::abs(slope[i]));
  }
  if (abs_slopes.empty()) return {};
  const std::size_t mid = abs_slopes.size() / 2;
  std::nth_element(abs_slopes.begin(), abs_slopes.begin() + mid, abs_slopes.end());
  const double median = abs_slopes[mid];

  std::vector<Plateau> out;
  int run_start = -1;
  long double level_sum = 0.0;
  auto flush = [&](int end) {
    const int count = end - run_start;
    if (run_start >= 0 && count >= 3)
      out.push_back(Plateau{static_cast<double>(level_sum / count), xs[run_start],
                            xs[end - 1], count});
    run_start = -1;
    level_sum = 0.0;
  };
  for (int i = 0; i < n_samples; ++i) {
    const bool qualifies = slope_ok[i] && std::abs(slope[i]) < 0.1 * median &&
                           rho[i] > density_cut * slice_max;
    if (qualifies) {
      if (run_start < 0) run_start = i;
      level_sum += kx[i];
    } else {
      flush(i);
    }
  }
  flush(n_samples);
  return out;
}

double multislit_reference(const Model& m, double x, double z) {
  if (!(z > 0.0)) throw std::domain_error("multislit_reference: z must be positive");
  const int n = m.grating.n_slits;
  const double u = pi * m.grating.period * x / (m.beam.lambda_dB * z);
  const double s = std::sin(u);
  double array_factor;
  if (std::abs(s) < 1e-9) {
    array_factor = static_cast<double>(n) * n;  // principal maximum limit
  } else {
    const double r = std::sin(n * u) / s;
    array_factor = r * r;
  }
  const double ks = m.beam.k * m.grating.sigma0 * x / z;
  return std::exp(-2.0 * ks * ks) * array_factor;
}

std::vector<std::pair<double, double>> onaxis_profile(const Model& m, double Lambda,
                                                      std::span<const double> z_list) {
  std::vector<std::pair<double, double>> out;
  out.reserve(z_list.size());
  for (double z : z_list) {
    if (z < 0.0) throw std::domain_error("onaxis_profile: z must be nonnegative");
    out.emplace_back(z, density(m, 0.0, z, Lambda));
  }
  return out;
}

}  // namespace talbot

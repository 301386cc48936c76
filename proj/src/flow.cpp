#include "talbot/flow.hpp"

#include <algorithm>
#include <cmath>

namespace talbot {

namespace {

struct Velocity {
  double v = 0.0;
  bool valid = false;
};

Velocity velocity_at(const Model& m, double Lambda, double x, double z) {
  const FieldSample f = field_sample(m, x, z, Lambda);
  return Velocity{f.valid ? f.v_eff : 0.0, f.valid};
}

// One classical RK4 step; false if any stage lands in an invalid region.
bool rk4_step(const Model& m, double Lambda, double z, double h, double x,
              double& x_out) {
  const Velocity k1 = velocity_at(m, Lambda, x, z);
  if (!k1.valid) return false;
  const Velocity k2 = velocity_at(m, Lambda, x + 0.5 * h * k1.v, z + 0.5 * h);
  if (!k2.valid) return false;
  const Velocity k3 = velocity_at(m, Lambda, x + 0.5 * h * k2.v, z + 0.5 * h);
  if (!k3.valid) return false;
  const Velocity k4 = velocity_at(m, Lambda, x + h * k3.v, z + h);
  if (!k4.valid) return false;
  x_out = x + h / 6.0 * (k1.v + 2.0 * (k2.v + k3.v) + k4.v);
  return true;
}

}  // namespace

SeedEnsemble seed_ensemble(const GratingSpec& grating, int per_slit) {
  if (per_slit < 1) throw std::domain_error("seed_ensemble: per_slit must be >= 1");
  SeedEnsemble e;
  e.per_slit = per_slit;
  e.seeds.reserve(static_cast<std::size_t>(grating.n_slits) * per_slit);
  for (double c : grating.centers) {
    if (per_slit == 1) {
      e.seeds.push_back(c);
      continue;
    }
    for (int j = 0; j < per_slit; ++j)
      e.seeds.push_back(c + grating.slit_width *
                                (static_cast<double>(j) / (per_slit - 1) - 0.5));
  }
  return e;
}

Streamline integrate_streamline(const Model& m, double Lambda, double seed_x,
                                double z_start, double z_end,
                                StepControl control) {
  if (!(z_start >= 0.0) || !(z_start < z_end))
    throw std::domain_error("integrate_streamline: need 0 <= z_start < z_end");
  if (!std::isfinite(seed_x))
    throw std::domain_error("integrate_streamline: seed must be finite");

  const double base =
      control.base_step > 0.0 ? control.base_step : m.z_talbot / 2000.0;
  const double tol = control.tol > 0.0 ? control.tol : 1e-4 * m.grating.period;
  const long n_out = std::max<long>(1, std::lround((z_end - z_start) / base));
  const double h_base = (z_end - z_start) / n_out;

  Streamline line;
  line.seed_x = seed_x;
  line.z_samples.reserve(n_out + 1);
  line.x_samples.reserve(n_out + 1);
  line.z_samples.push_back(z_start);
  line.x_samples.push_back(seed_x);

  double x = seed_x;
  int halvings = 0;
  for (long i = 0; i < n_out; ++i) {
    const double z0 = z_start + i * (z_end - z_start) / n_out;
    const double z1 = z_start + (i + 1) * (z_end - z_start) / n_out;
    double z = z0;
    long done = 0;  // substeps completed at the current halving level
    while (done < (1L << halvings)) {
      const double h = h_base / (1L << halvings);
      double x_full, x_half, x_two;
      const bool ok = rk4_step(m, Lambda, z, h, x, x_full) &&
                      rk4_step(m, Lambda, z, 0.5 * h, x, x_half) &&
                      rk4_step(m, Lambda, z + 0.5 * h, 0.5 * h, x_half, x_two);
      if (!ok) {
        line.terminated_early = true;
        line.reason = StreamlineStop::entered_invalid_region;
        return line;
      }
      const double err = std::abs(x_two - x_full) / 15.0;
      if (err > tol) {
        if (halvings >= control.max_halvings) {
          line.terminated_early = true;
          line.reason = StreamlineStop::step_underflow;
          return line;
        }
        ++halvings;
        done *= 2;
        continue;
      }
      x = x_two;
      z += h;
      ++done;
      if (err < tol / 64.0 && halvings > 0 && done % 2 == 0) {
        --halvings;
        done /= 2;
      }
    }
    line.z_samples.push_back(z1);
    line.x_samples.push_back(x);
  }
  return line;
}

std::vector<Streamline> integrate_ensemble(const Model& m, double Lambda,
                                           const SeedEnsemble& ensemble,
                                           double z_start, double z_end,
                                           StepControl control, bool parallel) {
  std::vector<Streamline> lines(ensemble.seeds.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#else
  (void)parallel;
#endif
  for (long i = 0; i < static_cast<long>(ensemble.seeds.size()); ++i)
    lines[i] =
        integrate_streamline(m, Lambda, ensemble.seeds[i], z_start, z_end, control);
  return lines;
}

OrderingReport ordering_check(const std::vector<Streamline>& lines) {
  OrderingReport report;
  if (lines.size() < 2) return report;

  const Streamline* longest = &lines[0];
  for (const auto& l : lines)
    if (l.z_samples.size() > longest->z_samples.size()) longest = &l;
  for (const auto& l : lines) {
    for (std::size_t t = 0; t < l.z_samples.size(); ++t)
      if (l.z_samples[t] != longest->z_samples[t])
        throw std::domain_error("ordering_check: streamlines on mismatched z grids");
  }

  for (std::size_t t = 0; t < longest->z_samples.size(); ++t) {
    bool have_prev = false;
    double prev_x = 0.0;
    for (const auto& l : lines) {
      if (t >= l.z_samples.size()) continue;  // terminated before this z
      const double xv = l.x_samples[t];
      if (have_prev && prev_x > xv) {
        ++report.crossings;
        if (!report.first_crossing_z)
          report.first_crossing_z = longest->z_samples[t];
      }
      prev_x = xv;
      have_prev = true;
    }
  }
  return report;
}

}  // namespace talbot

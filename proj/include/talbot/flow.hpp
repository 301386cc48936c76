#pragma once

#include <optional>
#include <vector>

#include "talbot/decoherence.hpp"
#include "talbot/model.hpp"

namespace talbot {

/// Step control for the streamline integrator. Zero-valued fields resolve to
/// the model defaults: base_step = z_T/2000, tol = 1e-4 * d. The substep is
/// halved while the step-doubling error estimate exceeds tol, down to
/// base_step / 2^max_halvings.
struct StepControl {
  double base_step = 0.0;
  double tol = 0.0;
  int max_halvings = 10;
};

enum class StreamlineStop { completed, entered_invalid_region, step_underflow };

struct Streamline {
  double seed_x = 0.0;
  std::vector<double> z_samples;  // strictly increasing, on the base-step lattice
  std::vector<double> x_samples;  // same count, x_samples[0] == seed_x
  bool terminated_early = false;
  StreamlineStop reason = StreamlineStop::completed;
};

struct SeedEnsemble {
  std::vector<double> seeds;  // slit-major order, ascending within each slit
  int per_slit = 0;
};

/// per_slit seeds per opening, evenly spaced across the geometric slit width w
/// and centered on each slit; a single midpoint seed when per_slit == 1.
SeedEnsemble seed_ensemble(const GratingSpec& grating, int per_slit);

/// Integrate dx/dz = v_eff(x, z) with classical RK4 plus step-doubling error
/// control. Terminates early (flagged, not thrown) on entering a sub-floor
/// density region or on reaching the minimum substep.
Streamline integrate_streamline(const Model& m, double Lambda, double seed_x,
                                double z_start, double z_end,
                                StepControl control = {});

/// Independent integration of every seed; deterministic given parameters.
std::vector<Streamline> integrate_ensemble(const Model& m, double Lambda,
                                           const SeedEnsemble& ensemble,
                                           double z_start, double z_end,
                                           StepControl control = {},
                                           bool parallel = true);

struct OrderingReport {
  long crossings = 0;
  std::optional<double> first_crossing_z;
};

/// Counts adjacent-pair order inversions of x at each shared z sample among
/// streamlines still valid there. All inputs must share one z lattice.
OrderingReport ordering_check(const std::vector<Streamline>& lines);

}  // namespace talbot

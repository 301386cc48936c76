#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "talbot/model.hpp"

namespace talbot {

struct RevivalReport {
  double z_probe = 0.0;
  double window_half_width = 0.0;
  double shift = 0.0;
  double pearson = 0.0;
  bool defined = true;  // false for degenerate (constant) profiles
};

/// Pearson correlation between rho(. , z_probe) and rho(. - shift, 0) on a
/// common lattice of n_samples >= 512 points over |x| <= window_half_width.
RevivalReport revival_correlation(const Model& m, double Lambda, double z_probe,
                                  double window_half_width, double shift,
                                  int n_samples = 1024);

struct CrossingResult {
  bool found = false;
  double z_star = 0.0;
};

/// Propagation distance where the coherence range 1/sqrt(Lambda z) falls to
/// the single-mode width sigma_z, by bisection on [1e-6, 1e3] Talbot lengths
/// to 1e-3 z_T. Flagged not-found when the bracket has no sign change.
CrossingResult coherence_crossing(const Model& m, double Lambda);

struct OrderReport {
  int order = 0;
  double predicted_x = 0.0;  // ell * lambda z / d
  double peak_x = 0.0;
  double relative_error = 0.0;
  bool found = false;
  std::string note;
};

/// Far-field diffraction order positions: the local density maximum nearest
/// each predicted x_ell, refined parabolically. An order is omitted (with a
/// note) when no local maximum lies within half an order spacing of the
/// prediction. Requires z >= 10 z_T.
std::vector<OrderReport> diffraction_order_positions(const Model& m, double Lambda,
                                                     double z, int max_order,
                                                     int n_samples = 12001);

struct Plateau {
  double level = 0.0;  // mean k_x/k0 over the segment
  double x_begin = 0.0;
  double x_end = 0.0;
  int n_points = 0;
};

/// Step-like segments of the transverse-momentum profile at fixed z: maximal
/// runs where |d(kx/k0)/dx| is below 10% of its slice median and the density
/// exceeds density_cut x (slice max). half_span <= 0 sizes the window to
/// cover the orders up to max|ell| ~ 2.
std::vector<Plateau> detect_momentum_plateaus(const Model& m, double Lambda,
                                              double z, double density_cut,
                                              double half_span = 0.0,
                                              int n_samples = 9201);

/// Textbook N-slit far-field envelope-times-array-factor, normalized to N^2 at
/// the principal maxima (removable singularities filled by the N^2 limit).
double multislit_reference(const Model& m, double x, double z);

/// rho(0, z) for each listed z.
std::vector<std::pair<double, double>> onaxis_profile(const Model& m, double Lambda,
                                                      std::span<const double> z_list);

}  // namespace talbot

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "talbot/model.hpp"
#include "talbot/wavefield.hpp"

namespace talbot {

// Inter-slit damping weights below this are dropped from the offset sums.
inline constexpr double damping_cutoff = 1e-16;

/// Coherence weight D_nn' = exp(-Lambda z (x_n - x_n')^2) between the modes of
/// slits n and n' (1-based). Diagonal weights are exactly 1.
double damping_factor(const Model& m, int n, int nprime, double z, double Lambda);

/// Decohered probability density (1/N) sum_{n,n'} Re[phi_n phi_n'*] D_nn'.
double density(const Model& m, double x, double z, double Lambda);

/// Diagonal-only limit (1/N) sum_n |phi_n|^2, reached when all off-diagonal
/// coherence is suppressed.
double incoherent_density(const Model& m, double x, double z);

/// Transverse probability flux J = (1/(N k)) sum_{n,n'} Im[phi_n'* dphi_n/dx] D_nn'.
double current(const Model& m, double x, double z, double Lambda);

/// Damping sink entering the continuity balance drho/dz + dJ/dx:
/// -(1/N) sum_{n,n'} Lambda (x_n - x_n')^2 Re[phi_n phi_n'*] D_nn'.
/// Zero when Lambda = 0, where continuity holds exactly.
double continuity_sink(const Model& m, double x, double z, double Lambda);

struct FieldSample {
  double rho = 0.0;         // probability density [1/m]
  double current = 0.0;     // transverse flux
  double v_eff = 0.0;       // drift dx/dz = current/rho, dimensionless
  double kx_over_k0 = 0.0;  // k v_eff / k0
  bool valid = false;       // false where rho sits below the node floor
};

/// Density, flux and drift at one point through the offset-factorized pair sum.
FieldSample field_sample(const Model& m, double x, double z, double Lambda);

/// Drift velocity dx/dz; empty in node regions where the density is below floor.
std::optional<double> drift_velocity(const Model& m, double x, double z, double Lambda);

/// Local transverse wavenumber ratio k_x/k0 = k v_eff / k0; empty like drift_velocity.
std::optional<double> transverse_momentum(const Model& m, double x, double z, double Lambda);

/// Decohered drift velocity through the explicit cosine/sine pair-ratio form;
/// independent algebraic route kept for cross-checking the complex-product path.
double drift_velocity_cosine_form(const Model& m, double x, double z, double Lambda);

enum GridChannel : unsigned {
  ch_density = 1u << 0,
  ch_current = 1u << 1,
  ch_velocity = 1u << 2,
  ch_momentum = 1u << 3,
};

struct FieldGrid {
  SimulationGrid grid;
  unsigned channels = 0;
  std::vector<double> rho;      // always filled, nz*nx row-major (rows = z)
  std::vector<double> current;  // if ch_current
  std::vector<double> v_eff;    // if ch_velocity, NaN where invalid
  std::vector<double> kx;       // if ch_momentum, NaN where invalid
  std::vector<std::uint8_t> valid;

  std::size_t index(int iz, int ix) const {
    return static_cast<std::size_t>(iz) * grid.nx + ix;
  }
  bool has(GridChannel c) const { return channels & c; }
};

/// Evaluate the requested channels on a grid. Uses the offset factorization
/// (D depends only on the slit separation on a uniform grating) and runs rows
/// in parallel. Velocity validity uses floor = 1e-12 x (max rho on the z slice).
FieldGrid evaluate_grid(const Model& m, const SimulationGrid& grid, double Lambda,
                        unsigned channels, bool parallel = true);

/// Serial reference: the O(N^2) pair sum transcribed term by term from the
/// per-slit operations. Kept as the correctness baseline for the factorized
/// kernel and for the benchmark.
FieldSample evaluate_point_reference(const Model& m, double x, double z, double Lambda);
FieldGrid evaluate_grid_reference(const Model& m, const SimulationGrid& grid,
                                  double Lambda, unsigned channels);

}  // namespace talbot

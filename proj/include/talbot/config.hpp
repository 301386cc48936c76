#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "talbot/model.hpp"

namespace talbot {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fully resolved run configuration, SI units throughout. Flat key = value
/// text with section-prefixed keys and mandatory unit suffixes on dimensional
/// quantities; unknown keys are rejected. The manifest emitted by every run is
/// itself a loadable config.
struct RunConfig {
  // beam.*
  double lambda_dB;
  // grating.*
  double period, slit_width, sigma0;  // sigma0 < 0 means "auto": slit_width/4
  int n_slits;
  // decoherence.*
  double Lambda;
  std::vector<double> Lambda_values;  // optional ladder for streamline runs
  // grid.*
  double x_min, x_max, z_min, z_max;
  int nx, nz;
  // ensemble.*
  int per_slit;
  double ens_z_min, ens_z_max;
  double base_step;  // <= 0 means "auto": z_T / 2000
  // outputs.*
  std::vector<std::string> channels;  // of: density,current,velocity,momentum
  bool raw;
  // render.*
  double clip;
  std::string colormap;  // "gray" | "bwr"
  // diagnose.*
  std::vector<std::string> checks;  // of: crossing,revival,orders,plateaus,onaxis
  double z_far;
  int max_order;
  double density_cut;
  double revival_threshold, order_tolerance, plateau_tolerance;
  double onaxis_z_max;
  int onaxis_samples;

  static RunConfig defaults();
  void apply_far_field_preset();

  void load_file(const std::string& path);                             // throws ConfigError
  void apply_override(const std::string& key, const std::string& value);  // "--set"
  void finalize();  // resolve auto fields, validate cross-field invariants

  Model make_model() const;
  SimulationGrid make_grid() const;

  /// Manifest body: every key with its resolved SI value, loadable as config.
  std::string serialize() const;
};

}  // namespace talbot

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "talbot/config.hpp"
#include "talbot/diagnostics.hpp"
#include "talbot/io.hpp"
#include "talbot/units.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace talbot;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> sets;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "configuration file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--set", opts.sets, "override: key=value (value with unit)");
  cmd->add_option("--threads", opts.threads, "worker threads (0 = runtime default)");
}

RunConfig build_config(const CommonOpts& opts, const std::string& command,
                       std::vector<std::string>& warnings) {
  RunConfig cfg = RunConfig::defaults();
  if (command == "momentum") cfg.channels = {"momentum"};
  if (command == "farfield") cfg.apply_far_field_preset();
  if (!opts.config_path.empty()) cfg.load_file(opts.config_path);
  for (const auto& s : opts.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + s + "'");
    cfg.apply_override(s.substr(0, eq), s.substr(eq + 1));
  }
  cfg.finalize();
  if (cfg.make_model().grating.overlap_warning)
    warnings.push_back("adjacent Gaussian modes overlap above 1e-3; per-slit "
                       "normalization is perturbed");
  return cfg;
}

unsigned channel_mask(const RunConfig& cfg) {
  unsigned mask = 0;
  for (const auto& c : cfg.channels) {
    if (c == "density") mask |= ch_density;
    if (c == "current") mask |= ch_current;
    if (c == "velocity") mask |= ch_velocity;
    if (c == "momentum") mask |= ch_momentum;
  }
  return mask;
}

GridChannel channel_id(const std::string& name) {
  if (name == "density") return ch_density;
  if (name == "current") return ch_current;
  if (name == "velocity") return ch_velocity;
  return ch_momentum;
}

struct ManifestInfo {
  std::string command;
  std::vector<std::string> outputs;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
};

void write_manifest(const fs::path& dir, const RunConfig& cfg, const Model& m,
                    const ManifestInfo& info) {
  std::ostringstream out;
  out << "# talbotsim run manifest (loadable as a config file)\n";
  out << "# command: " << info.command << "\n";
  out << "# derived: k_m^-1 = " << units::format_full(m.beam.k)
      << "  z_talbot_m = " << units::format_full(m.z_talbot)
      << "  k0_m^-1 = " << units::format_full(m.k0) << "\n";
  for (const auto& o : info.outputs) out << "# output: " << o << "\n";
  for (const auto& n : info.notes) out << "# " << n << "\n";
  for (const auto& w : info.warnings) out << "# warning: " << w << "\n";
  out << cfg.serialize();
  write_text_file((dir / "manifest.txt").string(), out.str());
}

void emit_grid_outputs(const fs::path& dir, const RunConfig& cfg,
                       const FieldGrid& grid, ManifestInfo& info) {
  for (const auto& name : cfg.channels) {
    const std::string csv = name + ".csv";
    write_grid_csv((dir / csv).string(), grid, channel_id(name), name);
    info.outputs.push_back(csv);
    if (cfg.raw) {
      const std::string rawf = name + ".f64";
      write_grid_raw((dir / rawf).string(), grid, channel_id(name));
      info.outputs.push_back(rawf);
    }
  }
  if (channel_mask(cfg) & ch_density) {
    write_density_pgm((dir / "density.pgm").string(), grid);
    info.outputs.push_back("density.pgm");
  }
  if (channel_mask(cfg) & ch_momentum) {
    const std::size_t masked =
        write_momentum_ppm((dir / "momentum.ppm").string(), grid, cfg.clip, cfg.colormap);
    info.outputs.push_back("momentum.ppm");
    info.notes.push_back("masked_pixels: " + std::to_string(masked) +
                         " (momentum.ppm sentinel 0,100,0)");
    info.notes.push_back("momentum_clip: " + units::format_full(cfg.clip));
  }
}

int run_grid_command(const CommonOpts& opts, const std::string& command) {
  std::vector<std::string> warnings;
  RunConfig cfg = build_config(opts, command, warnings);
  const Model m = cfg.make_model();
  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);

  const FieldGrid grid = evaluate_grid(m, cfg.make_grid(), cfg.Lambda, channel_mask(cfg));
  ManifestInfo info{command, {}, {}, warnings};
  emit_grid_outputs(dir, cfg, grid, info);
  write_manifest(dir, cfg, m, info);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

std::string lambda_tag(double Lambda) {
  // display unit keeps ladder filenames short
  std::ostringstream ss;
  ss << Lambda / Lambda_mm_um2;
  return ss.str();
}

int run_streamlines(const CommonOpts& opts) {
  std::vector<std::string> warnings;
  RunConfig cfg = build_config(opts, "streamlines", warnings);
  const Model m = cfg.make_model();
  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);

  const SeedEnsemble seeds = seed_ensemble(m.grating, cfg.per_slit);
  StepControl control;
  control.base_step = cfg.base_step;

  std::vector<double> ladder =
      cfg.Lambda_values.empty() ? std::vector<double>{cfg.Lambda} : cfg.Lambda_values;
  const bool tagged = !cfg.Lambda_values.empty();

  ManifestInfo info{"streamlines", {}, {}, warnings};
  const SimulationGrid display = SimulationGrid::make(
      cfg.x_min, cfg.x_max, cfg.ens_z_min, cfg.ens_z_max, cfg.nx, cfg.nz);
  for (double Lambda : ladder) {
    const auto lines =
        integrate_ensemble(m, Lambda, seeds, cfg.ens_z_min, cfg.ens_z_max, control);
    const OrderingReport order = ordering_check(lines);
    long terminated = 0;
    for (const auto& l : lines) terminated += l.terminated_early ? 1 : 0;

    const std::string stem =
        tagged ? "streamlines_Lambda_" + lambda_tag(Lambda) : "streamlines";
    write_streamlines_csv((dir / (stem + ".csv")).string(), lines);
    info.outputs.push_back(stem + ".csv");

    const FieldGrid rho = evaluate_grid(m, display, Lambda, ch_density);
    write_streamline_overlay_ppm((dir / (stem + ".ppm")).string(), rho, lines);
    info.outputs.push_back(stem + ".ppm");

    std::ostringstream note;
    note << "crossings" << (tagged ? "_Lambda_" + lambda_tag(Lambda) : "") << ": "
         << order.crossings << "  terminated_early: " << terminated;
    info.notes.push_back(note.str());
  }
  write_manifest(dir, cfg, m, info);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int run_diagnose(const CommonOpts& opts) {
  std::vector<std::string> warnings;
  RunConfig cfg = build_config(opts, "diagnose", warnings);
  const Model m = cfg.make_model();
  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);

  std::ostringstream rep;
  rep << "# talbotsim diagnostics report\n";
  rep << "# z_talbot_m = " << units::format_full(m.z_talbot) << "\n";
  auto enabled = [&](const char* name) {
    for (const auto& c : cfg.checks)
      if (c == name) return true;
    return false;
  };

  ManifestInfo info{"diagnose", {"report.txt"}, {}, warnings};

  if (enabled("crossing")) {
    if (cfg.Lambda > 0.0) {
      const CrossingResult r = coherence_crossing(m, cfg.Lambda);
      if (r.found)
        rep << "crossing: z* = " << units::format_full(r.z_star) << " m = "
            << r.z_star / m.z_talbot << " z_T  [INFO]\n";
      else
        rep << "crossing: none inside [1e-6, 1e3] z_T  [INFO]\n";
    } else {
      rep << "crossing: skipped (Lambda = 0)\n";
    }
  }
  if (enabled("revival")) {
    const double win = 5.0 * m.grating.period;
    const RevivalReport full = revival_correlation(m, cfg.Lambda, m.z_talbot, win, 0.0);
    const RevivalReport half = revival_correlation(m, cfg.Lambda, 0.5 * m.z_talbot,
                                                   win, 0.5 * m.grating.period);
    rep << "revival: pearson(z_T) = " << full.pearson << "  ["
        << (full.defined && full.pearson >= cfg.revival_threshold ? "PASS" : "FAIL")
        << " >= " << cfg.revival_threshold << "]\n";
    rep << "revival: pearson(z_T/2, shift d/2) = " << half.pearson << "  ["
        << (half.defined && half.pearson >= cfg.revival_threshold ? "PASS" : "FAIL")
        << " >= " << cfg.revival_threshold << "]\n";
  }
  if (enabled("orders")) {
    const auto orders = diffraction_order_positions(m, cfg.Lambda, cfg.z_far, cfg.max_order);
    bool all_ok = true;
    for (const auto& o : orders) {
      if (!o.found) {
        rep << "order " << o.order << ": omitted (" << o.note << ")\n";
        continue;
      }
      const bool ok = o.relative_error <= cfg.order_tolerance;
      all_ok = all_ok && ok;
      rep << "order " << o.order << ": peak_x = " << units::format_full(o.peak_x)
          << " m, predicted " << units::format_full(o.predicted_x)
          << " m, rel_err = " << o.relative_error << "  [" << (ok ? "PASS" : "FAIL")
          << "]\n";
    }
    rep << "orders: " << (all_ok ? "PASS" : "FAIL") << " (tolerance "
        << cfg.order_tolerance << ")\n";
  }
  if (enabled("plateaus")) {
    const auto plateaus =
        detect_momentum_plateaus(m, cfg.Lambda, cfg.z_far, cfg.density_cut);
    bool all_ok = true;
    for (const auto& p : plateaus) {
      const double nearest = std::round(p.level);
      const bool ok = std::abs(p.level - nearest) <= cfg.plateau_tolerance;
      all_ok = all_ok && ok;
      rep << "plateau: level = " << p.level << " over ["
          << units::format_full(p.x_begin) << ", " << units::format_full(p.x_end)
          << "] m  [" << (ok ? "PASS" : "FAIL") << "]\n";
    }
    if (plateaus.empty()) rep << "plateau: none detected\n";
    rep << "plateaus: " << (all_ok ? "PASS" : "FAIL") << " (tolerance "
        << cfg.plateau_tolerance << ")\n";
  }
  if (enabled("onaxis")) {
    std::vector<double> zs(cfg.onaxis_samples);
    for (int i = 0; i < cfg.onaxis_samples; ++i)
      zs[i] = cfg.onaxis_z_max * i / (cfg.onaxis_samples - 1);
    const auto prof = onaxis_profile(m, cfg.Lambda, zs);
    std::ostringstream csv;
    csv << "# columns: z_m,rho_on_axis\n";
    for (const auto& [z, rho] : prof)
      csv << units::format_full(z) << "," << units::format_full(rho) << "\n";
    write_text_file((dir / "onaxis.csv").string(), csv.str());
    info.outputs.push_back("onaxis.csv");
    rep << "onaxis: " << prof.size() << " samples written  [INFO]\n";
  }

  write_text_file((dir / "report.txt").string(), rep.str());
  std::cout << rep.str();
  write_manifest(dir, cfg, m, info);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analytic matter-wave Talbot carpet and decoherence simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  CLI::App* carpet = app.add_subcommand("carpet", "density carpet over an (x, z) grid");
  CLI::App* momentum = app.add_subcommand("momentum", "transverse-momentum map k_x/k0");
  CLI::App* streamlines =
      app.add_subcommand("streamlines", "probability-flow streamline ensemble");
  CLI::App* farfield =
      app.add_subcommand("farfield", "carpet + momentum with far-field defaults");
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "quantitative checks and profiles");
  for (CLI::App* c : {carpet, momentum, streamlines, farfield, diagnose})
    add_common(c, opts);

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (opts.threads > 0) omp_set_num_threads(opts.threads);
#endif

  try {
    if (carpet->parsed()) return run_grid_command(opts, "carpet");
    if (momentum->parsed()) return run_grid_command(opts, "momentum");
    if (farfield->parsed()) return run_grid_command(opts, "farfield");
    if (streamlines->parsed()) return run_streamlines(opts);
    if (diagnose->parsed()) return run_diagnose(opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

#include "talbot/config.hpp"

#include <fstream>
#include <sstream>

#include "talbot/units.hpp"

namespace talbot {

namespace un = talbot::units;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_lambda_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  const auto sp = t.find_last_of(" \t");
  if (sp == std::string::npos)
    throw std::invalid_argument("localization-strength list needs a unit suffix");
  const double factor = un::lambda_unit_factor(trim(t.substr(sp + 1)));
  std::vector<double> out;
  for (const auto& item : split_list(t.substr(0, sp)))
    out.push_back(un::parse_number(item) * factor);
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

const std::vector<std::string> known_channels = {"density", "current", "velocity",
                                                 "momentum"};
const std::vector<std::string> known_checks = {"crossing", "revival", "orders",
                                               "plateaus", "onaxis"};

void check_names(const std::vector<std::string>& values,
                 const std::vector<std::string>& allowed, const char* what) {
  for (const auto& v : values) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || v == a;
    if (!ok) throw ConfigError(std::string("unknown ") + what + " '" + v + "'");
  }
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.lambda_dB = 16e-12;
  c.period = 0.4e-6;
  c.slit_width = 0.2e-6;
  c.sigma0 = -1.0;
  c.n_slits = 50;
  c.Lambda = 0.0;
  c.Lambda_values = {};
  c.x_min = -10e-6;
  c.x_max = 10e-6;
  c.z_min = 0.0;
  c.z_max = 0.16;  // 8 z_T for the default beamline
  c.nx = 400;
  c.nz = 400;
  c.per_slit = 11;
  c.ens_z_min = 0.0;
  c.ens_z_max = 0.16;
  c.base_step = -1.0;
  c.channels = {"density"};
  c.raw = false;
  c.clip = 0.5;
  c.colormap = "bwr";
  c.checks = {"crossing", "revival", "orders", "plateaus", "onaxis"};
  c.z_far = 1.0;
  c.max_order = 2;
  c.density_cut = 0.1;
  c.revival_threshold = 0.9;
  c.order_tolerance = 0.05;
  c.plateau_tolerance = 0.1;
  c.onaxis_z_max = 1.0;
  c.onaxis_samples = 101;
  return c;
}

void RunConfig::apply_far_field_preset() {
  x_min = -120e-6;
  x_max = 120e-6;
  z_min = 0.0;
  z_max = 1.0;
  clip = 4.0;
  channels = {"density", "momentum"};
}

void RunConfig::apply_override(const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  try {
    if (key == "beam.lambda_dB") lambda_dB = un::parse_length(value);
    else if (key == "grating.period") period = un::parse_length(value);
    else if (key == "grating.slit_width") slit_width = un::parse_length(value);
    else if (key == "grating.sigma0") sigma0 = un::parse_length(value);
    else if (key == "grating.n_slits") n_slits = static_cast<int>(un::parse_integer(value));
    else if (key == "decoherence.Lambda") Lambda = un::parse_lambda(value);
    else if (key == "decoherence.Lambda_values") Lambda_values = parse_lambda_list(value);
    else if (key == "grid.x_min") x_min = un::parse_length(value);
    else if (key == "grid.x_max") x_max = un::parse_length(value);
    else if (key == "grid.z_min") z_min = un::parse_length(value);
    else if (key == "grid.z_max") z_max = un::parse_length(value);
    else if (key == "grid.nx") nx = static_cast<int>(un::parse_integer(value));
    else if (key == "grid.nz") nz = static_cast<int>(un::parse_integer(value));
    else if (key == "ensemble.per_slit") per_slit = static_cast<int>(un::parse_integer(value));
    else if (key == "ensemble.z_min") ens_z_min = un::parse_length(value);
    else if (key == "ensemble.z_max") ens_z_max = un::parse_length(value);
    else if (key == "ensemble.base_step") base_step = un::parse_length(value);
    else if (key == "outputs.channels") channels = split_list(value);
    else if (key == "outputs.raw") raw = un::parse_flag(value);
    else if (key == "render.clip") clip = un::parse_number(value);
    else if (key == "render.colormap") colormap = trim(value);
    else if (key == "diagnose.checks") checks = split_list(value);
    else if (key == "diagnose.z_far") z_far = un::parse_length(value);
    else if (key == "diagnose.max_order") max_order = static_cast<int>(un::parse_integer(value));
    else if (key == "diagnose.density_cut") density_cut = un::parse_number(value);
    else if (key == "diagnose.revival_threshold") revival_threshold = un::parse_number(value);
    else if (key == "diagnose.order_tolerance") order_tolerance = un::parse_number(value);
    else if (key == "diagnose.plateau_tolerance") plateau_tolerance = un::parse_number(value);
    else if (key == "diagnose.onaxis_z_max") onaxis_z_max = un::parse_length(value);
    else if (key == "diagnose.onaxis_samples") onaxis_samples = static_cast<int>(un::parse_integer(value));
    else throw ConfigError("unknown configuration key '" + key + "'");
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    try {
      apply_override(t.substr(0, eq), trim(t.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::finalize() {
  if (sigma0 <= 0.0) sigma0 = slit_width / 4.0;
  if (base_step <= 0.0) {
    if (!(period > 0.0) || !(lambda_dB > 0.0))
      throw ConfigError("beam/grating parameters must be positive");
    base_step = talbot_distance(period, lambda_dB) / 2000.0;
  }
  if (channels.empty()) throw ConfigError("outputs.channels must not be empty");
  check_names(channels, known_channels, "output channel");
  check_names(checks, known_checks, "diagnostic check");
  if (colormap != "bwr" && colormap != "gray")
    throw ConfigError("render.colormap must be 'bwr' or 'gray'");
  if (!(clip > 0.0)) throw ConfigError("render.clip must be positive");
  if (Lambda < 0.0) throw ConfigError("decoherence.Lambda must be nonnegative");
  for (double L : Lambda_values)
    if (L < 0.0) throw ConfigError("decoherence.Lambda_values must be nonnegative");
  if (per_slit < 1) throw ConfigError("ensemble.per_slit must be >= 1");
  if (!(ens_z_min >= 0.0) || !(ens_z_min < ens_z_max))
    throw ConfigError("ensemble z range must satisfy 0 <= z_min < z_max");
  if (max_order < 1) throw ConfigError("diagnose.max_order must be >= 1");
  if (!(density_cut > 0.0 && density_cut < 1.0))
    throw ConfigError("diagnose.density_cut must be in (0, 1)");
  if (onaxis_samples < 2) throw ConfigError("diagnose.onaxis_samples must be >= 2");
  try {
    (void)make_model();
    (void)make_grid();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
}

Model RunConfig::make_model() const {
  const double s0 = sigma0 > 0.0 ? sigma0 : slit_width / 4.0;
  return Model::make(BeamParams::from_wavelength(lambda_dB),
                     GratingSpec::make(period, slit_width, n_slits, s0));
}

SimulationGrid RunConfig::make_grid() const {
  return SimulationGrid::make(x_min, x_max, z_min, z_max, nx, nz);
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  auto put_len = [&](const char* key, double v) {
    out << key << " = " << un::format_full(v) << " m\n";
  };
  put_len("beam.lambda_dB", lambda_dB);
  put_len("grating.period", period);
  put_len("grating.slit_width", slit_width);
  put_len("grating.sigma0", sigma0);
  out << "grating.n_slits = " << n_slits << "\n";
  out << "decoherence.Lambda = " << un::format_full(Lambda) << " m^-3\n";
  out << "decoherence.Lambda_values = ";
  for (std::size_t i = 0; i < Lambda_values.size(); ++i)
    out << (i ? "," : "") << un::format_full(Lambda_values[i]);
  out << (Lambda_values.empty() ? "" : " m^-3") << "\n";
  put_len("grid.x_min", x_min);
  put_len("grid.x_max", x_max);
  put_len("grid.z_min", z_min);
  put_len("grid.z_max", z_max);
  out << "grid.nx = " << nx << "\n";
  out << "grid.nz = " << nz << "\n";
  out << "ensemble.per_slit = " << per_slit << "\n";
  put_len("ensemble.z_min", ens_z_min);
  put_len("ensemble.z_max", ens_z_max);
  put_len("ensemble.base_step", base_step);
  out << "outputs.channels = " << join(channels) << "\n";
  out << "outputs.raw = " << (raw ? "true" : "false") << "\n";
  out << "render.clip = " << un::format_full(clip) << "\n";
  out << "render.colormap = " << colormap << "\n";
  out << "diagnose.checks = " << join(checks) << "\n";
  put_len("diagnose.z_far", z_far);
  out << "diagnose.max_order = " << max_order << "\n";
  out << "diagnose.density_cut = " << un::format_full(density_cut) << "\n";
  out << "diagnose.revival_threshold = " << un::format_full(revival_threshold) << "\n";
  out << "diagnose.order_tolerance = " << un::format_full(order_tolerance) << "\n";
  out << "diagnose.plateau_tolerance = " << un::format_full(plateau_tolerance) << "\n";
  put_len("diagnose.onaxis_z_max", onaxis_z_max);
  out << "diagnose.onaxis_samples = " << onaxis_samples << "\n";
  return out.str();
}

}  // namespace talbot

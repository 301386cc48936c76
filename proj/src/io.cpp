#include "talbot/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "talbot/units.hpp"

namespace talbot {

namespace {

const std::vector<double>& channel_data(const FieldGrid& g, GridChannel c) {
  switch (c) {
    case ch_density: return g.rho;
    case ch_current: return g.current;
    case ch_velocity: return g.v_eff;
    case ch_momentum: return g.kx;
  }
  throw IoError("unknown grid channel");
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

void write_grid_csv(const std::string& path, const FieldGrid& g, GridChannel c,
                    const std::string& channel_name) {
  const auto& data = channel_data(g, c);
  if (data.empty()) throw IoError("channel '" + channel_name + "' was not evaluated");
  std::ofstream out = open_out(path, false);
  out << "# channel: " << channel_name << "\n";
  out << "# x_min_m: " << units::format_full(g.grid.x_min)
      << " x_max_m: " << units::format_full(g.grid.x_max) << " nx: " << g.grid.nx
      << "\n";
  out << "# z_min_m: " << units::format_full(g.grid.z_min)
      << " z_max_m: " << units::format_full(g.grid.z_max) << " nz: " << g.grid.nz
      << "\n";
  out << "# rows: z samples ascending; columns: x samples ascending\n";
  char buf[40];
  for (int iz = 0; iz < g.grid.nz; ++iz) {
    for (int ix = 0; ix < g.grid.nx; ++ix) {
      std::snprintf(buf, sizeof buf, "%.17g", data[g.index(iz, ix)]);
      out << (ix ? "," : "") << buf;
    }
    out << "\n";
  }
  finish(out, path);
}

GridCsv read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  GridCsv out;
  std::string line;
  double x_min = 0, x_max = 0, z_min = 0, z_max = 0;
  int nx = 0, nz = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string tag;
      while (ss >> tag) {
        if (tag == "channel:") ss >> out.channel_name;
        else if (tag == "x_min_m:") ss >> x_min;
        else if (tag == "x_max_m:") ss >> x_max;
        else if (tag == "z_min_m:") ss >> z_min;
        else if (tag == "z_max_m:") ss >> z_max;
        else if (tag == "nx:") ss >> nx;
        else if (tag == "nz:") ss >> nz;
      }
      continue;
    }
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) out.values.push_back(std::strtod(cell.c_str(), nullptr));
  }
  if (nx < 2 || nz < 2 || out.values.size() != static_cast<std::size_t>(nx) * nz)
    throw IoError("malformed grid CSV '" + path + "'");
  out.grid = SimulationGrid::make(x_min, x_max, z_min, z_max, nx, nz);
  return out;
}

void write_grid_raw(const std::string& path, const FieldGrid& g, GridChannel c) {
  const auto& data = channel_data(g, c);
  std::ofstream out = open_out(path, true);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
  finish(out, path);
}

void write_density_pgm(const std::string& path, const FieldGrid& g) {
  const double peak = *std::max_element(g.rho.begin(), g.rho.end());
  std::ofstream out = open_out(path, true);
  out << "P5\n" << g.grid.nx << " " << g.grid.nz << "\n255\n";
  std::vector<unsigned char> row(g.grid.nx);
  for (int iz = 0; iz < g.grid.nz; ++iz) {
    for (int ix = 0; ix < g.grid.nx; ++ix) {
      const double t = peak > 0.0 ? g.rho[g.index(iz, ix)] / peak : 0.0;
      row[ix] = static_cast<unsigned char>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  finish(out, path);
}

std::size_t write_momentum_ppm(const std::string& path, const FieldGrid& g,
                               double clip, const std::string& colormap) {
  if (g.kx.empty()) throw IoError("momentum channel was not evaluated");
  std::ofstream out = open_out(path, true);
  out << "P6\n" << g.grid.nx << " " << g.grid.nz << "\n255\n";
  std::size_t masked = 0;
  std::vector<unsigned char> row(static_cast<std::size_t>(g.grid.nx) * 3);
  for (int iz = 0; iz < g.grid.nz; ++iz) {
    for (int ix = 0; ix < g.grid.nx; ++ix) {
      unsigned char r, gr, b;
      const std::size_t idx = g.index(iz, ix);
      if (!g.valid[idx] || !std::isfinite(g.kx[idx])) {
        ++masked;
        r = 0; gr = 100; b = 0;  // sentinel for node-floor pixels
      } else {
        const double t = std::clamp(g.kx[idx] / clip, -1.0, 1.0);
        if (colormap == "gray") {
          const auto v = static_cast<unsigned char>(std::lround(127.5 * (t + 1.0)));
          r = gr = b = v;
        } else if (t < 0.0) {  // blue to white
          r = gr = static_cast<unsigned char>(std::lround(255.0 * (1.0 + t)));
          b = 255;
        } else {  // white to red
          r = 255;
          gr = b = static_cast<unsigned char>(std::lround(255.0 * (1.0 - t)));
        }
      }
      row[3 * ix] = r;
      row[3 * ix + 1] = gr;
      row[3 * ix + 2] = b;
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  finish(out, path);
  return masked;
}

void write_streamlines_csv(const std::string& path,
                           const std::vector<Streamline>& lines) {
  std::ofstream out = open_out(path, false);
  out << "# columns: z_m";
  for (std::size_t i = 0; i < lines.size(); ++i) out << ",x" << i << "_m";
  out << "\n# seeds_m:";
  for (const auto& l : lines) out << " " << units::format_full(l.seed_x);
  out << "\n";
  std::size_t n_z = 0;
  const Streamline* longest = nullptr;
  for (const auto& l : lines)
    if (l.z_samples.size() >= n_z) {
      n_z = l.z_samples.size();
      longest = &l;
    }
  if (!longest) {
    finish(out, path);
    return;
  }
  char buf[40];
  for (std::size_t t = 0; t < n_z; ++t) {
    std::snprintf(buf, sizeof buf, "%.17g", longest->z_samples[t]);
    out << buf;
    for (const auto& l : lines) {
      if (t < l.x_samples.size()) {
        std::snprintf(buf, sizeof buf, "%.17g", l.x_samples[t]);
        out << "," << buf;
      } else {
        out << ",nan";
      }
    }
    out << "\n";
  }
  finish(out, path);
}

void write_streamline_overlay_ppm(const std::string& path, const FieldGrid& rho,
                                  const std::vector<Streamline>& lines) {
  const double peak = *std::max_element(rho.rho.begin(), rho.rho.end());
  const int nx = rho.grid.nx, nz = rho.grid.nz;
  std::vector<unsigned char> img(static_cast<std::size_t>(nx) * nz * 3);
  for (int iz = 0; iz < nz; ++iz)
    for (int ix = 0; ix < nx; ++ix) {
      const double t = peak > 0.0 ? rho.rho[rho.index(iz, ix)] / peak : 0.0;
      const auto v = static_cast<unsigned char>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
      const std::size_t p = (static_cast<std::size_t>(iz) * nx + ix) * 3;
      img[p] = img[p + 1] = img[p + 2] = v;
    }
  const double dx = rho.grid.dx(), dz = rho.grid.dz();
  for (const auto& l : lines) {
    for (std::size_t t = 0; t < l.z_samples.size(); ++t) {
      const int iz = static_cast<int>(std::lround((l.z_samples[t] - rho.grid.z_min) / dz));
      const int ix = static_cast<int>(std::lround((l.x_samples[t] - rho.grid.x_min) / dx));
      if (iz < 0 || iz >= nz || ix < 0 || ix >= nx) continue;
      const std::size_t p = (static_cast<std::size_t>(iz) * nx + ix) * 3;
      img[p] = 255;
      img[p + 1] = 0;
      img[p + 2] = 0;
    }
  }
  std::ofstream out = open_out(path, true);
  out << "P6\n" << nx << " " << nz << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data()), img.size());
  finish(out, path);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path, false);
  out << content;
  finish(out, path);
}

}  // namespace talbot

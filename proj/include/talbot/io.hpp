#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "talbot/decoherence.hpp"
#include "talbot/flow.hpp"

namespace talbot {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One scalar channel of a field grid as CSV: a '#' comment header carrying
/// the axis metadata in full precision, then nz rows of nx values
/// (rows = z samples from z_min, columns = x samples from x_min).
void write_grid_csv(const std::string& path, const FieldGrid& grid,
                    GridChannel channel, const std::string& channel_name);

struct GridCsv {
  SimulationGrid grid;
  std::string channel_name;
  std::vector<double> values;  // nz*nx row-major
};
GridCsv read_grid_csv(const std::string& path);

/// Raw dump: nz*nx little-endian float64, row-major; dimensions live in the
/// manifest and the CSV header.
void write_grid_raw(const std::string& path, const FieldGrid& grid,
                    GridChannel channel);

/// Grayscale P5 pixmap of a density grid, normalized to the grid maximum,
/// rows top-to-bottom = increasing z.
void write_density_pgm(const std::string& path, const FieldGrid& grid);

/// Diverging blue-white-red P6 pixmap of the momentum channel clipped to
/// [-clip, clip]; "gray" maps the same range to a grayscale ramp. Invalid
/// (node-floor) pixels take the sentinel color (0, 100, 0); their count is
/// returned for the manifest.
std::size_t write_momentum_ppm(const std::string& path, const FieldGrid& grid,
                               double clip, const std::string& colormap = "bwr");

/// Polyline table: column 1 is z, then one x column per streamline (ordered as
/// given); cells after an early termination hold "nan".
void write_streamlines_csv(const std::string& path,
                           const std::vector<Streamline>& lines);

/// Density background with the streamlines burned in red.
void write_streamline_overlay_ppm(const std::string& path, const FieldGrid& rho,
                                  const std::vector<Streamline>& lines);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace talbot

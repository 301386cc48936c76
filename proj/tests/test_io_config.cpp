#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "talbot/config.hpp"
#include "talbot/io.hpp"
#include "talbot/units.hpp"

using namespace talbot;
using namespace talbot::testing;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "talbot_io_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("unit parsing") {
  CHECK(units::parse_length("16 pm") == doctest::Approx(16e-12).epsilon(1e-15));
  CHECK(units::parse_length("0.4 um") == doctest::Approx(0.4e-6).epsilon(1e-15));
  CHECK(units::parse_length("20 mm") == doctest::Approx(0.020).epsilon(1e-15));
  CHECK(units::parse_length("1 m") == 1.0);
  CHECK_THROWS_AS(units::parse_length("0.4"), std::invalid_argument);
  CHECK_THROWS_AS(units::parse_length("0.4 furlong"), std::invalid_argument);
  CHECK_THROWS_AS(units::parse_length("abc m"), std::invalid_argument);
  CHECK(units::parse_lambda("0 mm^-1um^-2") == 0.0);
  CHECK(units::parse_lambda("1e-3 mm^-1um^-2") == doctest::Approx(1e12).epsilon(1e-15));
  CHECK_THROWS_AS(units::parse_lambda("1"), std::invalid_argument);
  CHECK(units::parse_integer(" 42 ") == 42);
  CHECK_THROWS_AS(units::parse_integer("42x"), std::invalid_argument);
  CHECK(units::parse_flag("true"));
  CHECK_FALSE(units::parse_flag("false"));
}

TEST_CASE("defaults are the reference beamline") {
  RunConfig cfg = RunConfig::defaults();
  cfg.finalize();
  CHECK(cfg.lambda_dB == 16e-12);
  CHECK(cfg.period == 0.4e-6);
  CHECK(cfg.slit_width == 0.2e-6);
  CHECK(cfg.n_slits == 50);
  CHECK(cfg.sigma0 == doctest::Approx(0.05e-6).epsilon(1e-15));  // resolved w/4
  CHECK(cfg.Lambda == 0.0);
  const Model m = cfg.make_model();
  CHECK(m.z_talbot == doctest::Approx(0.020).epsilon(1e-12));
  CHECK(cfg.base_step == doctest::Approx(m.z_talbot / 2000.0).epsilon(1e-12));
}

TEST_CASE("config file round trip") {
  const fs::path dir = temp_dir();
  const fs::path path = dir / "run.cfg";
  {
    std::ofstream out(path);
    out << "# comment line\n";
    out << "beam.lambda_dB = 16 pm\n";
    out << "grating.period = 0.4 um\n";
    out << "grating.sigma0 = 0.06 um\n";
    out << "decoherence.Lambda = 1e-3 mm^-1um^-2\n";
    out << "grid.nx = 32\n";
    out << "outputs.channels = density,momentum\n";
  }
  RunConfig cfg = RunConfig::defaults();
  cfg.load_file(path.string());
  cfg.finalize();
  CHECK(cfg.sigma0 == doctest::Approx(0.06e-6).epsilon(1e-15));
  CHECK(cfg.Lambda == doctest::Approx(1e12).epsilon(1e-15));
  CHECK(cfg.nx == 32);
  REQUIRE(cfg.channels.size() == 2);

  SUBCASE("serialized form reloads identically") {
    const std::string body = cfg.serialize();
    const fs::path again = dir / "again.cfg";
    write_text_file(again.string(), body);
    RunConfig cfg2 = RunConfig::defaults();
    cfg2.load_file(again.string());
    cfg2.finalize();
    CHECK(cfg2.sigma0 == cfg.sigma0);
    CHECK(cfg2.Lambda == cfg.Lambda);
    CHECK(cfg2.base_step == cfg.base_step);
    CHECK(cfg2.serialize() == body);
  }
}

TEST_CASE("config rejections") {
  RunConfig cfg = RunConfig::defaults();
  CHECK_THROWS_AS(cfg.apply_override("grating.pitch", "0.4 um"), ConfigError);
  CHECK_THROWS_AS(cfg.apply_override("grating.period", "0.4"), ConfigError);
  CHECK_THROWS_AS(cfg.apply_override("grid.nx", "many"), ConfigError);
  SUBCASE("cross-field violations surface in finalize") {
    cfg.apply_override("grating.slit_width", "0.5 um");  // wider than the period
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
  SUBCASE("empty channel list is rejected") {
    cfg.apply_override("outputs.channels", "");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
  SUBCASE("unknown channel is rejected") {
    cfg.apply_override("outputs.channels", "density,phase");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
  }
}

TEST_CASE("lambda ladder parsing") {
  RunConfig cfg = RunConfig::defaults();
  cfg.apply_override("decoherence.Lambda_values", "0,1e-3,1 mm^-1um^-2");
  REQUIRE(cfg.Lambda_values.size() == 3);
  CHECK(cfg.Lambda_values[0] == 0.0);
  CHECK(cfg.Lambda_values[1] == doctest::Approx(1e12).epsilon(1e-15));
  CHECK(cfg.Lambda_values[2] == 1e15);
}

TEST_CASE("grid CSV round trip keeps axis metadata bit-exact") {
  const Model m = sodium_model(5);
  const SimulationGrid grid =
      SimulationGrid::make(-1.7e-6, 1.3e-6, 0.0, 0.7 * m.z_talbot, 17, 9);
  const FieldGrid g = evaluate_grid(m, grid, 1e12, ch_density);
  const fs::path path = temp_dir() / "grid.csv";
  write_grid_csv(path.string(), g, ch_density, "density");
  const GridCsv back = read_grid_csv(path.string());
  CHECK(back.channel_name == "density");
  CHECK(back.grid.x_min == grid.x_min);
  CHECK(back.grid.x_max == grid.x_max);
  CHECK(back.grid.z_min == grid.z_min);
  CHECK(back.grid.z_max == grid.z_max);
  CHECK(back.grid.nx == grid.nx);
  CHECK(back.grid.nz == grid.nz);
  REQUIRE(back.values.size() == g.rho.size());
  for (std::size_t i = 0; i < g.rho.size(); ++i) CHECK(back.values[i] == g.rho[i]);
}

TEST_CASE("raw dump matches the CSV channel") {
  const Model m = sodium_model(3);
  const SimulationGrid grid = SimulationGrid::make(-1e-6, 1e-6, 0.0, 1e-3, 8, 4);
  const FieldGrid g = evaluate_grid(m, grid, 0.0, ch_density);
  const fs::path path = temp_dir() / "grid.f64";
  write_grid_raw(path.string(), g, ch_density);
  std::ifstream in(path, std::ios::binary);
  std::vector<double> back(g.rho.size());
  in.read(reinterpret_cast<char*>(back.data()),
          static_cast<std::streamsize>(back.size() * sizeof(double)));
  REQUIRE(in.gcount() == static_cast<std::streamsize>(back.size() * sizeof(double)));
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == g.rho[i]);
}

TEST_CASE("pixmap writers") {
  const Model m = sodium_model(5);
  const SimulationGrid grid = SimulationGrid::make(-1e-6, 1e-6, 0.0, m.z_talbot, 24, 12);
  const FieldGrid g = evaluate_grid(m, grid, 0.0, ch_density | ch_momentum);
  const fs::path dir = temp_dir();

  SUBCASE("density PGM header and size") {
    const fs::path p = dir / "rho.pgm";
    write_density_pgm(p.string(), g);
    std::ifstream in(p, std::ios::binary);
    std::string magic;
    int w, h, maxv;
    in >> magic >> w >> h >> maxv;
    CHECK(magic == "P5");
    CHECK(w == 24);
    CHECK(h == 12);
    CHECK(maxv == 255);
    in.get();
    std::vector<char> pixels(24 * 12);
    in.read(pixels.data(), pixels.size());
    CHECK(in.gcount() == static_cast<std::streamsize>(pixels.size()));
  }
  SUBCASE("momentum PPM is mirror antisymmetric with red and blue swapped") {
    const fs::path p = dir / "kx.ppm";
    const std::size_t masked = write_momentum_ppm(p.string(), g, 0.5);
    std::ifstream in(p, std::ios::binary);
    std::string magic;
    int w, h, maxv;
    in >> magic >> w >> h >> maxv;
    in.get();
    REQUIRE(magic == "P6");
    std::vector<unsigned char> px(static_cast<std::size_t>(w) * h * 3);
    in.read(reinterpret_cast<char*>(px.data()), px.size());
    std::size_t sentinel = 0;
    for (int iz = 0; iz < h; ++iz)
      for (int ix = 0; ix < w; ++ix) {
        const std::size_t a = (static_cast<std::size_t>(iz) * w + ix) * 3;
        const std::size_t b = (static_cast<std::size_t>(iz) * w + (w - 1 - ix)) * 3;
        if (px[a] == 0 && px[a + 1] == 100 && px[a + 2] == 0) {
          ++sentinel;
          continue;
        }
        if (px[b] == 0 && px[b + 1] == 100 && px[b + 2] == 0) continue;
        CHECK(std::abs(int(px[a]) - int(px[b + 2])) <= 1);  // R <-> B under x -> -x
        CHECK(std::abs(int(px[a + 1]) - int(px[b + 1])) <= 1);
      }
    CHECK(sentinel == masked);
  }
  SUBCASE("writers are deterministic") {
    const fs::path p1 = dir / "rho1.pgm", p2 = dir / "rho2.pgm";
    write_density_pgm(p1.string(), g);
    write_density_pgm(p2.string(), g);
    std::ifstream a(p1, std::ios::binary), b(p2, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), {});
    const std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
  }
}

TEST_CASE("unwritable paths raise IoError") {
  const Model m = sodium_model(3);
  const SimulationGrid grid = SimulationGrid::make(-1e-6, 1e-6, 0.0, 1e-3, 4, 4);
  const FieldGrid g = evaluate_grid(m, grid, 0.0, ch_density);
  CHECK_THROWS_AS(write_grid_csv("/nonexistent_dir/x.csv", g, ch_density, "density"),
                  IoError);
}

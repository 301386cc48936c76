#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "talbot/decoherence.hpp"
#include "talbot/wavefield.hpp"

using namespace talbot;
using namespace talbot::testing;

TEST_CASE("mode amplitude basics") {
  const Model m = sodium_model(5);
  const double s0 = m.grating.sigma0;

  SUBCASE("initial peak value") {
    for (int n = 1; n <= 5; ++n) {
      const auto v = mode_amplitude(m, n, m.grating.centers[n - 1], 0.0);
      CHECK(v.real() == doctest::Approx(std::pow(2.0 * pi * s0 * s0, -0.25)).epsilon(1e-14));
      CHECK(v.imag() == 0.0);
    }
  }
  SUBCASE("unit norm at any z") {
    for (double z : {0.0, m.z_talbot / 3.0, 2.0 * m.z_talbot}) {
      const double sz = m.sigma_z(z);
      const double c = m.grating.centers[2];
      const double integral = simpson(
          [&](double x) { return std::norm(mode_amplitude(m, 3, x, z)); },
          c - 12.0 * sz, c + 12.0 * sz, 4000);
      CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  SUBCASE("cutoff tail is an exact zero") {
    const double sz = m.sigma_z(0.0);
    CHECK(mode_amplitude(m, 1, m.grating.centers[0] + 20.0 * sz, 0.0) ==
          std::complex<double>(0.0, 0.0));
  }
  CHECK_THROWS_AS(mode_amplitude(m, 0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(mode_amplitude(m, 6, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(mode_amplitude(m, 1, 0.0, -1e-6), std::domain_error);
}

TEST_CASE("mode gradient") {
  const Model m = sodium_model(5);
  const double s0 = m.grating.sigma0;

  SUBCASE("vanishes at the mode center") {
    CHECK(mode_gradient(m, 2, m.grating.centers[1], 0.3 * m.z_talbot) ==
          std::complex<double>(0.0, 0.0));
  }
  SUBCASE("initial log-derivative") {
    const double x = m.grating.centers[0] + s0;
    const auto g = mode_gradient(m, 1, x, 0.0);
    const auto expected = -1.0 / (2.0 * s0) * mode_amplitude(m, 1, x, 0.0);
    CHECK(std::abs(g - expected) <= 1e-14 * std::abs(expected));
  }
  SUBCASE("matches central finite differences") {
    for (int i = 0; i < 40; ++i) {
      const double z = uniform(0.0, m.z_talbot);
      const double sz = m.sigma_z(z);
      const double c = m.grating.centers[static_cast<int>(uniform(0, 4.999))];
      double x = c + uniform(-2.5, 2.5) * sz;
      if (std::abs(x - c) < 0.5 * sz) x = c + 0.5 * sz;  // the derivative vanishes at the center
      const double h = 1e-4 * sz;
      int n = 0;
      for (int j = 0; j < 5; ++j)
        if (m.grating.centers[j] == c) n = j + 1;
      const auto num = (mode_amplitude(m, n, x + h, z) - mode_amplitude(m, n, x - h, z)) /
                       (2.0 * h);
      const auto an = mode_gradient(m, n, x, z);
      CHECK(std::abs(num - an) <= 1e-6 * std::abs(an));
    }
  }
}

TEST_CASE("coherent wave") {
  SUBCASE("single slit reduces to the mode") {
    const Model one = sodium_model(1);
    for (int i = 0; i < 20; ++i) {
      const double x = uniform(-1e-6, 1e-6);
      const double z = uniform(0.0, 2.0 * one.z_talbot);
      CHECK(std::abs(coherent_wave(one, x, z) - mode_amplitude(one, 1, x, z)) <=
            1e-14 * std::abs(mode_amplitude(one, 1, x, z)) + 1e-300);
    }
  }
  SUBCASE("initial per-slit peaks carry 1/N of the single-slit intensity") {
    const Model m = sodium_model();
    const double expected =
        std::pow(2.0 * pi * m.grating.sigma0 * m.grating.sigma0, -0.5) / 50.0;
    for (int n = 1; n <= 50; n += 7) {
      const double rho = coherent_density(m, m.grating.centers[n - 1], 0.0);
      CHECK(rho == doctest::Approx(expected).epsilon(1e-3));
    }
  }
  SUBCASE("total probability stays within 1e-3 of one") {
    const Model m = sodium_model();
    for (double z : {0.0, m.z_talbot, 50.0 * m.z_talbot}) {
      const double half = 25.0 * m.grating.period + 10.0 * m.sigma_z(z);
      const double integral = simpson(
          [&](double x) { return coherent_density(m, x, z); }, -half, half, 1 << 15);
      CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
    }
  }
}

TEST_CASE("coherent density equals the undamped decohered density") {
  const Model m = sodium_model();
  for (int i = 0; i < 50; ++i) {
    const double x = uniform(-12e-6, 12e-6);
    const double z = uniform(0.0, 3.0 * m.z_talbot);
    CHECK(rel_diff(coherent_density(m, x, z), density(m, x, z, 0.0)) < 1e-12);
  }
}

TEST_CASE("cosine pair-sum density") {
  SUBCASE("single slit: spread Gaussian") {
    const Model one = sodium_model(1);
    for (int i = 0; i < 20; ++i) {
      const double x = uniform(-2e-6, 2e-6);
      const double z = uniform(0.0, 3.0 * one.z_talbot);
      const double sz = one.sigma_z(z);
      const double sz2 = sz * sz;
      // modes beyond the exponent cutoff are exact zeros by construction
      const double expected =
          x * x / (4.0 * sz2) > mode_exponent_cutoff
              ? 0.0
              : std::exp(-x * x / (2.0 * sz2)) / std::sqrt(2.0 * pi * sz2);
      CHECK(rel_diff(cosine_form_density(one, x, z), expected) < 1e-10);
    }
  }
  SUBCASE("agrees with the complex-product density") {
    const Model m = sodium_model(5);
    for (int i = 0; i < 200; ++i) {
      const double x = uniform(-2e-6, 2e-6);
      const double z = uniform(0.0, 3.0 * m.z_talbot);
      CHECK(rel_diff(cosine_form_density(m, x, z), coherent_density(m, x, z)) < 1e-10);
    }
  }
  SUBCASE("z = 0 reduces to phase-free Gaussian pairs") {
    const Model m = sodium_model(3);
    const double s0 = m.grating.sigma0;
    const double x = 0.3 * m.grating.period;
    long double sum = 0.0;
    for (double cn : m.grating.centers)
      for (double cp : m.grating.centers) {
        const double beta =
            ((x - cn) * (x - cn) + (x - cp) * (x - cp)) / (4.0 * s0 * s0);
        sum += std::exp(-beta);
      }
    const double expected =
        static_cast<double>(sum) / (3.0 * std::sqrt(2.0 * pi * s0 * s0));
    CHECK(rel_diff(cosine_form_density(m, x, 0.0), expected) < 1e-12);
  }
}

TEST_CASE("mirror symmetry of the coherent density") {
  const Model m = sodium_model();
  for (int i = 0; i < 50; ++i) {
    const double x = uniform(0.0, 11e-6);
    const double z = uniform(0.0, 3.0 * m.z_talbot);
    const double a = coherent_density(m, x, z);
    const double b = coherent_density(m, -x, z);
    if (a > 0.0) CHECK(rel_diff(a, b) < 1e-10);
  }
}

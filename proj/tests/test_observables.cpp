#include <cmath>

#include "doctest.h"
#include "slitwave/kirchhoff.hpp"
#include "slitwave/observables.hpp"

using namespace slitwave;

namespace {

constexpr cplx kI{0.0, 1.0};

}  // namespace

TEST_SUITE("observables") {
  TEST_CASE("singles intensity examples") {
    CHECK(singles_intensity({}) == 0.0);
    CHECK(singles_intensity({1.0, kI, 0.0}) == doctest::Approx(2.0));
  }

  TEST_CASE("coincidence uses the unconjugated product") {
    CHECK(coincidence_intensity({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}) == 0.0);
    CHECK(coincidence_intensity({kI, 0.0, 0.0}, {kI, 0.0, 0.0}) == doctest::Approx(1.0));
    const ComplexVec3 phi{1.0 + kI, 0.0, 0.0};
    CHECK(coincidence_intensity(phi, phi) == doctest::Approx(4.0));
    CHECK(singles_intensity(phi) * singles_intensity(phi) == doctest::Approx(4.0));
    // A circular polarisation state has |Phi . Phi| = 0 but |Phi|^2 > 0.
    const ComplexVec3 circ{1.0, kI, 0.0};
    CHECK(coincidence_intensity(circ, circ) == doctest::Approx(0.0));
  }

  TEST_CASE("uniform grid is symmetric bit for bit") {
    const auto grid = uniform_grid(-5e-3, 5e-3, 801);
    REQUIRE(grid.size() == 801);
    CHECK(grid.front() == -5e-3);
    CHECK(grid.back() == 5e-3);
    CHECK(grid[400] == 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(grid[i] == -grid[grid.size() - 1 - i]);
    CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), ConfigError);
  }

  TEST_CASE("sweep over +-2 mrad has the requested length") {
    const SimulationConfig config = paper_fig4_config();
    const PatternSeries series = sweep(-2e-3, 2e-3, 801, config);
    CHECK(series.size() == 801);
    CHECK(series.singles.size() == 801);
    CHECK(series.coincidence.size() == 801);
    CHECK_FALSE(series.normalized);
  }

  TEST_CASE("degenerate superposition reproduces the single-slit envelope") {
    SimulationConfig two = paper_fig4_config();
    two.wave.c1 = 1.0;
    two.wave.c2 = 0.0;
    const SimulationConfig one = single_slit_envelope_config(paper_fig4_config());
    CHECK(one.geometry.slit_count == 1);
    const PatternSeries a = sweep(-5e-3, 5e-3, 41, two);
    const PatternSeries b = sweep(-5e-3, 5e-3, 41, one);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.singles[i] == b.singles[i]);
  }

  TEST_CASE("normalization divides by the peak and keeps zeros") {
    PatternSeries s;
    s.beta = {-1.0, 0.0, 1.0};
    s.singles = {1.0, 4.0, 2.0};
    s.coincidence = {0.0, 0.0, 0.0};
    const PatternSeries n = normalize(s);
    CHECK(n.normalized);
    CHECK(n.singles[1] == 1.0);
    CHECK(n.singles[2] == 0.5);
    CHECK(n.coincidence[0] == 0.0);
  }

  TEST_CASE("normalized pattern does not depend on R or amplitude scale") {
    SimulationConfig base = paper_fig4_config();
    SimulationConfig scaled = base;
    scaled.screen_R = 7.5;
    scaled.wave.amplitude = {2.0, 2.0, 2.0};
    const PatternSeries a = normalize(sweep(-3e-3, 3e-3, 61, base));
    const PatternSeries b = normalize(sweep(-3e-3, 3e-3, 61, scaled));
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(a.singles[i] - b.singles[i]) < 1e-6);
      CHECK(std::abs(a.coincidence[i] - b.coincidence[i]) < 1e-6);
    }
  }

  TEST_CASE("coincidence at equal angles matches the sweep") {
    const SimulationConfig config = paper_fig4_config();
    const FarFieldEvaluator evaluator(config.geometry, config.wave.wavelength, config.truncation,
                                      config.variant);
    const PatternSeries s = sweep_at({-1e-3, 0.5e-3}, evaluator, config.wave, config.screen_R);
    CHECK(coincidence_at(0.5e-3, 0.5e-3, evaluator, config.wave, config.screen_R) ==
          s.coincidence[1]);
  }

  TEST_CASE("peak finding with parabolic refinement") {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i <= 100; ++i) {
      x.push_back(i * 0.1);
      y.push_back(std::cos(2.0 * kPi * (x.back() - 0.03) / 2.5));
    }
    const auto peaks = find_peaks(x, y);
    REQUIRE(peaks.size() == 3);
    CHECK(peaks[0] == doctest::Approx(2.53).epsilon(1e-3));
    CHECK(peaks[1] == doctest::Approx(5.03).epsilon(1e-3));
    const auto zero = first_minimum_after_zero(x, y);
    REQUIRE(zero.has_value());
    CHECK(*zero == doctest::Approx(1.28).epsilon(1e-3));
  }

  TEST_CASE("flat series has no metrics") {
    PatternSeries s;
    s.beta = {-1.0, -0.5, 0.0, 0.5, 1.0};
    s.singles = {1.0, 1.0, 1.0, 1.0, 1.0};
    s.coincidence = s.singles;
    CHECK_FALSE(fringe_metrics(s, Channel::Singles).has_value());
  }

  TEST_CASE("fringe spacing and envelope zero of the preset") {
    const SimulationConfig config = paper_fig4_config();
    const PatternSeries pattern = normalize(sweep(-5e-3, 5e-3, 801, config));
    const PatternSeries envelope =
        normalize(sweep(0.0, 12e-3, 1201, single_slit_envelope_config(config)));
    const auto metrics = fringe_metrics(pattern, Channel::Singles, &envelope);
    REQUIRE(metrics.has_value());
    const double lambda = config.wave.wavelength;
    const double a = config.geometry.width_a;
    CHECK(std::abs(metrics->mean_fringe_spacing / (lambda / (a + config.geometry.separation_d)) - 1.0) < 0.02);
    REQUIRE(metrics->first_envelope_zero.has_value());
    CHECK(std::abs(*metrics->first_envelope_zero / (lambda / a) - 1.0) < 0.02);
    CHECK(metrics->visibility > 0.0);
    CHECK(metrics->visibility <= 1.0);
  }
}

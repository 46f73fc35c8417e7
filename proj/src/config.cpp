#include "slitwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slitwave {

double wavenumber(double wavelength) {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw ConfigError("wavelength must be positive");
  }
  return 2.0 * kPi / wavelength;
}

double wavenumber(const IncidentWave& wave) { return wavenumber(wave.wavelength); }

double angular_frequency(double wavelength) { return kSpeedOfLight * wavenumber(wavelength); }

namespace {

void check(std::vector<Violation>& out, bool ok, const char* field, const std::string& message) {
  if (!ok) out.push_back({field, message});
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::vector<Violation> validate(const SlitGeometry& geom, const IncidentWave& wave,
                                const TruncationPolicy& trunc, double normalization_tol) {
  std::vector<Violation> out;
  check(out, finite_positive(geom.width_a), "width_a", "must be > 0");
  check(out, finite_positive(geom.length_b), "length_b", "must be > 0");
  check(out, std::isfinite(geom.thickness_c) && geom.thickness_c >= 0.0, "thickness_c",
        "must be >= 0");
  check(out, geom.slit_count == 1 || geom.slit_count == 2, "slit_count", "must be 1 or 2");
  if (geom.slit_count == 2) {
    check(out, std::isfinite(geom.separation_d) && geom.separation_d >= 0.0, "separation_d",
          "must be >= 0 for two slits");
  }

  check(out, finite_positive(wave.wavelength), "wavelength", "must be > 0");
  for (double a : wave.amplitude) {
    if (!std::isfinite(a)) {
      out.push_back({"amplitude", "components must be finite"});
      break;
    }
  }
  check(out, std::isfinite(wave.c1) && std::isfinite(wave.c2), "c1,c2", "must be finite");
  const double norm = wave.c1 * wave.c1 + wave.c2 * wave.c2;
  if (std::isfinite(norm) && std::abs(norm - 1.0) > normalization_tol) {
    std::ostringstream msg;
    msg << "c1^2 + c2^2 = " << norm << " deviates from 1 by more than " << normalization_tol;
    out.push_back({"normalization", msg.str()});
  }

  check(out, trunc.max_m >= 0, "max_m", "must be >= 0");
  check(out, trunc.max_n >= 0, "max_n", "must be >= 0");
  check(out, trunc.tail_eps > 0.0 && trunc.tail_eps < 1.0, "tail_eps", "must lie in (0, 1)");
  check(out, trunc.evanescent_floor > 0.0 && trunc.evanescent_floor < 1.0, "evanescent_floor",
        "must lie in (0, 1)");
  return out;
}

std::vector<Violation> validate(const DetectorDirection& dir) {
  std::vector<Violation> out;
  check(out, finite_positive(dir.screen_R), "screen_R", "must be > 0");
  const double sa = std::sin(dir.alpha);
  const double sb = std::sin(dir.beta);
  check(out, sb * sb <= 1.0 - sa * sa, "beta", "sin^2(beta) must not exceed cos^2(alpha)");
  return out;
}

std::vector<Violation> validate(const SimulationConfig& config) {
  auto out = validate(config.geometry, config.wave, config.truncation, config.normalization_tol);
  check(out, finite_positive(config.screen_R), "screen_R", "must be > 0");
  check(out, config.points >= 2, "points", "must be >= 2");
  check(out, std::isfinite(config.beta_min) && std::isfinite(config.beta_max) &&
                 config.beta_max > config.beta_min,
        "beta_range", "beta_max must exceed beta_min");
  const double sa = std::sin(config.alpha);
  const double worst = std::max(std::abs(std::sin(config.beta_min)), std::abs(std::sin(config.beta_max)));
  check(out, worst * worst <= 1.0 - sa * sa, "beta_range",
        "sin^2(beta) must not exceed cos^2(alpha) anywhere on the grid");
  check(out, config.normalization_tol >= 0.0, "normalization_tol", "must be >= 0");
  return out;
}

std::string describe(const std::vector<Violation>& violations) {
  std::string text;
  for (const auto& v : violations) {
    text += v.field;
    text += ": ";
    text += v.message;
    text += '\n';
  }
  return text;
}

void require_valid(const SimulationConfig& config) {
  const auto violations = validate(config);
  if (!violations.empty()) throw ConfigError("invalid configuration\n" + describe(violations));
}

SimulationConfig paper_fig4_config() {
  SimulationConfig config;
  config.geometry.width_a = 0.13e-3;
  config.geometry.length_b = 1.31e-2;
  config.geometry.thickness_c = 2.65e-5;
  config.geometry.separation_d = 0.4e-3;
  config.geometry.slit_count = 2;
  config.wave.wavelength = 916e-9;
  config.wave.amplitude = {0.896, 0.896, 0.896};
  config.wave.c1 = 0.955;
  config.wave.c2 = 0.298;
  config.variant = ModeVariant::Literal;
  config.alpha = 0.0;
  config.screen_R = 1.0;
  config.beta_min = -5e-3;
  config.beta_max = 5e-3;
  config.points = 801;
  return config;
}

std::string to_string(ModeVariant variant) {
  return variant == ModeVariant::Literal ? "literal" : "shifted";
}

ModeVariant parse_variant(const std::string& text) {
  if (text == "literal") return ModeVariant::Literal;
  if (text == "shifted") return ModeVariant::Shifted;
  throw ConfigError("unknown variant '" + text + "' (expected literal or shifted)");
}

}  // namespace slitwave

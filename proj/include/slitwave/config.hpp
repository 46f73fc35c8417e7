#pragma once

// Physical parameters of a slit experiment. All quantities are SI (meters,
// radians); display-unit conversion happens in the io layer only.

#include <array>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace slitwave {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for parameters that violate a configuration invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when a point or direction lies outside where a formula is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Closed interval [lo, hi] along one aperture axis.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SlitGeometry {
  double width_a = 0.0;       ///< slit width along y
  double length_b = 0.0;      ///< slit length along x
  double thickness_c = 0.0;   ///< plate thickness along z
  double separation_d = 0.0;  ///< edge-to-edge gap between the two slits
  int slit_count = 1;
};

struct IncidentWave {
  double wavelength = 0.0;
  std::array<double, 3> amplitude{1.0, 1.0, 1.0};  ///< (A_x, A_y, A_z)
  double c1 = 1.0;
  double c2 = 0.0;
};

/// Far-field observation direction. alpha is measured from the yz-plane,
/// beta from the xz-plane; R is the distance from the aperture.
struct DetectorDirection {
  double alpha = 0.0;
  double beta = 0.0;
  double screen_R = 1.0;
};

/// Controls how the infinite modal double series is cut off.
struct TruncationPolicy {
  int max_m = 2000;                ///< cap on the width-mode index
  int max_n = 50000;               ///< cap on the length-mode index
  double tail_eps = 1e-6;          ///< relative tail threshold
  double evanescent_floor = 1e-8;  ///< drop modes attenuated below this across the plate
};

/// How the second slit's aperture integral treats the mode function.
/// Literal integrates sin((2m+1)pi y/a) over the translated interval
/// unchanged; Shifted uses the translated mode sin((2m+1)pi (y-(a+d))/a).
enum class ModeVariant { Literal, Shifted };

inline constexpr double kDefaultNormalizationTol = 2e-3;

struct Violation {
  std::string field;
  std::string message;
};

/// Angular wavenumber 2*pi/lambda. Throws ConfigError for lambda <= 0.
double wavenumber(const IncidentWave& wave);
double wavenumber(double wavelength);

/// Angular frequency c*k.
double angular_frequency(double wavelength);

/// Every violated invariant, in field order. Empty means the inputs are valid.
std::vector<Violation> validate(const SlitGeometry& geom, const IncidentWave& wave,
                                const TruncationPolicy& trunc,
                                double normalization_tol = kDefaultNormalizationTol);

std::vector<Violation> validate(const DetectorDirection& dir);

/// Joins violations into one line per entry, "field: message".
std::string describe(const std::vector<Violation>& violations);

/// Everything needed to compute one pattern.
struct SimulationConfig {
  SlitGeometry geometry;
  IncidentWave wave;
  TruncationPolicy truncation;
  ModeVariant variant = ModeVariant::Literal;
  double alpha = 0.0;
  double screen_R = 1.0;
  double beta_min = -5e-3;
  double beta_max = 5e-3;
  int points = 801;
  double normalization_tol = kDefaultNormalizationTol;
};

std::vector<Violation> validate(const SimulationConfig& config);

/// Throws ConfigError listing all violations, if any.
void require_valid(const SimulationConfig& config);

/// Double-slit two-photon setup with 916 nm photons, 0.13 mm slits 0.4 mm
/// apart and the fitted plate constants b = 1.31e-2 m, c' = 2.65e-5 m.
SimulationConfig paper_fig4_config();

std::string to_string(ModeVariant variant);
ModeVariant parse_variant(const std::string& text);

}  // namespace slitwave

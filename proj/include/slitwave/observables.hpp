#pragma once

// Detector observables: singles and two-photon coincidence patterns over a
// beta scan, and fringe metrics extracted from them.

#include <optional>
#include <vector>

#include "slitwave/complex_vec3.hpp"
#include "slitwave/config.hpp"
#include "slitwave/kirchhoff.hpp"

namespace slitwave {

enum class Channel { Singles, Coincidence };

struct PatternSeries {
  std::vector<double> beta;
  std::vector<double> singles;
  std::vector<double> coincidence;
  bool normalized = false;

  std::size_t size() const { return beta.size(); }
  const std::vector<double>& channel(Channel which) const {
    return which == Channel::Singles ? singles : coincidence;
  }
};

struct FringeMetrics {
  std::vector<double> peak_positions;
  double mean_fringe_spacing = 0.0;
  double visibility = 0.0;
  std::optional<double> first_envelope_zero;
};

/// |Phi_x|^2 + |Phi_y|^2 + |Phi_z|^2.
double singles_intensity(const ComplexVec3& amp);

/// |Phi_s . Phi_i|^2 with the unconjugated product.
double coincidence_intensity(const ComplexVec3& amp_s, const ComplexVec3& amp_i);

/// n_points angles from beta_min to beta_max. Grids symmetric about zero
/// are symmetric bit for bit.
std::vector<double> uniform_grid(double beta_min, double beta_max, int n_points);

/// Raw singles and coincidence (signal and idler at the same beta) over a
/// uniform grid; points are evaluated in parallel but stored in grid order.
PatternSeries sweep(double beta_min, double beta_max, int n_points, const SimulationConfig& config);

/// Same as sweep, on explicit angles and with a prebuilt evaluator.
PatternSeries sweep_at(const std::vector<double>& betas, const FarFieldEvaluator& evaluator,
                       const IncidentWave& wave, double screen_R);

/// Coincidence for signal at beta_s and idler at beta_i.
double coincidence_at(double beta_s, double beta_i, const FarFieldEvaluator& evaluator,
                      const IncidentWave& wave, double screen_R);

/// Each channel divided by its maximum (left at zero if identically zero).
PatternSeries normalize(PatternSeries series);

/// The configuration restricted to slit 1 with c1 = 1, c2 = 0.
SimulationConfig single_slit_envelope_config(const SimulationConfig& config);

/// Peak positions in a sampled profile, refined with a 3-point parabola.
std::vector<double> find_peaks(const std::vector<double>& x, const std::vector<double>& y);

/// First local minimum at beta > 0, parabola-refined.
std::optional<double> first_minimum_after_zero(const std::vector<double>& x,
                                               const std::vector<double>& y);

/// Peak window used for the fringe spacing (|beta| <= 2 mrad).
inline constexpr double kSpacingWindow = 2e-3;

/// Fringe metrics for one channel, or nullopt when the series has no interior
/// maximum. When an envelope series (single-slit pattern) is supplied, its
/// first zero is reported too.
std::optional<FringeMetrics> fringe_metrics(const PatternSeries& series, Channel which,
                                            const PatternSeries* envelope = nullptr);

}  // namespace slitwave

#include "slitwave/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "slitwave/parallel.hpp"

namespace slitwave {

double singles_intensity(const ComplexVec3& amp) { return amp.norm2(); }

double coincidence_intensity(const ComplexVec3& amp_s, const ComplexVec3& amp_i) {
  return std::norm(bilinear_dot(amp_s, amp_i));
}

std::vector<double> uniform_grid(double beta_min, double beta_max, int n_points) {
  if (n_points < 2) throw ConfigError("a grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(n_points));
  const double steps = n_points - 1;
  for (int i = 0; i < n_points; ++i) {
    grid[i] = ((n_points - 1 - i) * beta_min + i * beta_max) / steps;
  }
  return grid;
}

PatternSeries sweep_at(const std::vector<double>& betas, const FarFieldEvaluator& evaluator,
                       const IncidentWave& wave, double screen_R) {
  PatternSeries series;
  series.beta = betas;
  series.singles.assign(betas.size(), 0.0);
  series.coincidence.assign(betas.size(), 0.0);
  parallel_for(betas.size(), [&](std::size_t i) {
    const ComplexVec3 amp = evaluator.total(betas[i], screen_R, wave).value;
    series.singles[i] = singles_intensity(amp);
    series.coincidence[i] = coincidence_intensity(amp, amp);
  });
  return series;
}

PatternSeries sweep(double beta_min, double beta_max, int n_points, const SimulationConfig& config) {
  const auto betas = uniform_grid(beta_min, beta_max, n_points);
  const FarFieldEvaluator evaluator(config.geometry, config.wave.wavelength, config.truncation,
                                    config.variant, config.alpha);
  return sweep_at(betas, evaluator, config.wave, config.screen_R);
}

double coincidence_at(double beta_s, double beta_i, const FarFieldEvaluator& evaluator,
                      const IncidentWave& wave, double screen_R) {
  return coincidence_intensity(evaluator.total(beta_s, screen_R, wave).value,
                               evaluator.total(beta_i, screen_R, wave).value);
}

namespace {

void normalize_in_place(std::vector<double>& values) {
  if (values.empty()) return;
  const double peak = *std::max_element(values.begin(), values.end());
  if (peak > 0.0) {
    for (double& v : values) v /= peak;
  }
}

}  // namespace

PatternSeries normalize(PatternSeries series) {
  normalize_in_place(series.singles);
  normalize_in_place(series.coincidence);
  series.normalized = true;
  return series;
}

SimulationConfig single_slit_envelope_config(const SimulationConfig& config) {
  SimulationConfig envelope = config;
  envelope.geometry.slit_count = 1;
  envelope.wave.c1 = 1.0;
  envelope.wave.c2 = 0.0;
  return envelope;
}

namespace {

// Vertex offset of the parabola through three equally spaced samples, in
// units of the spacing.
double parabola_offset(double left, double centre, double right) {
  const double curvature = left - 2.0 * centre + right;
  if (curvature == 0.0) return 0.0;
  return std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
}

double refined_position(const std::vector<double>& x, const std::vector<double>& y, std::size_t i) {
  const double h = 0.5 * (x[i + 1] - x[i - 1]);
  return x[i] + parabola_offset(y[i - 1], y[i], y[i + 1]) * h;
}

}  // namespace

std::vector<double> find_peaks(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) peaks.push_back(refined_position(x, y, i));
  }
  return peaks;
}

std::optional<double> first_minimum_after_zero(const std::vector<double>& x,
                                               const std::vector<double>& y) {
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (x[i] <= 0.0) continue;
    if (y[i] < y[i - 1] && y[i] <= y[i + 1]) return refined_position(x, y, i);
  }
  return std::nullopt;
}

std::optional<FringeMetrics> fringe_metrics(const PatternSeries& series, Channel which,
                                            const PatternSeries* envelope) {
  const auto& values = series.channel(which);
  if (series.size() < 3 || values.size() != series.size()) return std::nullopt;
  FringeMetrics metrics;
  metrics.peak_positions = find_peaks(series.beta, values);
  if (metrics.peak_positions.empty()) return std::nullopt;

  std::vector<double> central;
  for (double p : metrics.peak_positions) {
    if (std::abs(p) <= kSpacingWindow) central.push_back(p);
  }
  if (central.size() >= 2) {
    metrics.mean_fringe_spacing = (central.back() - central.front()) / (central.size() - 1);
  }

  // Visibility of the fringe group around the peak nearest beta = 0: the
  // sampled maximum against the deeper of its two neighbouring minima.
  std::size_t centre = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] >= values[i + 1] &&
        (centre == 0 || std::abs(series.beta[i]) < std::abs(series.beta[centre]))) {
      centre = i;
    }
  }
  const double i_max = values[centre];
  double i_min = i_max;
  for (std::size_t i = centre; i > 0 && values[i - 1] <= values[i]; --i) i_min = std::min(i_min, values[i - 1]);
  double right_min = i_max;
  for (std::size_t i = centre; i + 1 < values.size() && values[i + 1] <= values[i]; ++i) {
    right_min = std::min(right_min, values[i + 1]);
  }
  i_min = std::min(i_min, right_min);
  if (i_max + i_min > 0.0) metrics.visibility = (i_max - i_min) / (i_max + i_min);

  if (envelope != nullptr) {
    metrics.first_envelope_zero = first_minimum_after_zero(envelope->beta, envelope->channel(which));
  }
  return metrics;
}

}  // namespace slitwave

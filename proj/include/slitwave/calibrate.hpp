#pragma once

// Least-squares calibration of the free model constants against measured
// count profiles, using a bounded Nelder-Mead simplex.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slitwave/config.hpp"
#include "slitwave/kirchhoff.hpp"
#include "slitwave/observables.hpp"

namespace slitwave {

struct ReferenceSeries {
  std::vector<double> beta;
  std::vector<double> counts;
  std::optional<std::vector<double>> sigma;
};

std::vector<Violation> validate(const ReferenceSeries& ref);

enum class FitParameter { C1, AmplitudeScale, LengthB, ThicknessC };

std::string to_string(FitParameter which);
FitParameter parse_fit_parameter(const std::string& text);

struct ParameterBounds {
  FitParameter which = FitParameter::C1;
  double initial = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct FitSpec {
  std::vector<ParameterBounds> free;
  Channel target = Channel::Singles;
  int max_evals = 500;
  double tol = 1e-8;  ///< simplex spread, in units of each parameter's bound width
};

std::vector<Violation> validate(const FitSpec& spec);

struct FitParams {
  double c1 = 1.0;
  double c2 = 0.0;
  double amplitude_scale = 1.0;
  double length_b = 0.0;
  double thickness_c = 0.0;
};

/// Parameters as given by a configuration, with unit amplitude scale.
FitParams params_from_config(const SimulationConfig& config);

struct FitResult {
  FitParams params;
  double rss = 0.0;
  int evaluations = 0;
  bool converged = false;
  double final_spread = 0.0;
  std::vector<double> residuals;
  std::vector<double> best_rss_history;  ///< best-so-far rss after each iteration
};

/// Peak-normalized singles or coincidence pattern times amplitude_scale at
/// the given angles. Rebuilds the modal tables only when b or c' change.
class PatternModel {
 public:
  PatternModel(SimulationConfig config, Channel target);

  std::vector<double> evaluate(const FitParams& params, const std::vector<double>& betas);

 private:
  SimulationConfig config_;
  Channel target_;
  std::unique_ptr<FarFieldEvaluator> evaluator_;
  double cached_b_ = -1.0;
  double cached_c_ = -1.0;
};

/// (model(beta_i) - counts_i) / sigma_i, sigma_i = 1 when absent.
std::vector<double> residuals(const FitParams& params, const ReferenceSeries& ref,
                              const SimulationConfig& config, Channel target = Channel::Singles);

/// Deterministic bounded simplex fit with one restart from the best point.
/// When c1 is free, c2 = sqrt(1 - c1^2).
FitResult fit(const FitSpec& spec, const ReferenceSeries& ref, const SimulationConfig& config);

}  // namespace slitwave

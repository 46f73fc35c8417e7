#include "slitwave/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace slitwave {

std::vector<Violation> validate(const ReferenceSeries& ref) {
  std::vector<Violation> out;
  if (ref.beta.size() != ref.counts.size()) out.push_back({"counts", "length differs from beta"});
  if (ref.sigma && ref.sigma->size() != ref.beta.size()) {
    out.push_back({"sigma", "length differs from beta"});
  }
  if (ref.beta.empty()) out.push_back({"beta", "no reference points"});
  for (std::size_t i = 1; i < ref.beta.size(); ++i) {
    if (!(ref.beta[i] > ref.beta[i - 1])) {
      out.push_back({"beta", "not strictly increasing at index " + std::to_string(i)});
      break;
    }
  }
  for (std::size_t i = 0; i < ref.counts.size(); ++i) {
    if (!(ref.counts[i] >= 0.0)) {
      out.push_back({"counts", "negative or NaN at index " + std::to_string(i)});
      break;
    }
  }
  if (ref.sigma) {
    for (std::size_t i = 0; i < ref.sigma->size(); ++i) {
      if (!((*ref.sigma)[i] > 0.0)) {
        out.push_back({"sigma", "non-positive at index " + std::to_string(i)});
        break;
      }
    }
  }
  return out;
}

std::string to_string(FitParameter which) {
  switch (which) {
    case FitParameter::C1: return "c1";
    case FitParameter::AmplitudeScale: return "amplitude_scale";
    case FitParameter::LengthB: return "length_b";
    case FitParameter::ThicknessC: return "thickness_c";
  }
  return "?";
}

FitParameter parse_fit_parameter(const std::string& text) {
  if (text == "c1") return FitParameter::C1;
  if (text == "amplitude_scale" || text == "scale") return FitParameter::AmplitudeScale;
  if (text == "length_b" || text == "b") return FitParameter::LengthB;
  if (text == "thickness_c" || text == "c" || text == "thickness") return FitParameter::ThicknessC;
  throw ConfigError("unknown fit parameter '" + text + "'");
}

std::vector<Violation> validate(const FitSpec& spec) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < spec.free.size(); ++i) {
    const auto& p = spec.free[i];
    const std::string name = to_string(p.which);
    if (!(p.lower < p.upper)) out.push_back({name, "lower bound must be below upper bound"});
    if (!(p.initial >= p.lower && p.initial <= p.upper)) {
      out.push_back({name, "initial value outside bounds"});
    }
    if (p.which == FitParameter::C1 && !(p.lower > 0.0 && p.upper <= 1.0)) {
      out.push_back({name, "bounds must lie in (0, 1]"});
    }
    if ((p.which == FitParameter::LengthB) && !(p.lower > 0.0)) {
      out.push_back({name, "lower bound must be > 0"});
    }
    if (p.which == FitParameter::ThicknessC && !(p.lower >= 0.0)) {
      out.push_back({name, "lower bound must be >= 0"});
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (spec.free[j].which == p.which) out.push_back({name, "listed twice"});
    }
  }
  if (spec.max_evals < 1) out.push_back({"max_evals", "must be >= 1"});
  if (!(spec.tol > 0.0)) out.push_back({"tol", "must be > 0"});
  return out;
}

FitParams params_from_config(const SimulationConfig& config) {
  return {config.wave.c1, config.wave.c2, 1.0, config.geometry.length_b,
          config.geometry.thickness_c};
}

PatternModel::PatternModel(SimulationConfig config, Channel target)
    : config_(std::move(config)), target_(target) {}

std::vector<double> PatternModel::evaluate(const FitParams& params,
                                           const std::vector<double>& betas) {
  if (!evaluator_ || params.length_b != cached_b_ || params.thickness_c != cached_c_) {
    SlitGeometry geom = config_.geometry;
    geom.length_b = params.length_b;
    geom.thickness_c = params.thickness_c;
    evaluator_ = std::make_unique<FarFieldEvaluator>(geom, config_.wave.wavelength,
                                                     config_.truncation, config_.variant,
                                                     config_.alpha);
    cached_b_ = params.length_b;
    cached_c_ = params.thickness_c;
  }
  IncidentWave wave = config_.wave;
  wave.c1 = params.c1;
  wave.c2 = params.c2;

  std::vector<double> values(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    try {
      const ComplexVec3 amp = evaluator_->total(betas[i], config_.screen_R, wave).value;
      values[i] = target_ == Channel::Singles ? singles_intensity(amp)
                                              : coincidence_intensity(amp, amp);
    } catch (const DomainError& e) {
      std::ostringstream msg;
      msg << "model evaluation failed at beta = " << betas[i] << " rad: " << e.what();
      throw DomainError(msg.str());
    }
  }
  const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  for (double& v : values) v = peak > 0.0 ? params.amplitude_scale * v / peak : 0.0;
  return values;
}

namespace {

std::vector<double> residuals_with(PatternModel& model, const FitParams& params,
                                   const ReferenceSeries& ref) {
  std::vector<double> out = model.evaluate(params, ref.beta);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double sigma = ref.sigma ? (*ref.sigma)[i] : 1.0;
    out[i] = (out[i] - ref.counts[i]) / sigma;
  }
  return out;
}

double sum_of_squares(const std::vector<double>& r) {
  return std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
}

void require(const std::vector<Violation>& problems, const char* what) {
  if (!problems.empty()) throw ConfigError(std::string(what) + "\n" + describe(problems));
}

// Objective over the unit box [0,1]^d that maps each coordinate onto its
// parameter bounds.
class BoxedObjective {
 public:
  BoxedObjective(const FitSpec& spec, const FitParams& base, PatternModel& model,
                 const ReferenceSeries& ref)
      : spec_(spec), base_(base), model_(model), ref_(ref) {}

  FitParams params_at(const std::vector<double>& u) const {
    FitParams p = base_;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto& b = spec_.free[i];
      const double value = b.lower + std::clamp(u[i], 0.0, 1.0) * (b.upper - b.lower);
      switch (b.which) {
        case FitParameter::C1:
          p.c1 = value;
          p.c2 = std::sqrt(std::max(0.0, 1.0 - value * value));
          break;
        case FitParameter::AmplitudeScale: p.amplitude_scale = value; break;
        case FitParameter::LengthB: p.length_b = value; break;
        case FitParameter::ThicknessC: p.thickness_c = value; break;
      }
    }
    return p;
  }

  double operator()(const std::vector<double>& u) {
    ++evaluations;
    return sum_of_squares(residuals_with(model_, params_at(u), ref_));
  }

  int evaluations = 0;

 private:
  const FitSpec& spec_;
  FitParams base_;
  PatternModel& model_;
  const ReferenceSeries& ref_;
};

struct Simplex {
  std::vector<std::vector<double>> vertices;
  std::vector<double> values;

  void sort() {
    std::vector<std::size_t> order(vertices.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> v;
    std::vector<double> f;
    for (std::size_t i : order) {
      v.push_back(vertices[i]);
      f.push_back(values[i]);
    }
    vertices = std::move(v);
    values = std::move(f);
  }

  double spread() const {
    double s = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i) {
      for (std::size_t j = 0; j < vertices[i].size(); ++j) {
        s = std::max(s, std::abs(vertices[i][j] - vertices[0][j]));
      }
    }
    return s;
  }
};

std::vector<double> clamp_unit(std::vector<double> u) {
  for (double& x : u) x = std::clamp(x, 0.0, 1.0);
  return u;
}

std::vector<double> affine(const std::vector<double>& base, const std::vector<double>& toward,
                           double t) {
  std::vector<double> out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + t * (toward[i] - base[i]);
  return clamp_unit(std::move(out));
}

struct DescentOutcome {
  std::vector<double> best;
  double best_value;
  bool converged;
  double spread;
};

DescentOutcome nelder_mead(BoxedObjective& objective, const std::vector<double>& start,
                           double step, int max_evals, double tol, std::vector<double>& history) {
  const std::size_t dim = start.size();
  Simplex simplex;
  simplex.vertices.push_back(start);
  simplex.values.push_back(objective(start));
  for (std::size_t i = 0; i < dim && objective.evaluations < max_evals; ++i) {
    std::vector<double> v = start;
    v[i] = v[i] + step <= 1.0 ? v[i] + step : v[i] - step;
    simplex.vertices.push_back(v);
    simplex.values.push_back(objective(v));
  }
  simplex.sort();
  if (simplex.vertices.size() < dim + 1) {
    return {simplex.vertices[0], simplex.values[0], false, 1.0};
  }

  while (true) {
    const double spread = simplex.spread();
    history.push_back(simplex.values[0]);
    if (spread < tol) return {simplex.vertices[0], simplex.values[0], true, spread};
    if (objective.evaluations >= max_evals) {
      return {simplex.vertices[0], simplex.values[0], false, spread};
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex.vertices[i][j] / dim;
    }
    auto& worst = simplex.vertices[dim];
    double& f_worst = simplex.values[dim];

    const auto reflected = affine(centroid, worst, -1.0);
    const double f_reflected = objective(reflected);
    if (f_reflected < simplex.values[0]) {
      const auto expanded = affine(centroid, worst, -2.0);
      const double f_expanded =
          objective.evaluations < max_evals ? objective(expanded) : f_reflected + 1.0;
      if (f_expanded < f_reflected) {
        worst = expanded;
        f_worst = f_expanded;
      } else {
        worst = reflected;
        f_worst = f_reflected;
      }
    } else if (f_reflected < simplex.values[dim - 1]) {
      worst = reflected;
      f_worst = f_reflected;
    } else {
      const bool outside = f_reflected < f_worst;
      const auto contracted = outside ? affine(centroid, reflected, 0.5) : affine(centroid, worst, 0.5);
      const double f_contracted = objective(contracted);
      if (f_contracted < std::min(f_reflected, f_worst)) {
        worst = contracted;
        f_worst = f_contracted;
      } else {
        for (std::size_t i = 1; i <= dim && objective.evaluations < max_evals; ++i) {
          simplex.vertices[i] = affine(simplex.vertices[0], simplex.vertices[i], 0.5);
          simplex.values[i] = objective(simplex.vertices[i]);
        }
      }
    }
    simplex.sort();
  }
}

}  // namespace

std::vector<double> residuals(const FitParams& params, const ReferenceSeries& ref,
                              const SimulationConfig& config, Channel target) {
  require(validate(ref), "invalid reference series");
  PatternModel model(config, target);
  return residuals_with(model, params, ref);
}

FitResult fit(const FitSpec& spec, const ReferenceSeries& ref, const SimulationConfig& config) {
  require(validate(spec), "invalid fit spec");
  require(validate(ref), "invalid reference series");
  require_valid(config);

  PatternModel model(config, spec.target);
  const FitParams base = params_from_config(config);
  BoxedObjective objective(spec, base, model, ref);

  FitResult result;
  if (spec.free.empty()) {
    result.params = base;
    result.residuals = residuals_with(model, base, ref);
    result.rss = sum_of_squares(result.residuals);
    result.evaluations = 1;
    result.converged = true;
    result.best_rss_history.push_back(result.rss);
    return result;
  }

  std::vector<double> start;
  for (const auto& b : spec.free) start.push_back((b.initial - b.lower) / (b.upper - b.lower));

  DescentOutcome first =
      nelder_mead(objective, start, 0.1, spec.max_evals, spec.tol, result.best_rss_history);
  DescentOutcome best = first;
  if (objective.evaluations < spec.max_evals) {
    // Restart once from the best vertex with a fresh, smaller simplex.
    std::vector<double> history;
    DescentOutcome second =
        nelder_mead(objective, first.best, 0.02, spec.max_evals, spec.tol, history);
    const double floor_value = result.best_rss_history.back();
    for (double h : history) result.best_rss_history.push_back(std::min(h, floor_value));
    if (second.best_value <= first.best_value) {
      best = second;
    } else {
      best.converged = first.converged && second.converged;
    }
  }

  result.params = objective.params_at(best.best);
  result.residuals = residuals_with(model, result.params, ref);
  result.rss = sum_of_squares(result.residuals);
  result.evaluations = objective.evaluations;
  result.converged = best.converged;
  result.final_spread = best.spread;
  return result;
}

}  // namespace slitwave

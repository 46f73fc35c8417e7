// slitwave: simulate single/double-slit photon patterns, cross-check the
// closed-form far field against brute-force quadrature, and fit free
// constants to measured counts.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "slitwave/calibrate.hpp"
#include "slitwave/io.hpp"
#include "slitwave/observables.hpp"
#include "slitwave/selfcheck.hpp"

namespace fs = std::filesystem;
using namespace slitwave;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kValidationFailure = 3, kIoFailure = 4 };

struct CommonOptions {
  std::string config_path;
  std::string preset_name;
  std::string out_dir = ".";
  bool svg = false;
  int points = 0;
  double beta_range_mrad = 0.0;
  int slits = 0;
  std::string variant;
  double c1 = NAN;
  double c2 = NAN;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration (or a run manifest)");
  cmd->add_option("--preset", o.preset_name, "Built-in configuration (paper_fig4)");
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_flag("--svg", o.svg, "Also write an SVG plot");
  cmd->add_option("--points", o.points, "Number of beta samples");
  cmd->add_option("--beta-range", o.beta_range_mrad, "Scan |beta| <= MRAD");
  cmd->add_option("--slits", o.slits, "Slit count (1 or 2)");
  cmd->add_option("--variant", o.variant, "Second-slit mode variant (literal|shifted)");
  cmd->add_option("--c1", o.c1, "Slit-1 superposition coefficient");
  cmd->add_option("--c2", o.c2, "Slit-2 superposition coefficient");
}

SimulationConfig resolve_config(const CommonOptions& o) {
  SimulationConfig config = o.preset_name.empty() ? SimulationConfig{} : preset(o.preset_name);
  if (o.config_path.empty() && o.preset_name.empty()) config = paper_fig4_config();
  if (!o.config_path.empty()) config = load_config(o.config_path, config);
  if (o.points != 0) config.points = o.points;
  if (o.beta_range_mrad != 0.0) {
    config.beta_min = -o.beta_range_mrad * 1e-3;
    config.beta_max = o.beta_range_mrad * 1e-3;
  }
  if (o.slits != 0) config.geometry.slit_count = o.slits;
  if (!o.variant.empty()) config.variant = parse_variant(o.variant);
  if (!std::isnan(o.c1)) config.wave.c1 = o.c1;
  if (!std::isnan(o.c2)) config.wave.c2 = o.c2;
  require_valid(config);
  return config;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

std::string to_text(const PatternSeries& series) {
  std::ostringstream out;
  write_pattern_csv(out, series);
  return out.str();
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_simulate(const CommonOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const SimulationConfig config = resolve_config(o);
  const fs::path dir(o.out_dir);
  ensure_directory(dir);

  const FarFieldEvaluator evaluator(config.geometry, config.wave.wavelength, config.truncation,
                                    config.variant, config.alpha);
  const auto betas = uniform_grid(config.beta_min, config.beta_max, config.points);
  const PatternSeries series = normalize(sweep_at(betas, evaluator, config.wave, config.screen_R));

  RunManifest manifest{config, "simulate", evaluator.report(), {"pattern.csv"}};
  write_text_file(dir / "pattern.csv", to_text(series));
  if (o.svg) {
    const std::string svg = render_svg(
        {{"singles", "#1f77b4", series.beta, series.singles},
         {"coincidence", "#d62728", series.beta, series.coincidence}},
        "Normalized detector counts", "beta (rad)", "normalized counts");
    write_text_file(dir / "pattern.svg", svg);
    manifest.outputs.push_back("pattern.svg");
  }
  manifest.outputs.push_back("manifest.json");
  write_text_file(dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");

  std::cout << "wrote " << series.size() << " points to " << (dir / "pattern.csv").string() << '\n';
  std::cout << "modes: " << evaluator.report().width_modes << " width x up to "
            << evaluator.report().max_length_modes << " length (" << evaluator.report().total_modes
            << " total)\n";
  if (const auto metrics = fringe_metrics(series, Channel::Singles)) {
    if (metrics->mean_fringe_spacing > 0.0) {
      std::cout << "fringe spacing: " << metrics->mean_fringe_spacing * 1e3 << " mrad, visibility "
                << metrics->visibility << '\n';
    }
  }
  std::cout << "elapsed: " << std::fixed << std::setprecision(3) << elapsed(start) << " s\n";
  return kOk;
}

int cmd_validate(bool fast, bool inject_fault) {
  const auto results = run_self_checks({fast, inject_fault});
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": measured " << std::scientific
              << std::setprecision(3) << r.measured << " (tolerance " << r.tolerance << ") ["
              << r.detail << "]\n";
    all = all && r.passed;
  }
  return all ? kOk : kValidationFailure;
}

struct FitOptions {
  std::string reference;
  std::string free = "c1,amplitude_scale";
  std::vector<std::string> start;
  std::vector<std::string> bounds;
  std::string target = "singles";
  int max_evals = 500;
  double tol = 1e-8;
};

ParameterBounds default_bounds(FitParameter which, const FitParams& p) {
  switch (which) {
    case FitParameter::C1: return {which, std::clamp(p.c1, 0.5, 1.0), 0.5, 1.0};
    case FitParameter::AmplitudeScale: return {which, 1.0, 0.0, 5.0};
    case FitParameter::LengthB: return {which, p.length_b, 0.5 * p.length_b, 2.0 * p.length_b};
    case FitParameter::ThicknessC: {
      const double hi = p.thickness_c > 0.0 ? 4.0 * p.thickness_c : 1e-4;
      return {which, p.thickness_c, 0.0, hi};
    }
  }
  return {};
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("expected NAME=VALUE, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

double number(const std::string& text) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError("not a number: '" + text + "'");
  }
}

FitSpec build_fit_spec(const FitOptions& f, const SimulationConfig& config) {
  FitSpec spec;
  spec.max_evals = f.max_evals;
  spec.tol = f.tol;
  if (f.target == "singles") {
    spec.target = Channel::Singles;
  } else if (f.target == "coincidence") {
    spec.target = Channel::Coincidence;
  } else {
    throw ConfigError("unknown target '" + f.target + "'");
  }
  const FitParams base = params_from_config(config);
  std::stringstream names(f.free);
  std::string name;
  while (std::getline(names, name, ',')) {
    if (name.empty()) continue;
    spec.free.push_back(default_bounds(parse_fit_parameter(name), base));
  }
  auto find = [&](const std::string& key) -> ParameterBounds& {
    const FitParameter which = parse_fit_parameter(key);
    for (auto& b : spec.free) {
      if (b.which == which) return b;
    }
    throw ConfigError("parameter '" + key + "' is not free");
  };
  for (const auto& s : f.start) {
    const auto [key, value] = split_assignment(s);
    find(key).initial = number(value);
  }
  for (const auto& s : f.bounds) {
    const auto [key, value] = split_assignment(s);
    const auto colon = value.find(':');
    if (colon == std::string::npos) throw ConfigError("bounds must be NAME=LO:HI");
    auto& b = find(key);
    b.lower = number(value.substr(0, colon));
    b.upper = number(value.substr(colon + 1));
  }
  return spec;
}

int cmd_fit(const CommonOptions& o, const FitOptions& f) {
  const SimulationConfig config = resolve_config(o);
  const FitSpec spec = build_fit_spec(f, config);
  ReferenceSeries ref;
  {
    std::ifstream in(f.reference, std::ios::binary);
    if (!in) throw IoError("cannot open reference " + f.reference);
    ref = read_reference_csv(in);
  }
  const FitResult result = fit(spec, ref, config);

  PatternModel model(config, spec.target);
  const auto curve = model.evaluate(result.params, ref.beta);
  const fs::path dir(o.out_dir);
  ensure_directory(dir);
  std::ostringstream overlay;
  write_overlay_csv(overlay, ref, curve, result.residuals);
  write_text_file(dir / "overlay.csv", overlay.str());

  std::cout << std::setprecision(10);
  std::cout << "c1 = " << result.params.c1 << "\nc2 = " << result.params.c2
            << "\namplitude_scale = " << result.params.amplitude_scale
            << "\nlength_b = " << result.params.length_b
            << " m\nthickness_c = " << result.params.thickness_c << " m\nrss = " << result.rss
            << "\nevaluations = " << result.evaluations
            << "\nconverged = " << (result.converged ? "true" : "false") << '\n';
  std::cout << "wrote " << (dir / "overlay.csv").string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slitwave: modal Kirchhoff simulation of one- and two-photon slit patterns"};
  app.require_subcommand(1);

  CommonOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Compute singles and coincidence patterns");
  add_common(simulate, sim_opts);

  bool fast = false;
  bool inject_fault = false;
  auto* validate_cmd = app.add_subcommand("validate", "Cross-check closed forms against quadrature");
  validate_cmd->add_flag("--fast", fast, "Reduced grids");
  validate_cmd->add_flag("--inject-fault", inject_fault)->group("");

  CommonOptions fit_opts;
  FitOptions fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit free parameters to a reference count profile");
  add_common(fit_cmd, fit_opts);
  fit_cmd->add_option("--reference", fit_args.reference, "CSV with beta_mrad,counts[,sigma]")
      ->required();
  fit_cmd->add_option("--free", fit_args.free,
                      "Comma list from c1, amplitude_scale, length_b, thickness_c");
  fit_cmd->add_option("--start", fit_args.start, "Initial value, NAME=VALUE")->delimiter(',');
  fit_cmd->add_option("--bounds", fit_args.bounds, "Bounds, NAME=LO:HI");
  fit_cmd->add_option("--target", fit_args.target, "singles or coincidence");
  fit_cmd->add_option("--max-evals", fit_args.max_evals, "Objective evaluation budget");
  fit_cmd->add_option("--tol", fit_args.tol, "Simplex spread tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(sim_opts);
    if (*validate_cmd) return cmd_validate(fast, inject_fault);
    if (*fit_cmd) return cmd_fit(fit_opts, fit_args);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const CsvError& e) {
    std::cerr << "reference data error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  return kOk;
}

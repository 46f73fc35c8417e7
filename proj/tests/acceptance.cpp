// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Runs on the preset double-slit configuration with its
// default (Literal) second-slit variant unless a criterion says otherwise.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "slitwave/calibrate.hpp"
#include "slitwave/io.hpp"
#include "slitwave/kirchhoff.hpp"
#include "slitwave/observables.hpp"
#include "slitwave/selfcheck.hpp"
#include "slitwave/slit_field.hpp"

using namespace slitwave;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& title, const std::function<Outcome()>& run) {
  Outcome outcome;
  try {
    outcome = run();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  if (!outcome.passed) ++failures;
  std::cout << (outcome.passed ? "PASS " : "FAIL ") << id << ' ' << title << ": " << outcome.detail
            << std::endl;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

Outcome ac1_boundary() {
  const auto start = Clock::now();
  const SlitGeometry geom = paper_fig4_config().geometry;
  IncidentWave wave;
  wave.wavelength = 916e-9;
  wave.amplitude = {0.896, 0.896, 0.896};
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> mode(0, 200);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int nonzero = 0;
  for (int trial = 0; trial < 100; ++trial) {
    TruncationPolicy trunc;
    trunc.max_m = mode(rng);
    trunc.max_n = mode(rng);
    const int slit = 1 + trial % 2;
    const double y0 = slit == 1 ? 0.0 : geom.width_a + geom.separation_d;
    const double z = unit(rng) * geom.thickness_c;
    const double walls_x[] = {0.0, geom.length_b};
    const double walls_y[] = {y0, y0 + geom.width_a};
    const ComplexVec3 on_x = slit_wavefunction(walls_x[trial % 2], y0 + unit(rng) * geom.width_a,
                                               z, 0.0, slit, geom, wave, trunc);
    const ComplexVec3 on_y = slit_wavefunction(unit(rng) * geom.length_b, walls_y[(trial / 2) % 2],
                                               z, 0.0, slit, geom, wave, trunc);
    if (!(on_x == ComplexVec3{})) ++nonzero;
    if (!(on_y == ComplexVec3{})) ++nonzero;
  }
  const double elapsed = seconds_since(start);
  return {nonzero == 0 && elapsed < 1.0,
          std::to_string(nonzero) + " non-zero wall values in 200, " + fmt(elapsed) + " s (limit 1 s)"};
}

Outcome from_check(const CheckResult& r, double seconds, double limit_seconds) {
  const bool in_time = limit_seconds <= 0.0 || seconds < limit_seconds;
  std::string detail = "measured " + fmt(r.measured) + " (tolerance " + fmt(r.tolerance) + "), " +
                       fmt(seconds) + " s";
  if (limit_seconds > 0.0) detail += " (limit " + fmt(limit_seconds) + " s)";
  return {r.passed && in_time, detail + "; " + r.detail};
}

Outcome ac2_coefficients() {
  const auto start = Clock::now();
  const CheckResult r = check_mode_coefficients({});
  return from_check(r, seconds_since(start), 0.0);
}

// |lap psi + k^2 psi| / |k^2 psi| with a 7-point stencil of spacing h.
double helmholtz_residual(double x, double y, double z, double h, const SlitGeometry& geom,
                          const IncidentWave& wave, const TruncationPolicy& trunc) {
  auto psi = [&](double px, double py, double pz) {
    return slit_wavefunction(px, py, pz, 0.0, 1, geom, wave, trunc).x;
  };
  const cplx centre = psi(x, y, z);
  const cplx lap = (psi(x + h, y, z) + psi(x - h, y, z) + psi(x, y + h, z) + psi(x, y - h, z) +
                    psi(x, y, z + h) + psi(x, y, z - h) - 6.0 * centre) /
                   (h * h);
  const double k = wavenumber(wave);
  return std::abs(lap + k * k * centre) / std::abs(k * k * centre);
}

Outcome ac3_helmholtz() {
  const SlitGeometry geom = paper_fig4_config().geometry;
  IncidentWave wave;
  wave.wavelength = 916e-9;
  TruncationPolicy trunc;
  trunc.max_m = 4;
  trunc.max_n = 4;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> unit(0.15, 0.85);
  const double h = wave.wavelength / 20.0;
  double lo = 1e300;
  double hi = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = unit(rng) * geom.length_b;
    const double y = unit(rng) * geom.width_a;
    const double z = unit(rng) * geom.thickness_c;
    const double ratio = helmholtz_residual(x, y, z, h, geom, wave, trunc) /
                         helmholtz_residual(x, y, z, h / 2.0, geom, wave, trunc);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo >= 3.5 && hi <= 4.5,
          "error ratio over 20 points in [" + fmt(lo) + ", " + fmt(hi) + "] (need 4 +- 0.5)"};
}

Outcome ac4_line_integrals() {
  const auto start = Clock::now();
  const CheckResult r = check_line_integrals({});
  return from_check(r, seconds_since(start), 10.0);
}

Outcome ac5_far_field() {
  const auto start = Clock::now();
  const CheckResult r = check_far_field({});
  return from_check(r, seconds_since(start), 120.0);
}

double max_asymmetry(const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    worst = std::max(worst, std::abs(v[i] - v[v.size() - 1 - i]));
  }
  return worst;
}

Outcome ac6_symmetry(const PatternSeries& literal) {
  const double singles = max_asymmetry(literal.singles);
  const double coincidence = max_asymmetry(literal.coincidence);
  SimulationConfig shifted = paper_fig4_config();
  shifted.variant = ModeVariant::Shifted;
  const PatternSeries s = normalize(sweep(shifted.beta_min, shifted.beta_max, shifted.points, shifted));
  const double shifted_worst = std::max(max_asymmetry(s.singles), max_asymmetry(s.coincidence));
  return {singles < 1e-10 && coincidence < 1e-10,
          "max |P(b) - P(-b)| singles " + fmt(singles) + ", coincidence " + fmt(coincidence) +
              " (limit 1e-10, literal variant); shifted variant for reference: " +
              fmt(shifted_worst)};
}

Outcome ac7_spacing(const PatternSeries& pattern) {
  const SimulationConfig config = paper_fig4_config();
  const auto metrics = fringe_metrics(pattern, Channel::Singles);
  if (!metrics) return {false, "no interior peaks found"};
  const double law = config.wave.wavelength / (config.geometry.width_a + config.geometry.separation_d);
  const double ratio = metrics->mean_fringe_spacing / law;
  return {std::abs(ratio - 1.0) < 0.02, "spacing " + fmt(metrics->mean_fringe_spacing * 1e3) +
                                            " mrad vs lambda/(a+d) = " + fmt(law * 1e3) +
                                            " mrad, ratio " + fmt(ratio) + " (need within 2%)"};
}

Outcome ac8_envelope() {
  const SimulationConfig config = paper_fig4_config();
  const PatternSeries envelope =
      normalize(sweep(0.0, 12e-3, 1201, single_slit_envelope_config(config)));
  const auto zero = first_minimum_after_zero(envelope.beta, envelope.singles);
  if (!zero) return {false, "no envelope minimum in (0, 12] mrad"};
  const double law = config.wave.wavelength / config.geometry.width_a;
  const double ratio = *zero / law;
  return {std::abs(ratio - 1.0) < 0.02, "first zero " + fmt(*zero * 1e3) + " mrad vs lambda/a = " +
                                            fmt(law * 1e3) + " mrad, ratio " + fmt(ratio) +
                                            " (need within 2%)"};
}

Outcome ac9_square_law(const PatternSeries& pattern) {
  double worst = 0.0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    worst = std::max(worst, std::abs(pattern.coincidence[i] - pattern.singles[i] * pattern.singles[i]));
  }
  return {worst < 1e-10, "max |C - S^2| = " + fmt(worst) + " over " +
                             std::to_string(pattern.size()) + " points (limit 1e-10)"};
}

Outcome ac10_phase_identity() {
  const SimulationConfig config = paper_fig4_config();
  const SlitGeometry& geom = config.geometry;
  const FarFieldEvaluator evaluator(geom, config.wave.wavelength, config.truncation,
                                    ModeVariant::Shifted);
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> beta(config.beta_min, config.beta_max);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double b = beta(rng);
    const cplx one = evaluator.scalar_slit_amplitude(1, b, config.screen_R);
    const cplx two = evaluator.scalar_slit_amplitude(2, b, config.screen_R);
    const cplx phase =
        std::exp(cplx(0.0, -evaluator.k() * std::sin(b) * (geom.width_a + geom.separation_d)));
    worst = std::max(worst, std::abs(two - one * phase) / std::abs(one * phase));
  }
  return {worst < 1e-12, "max relative deviation " + fmt(worst) + " at 50 random beta (limit 1e-12)"};
}

Outcome ac11_calibration() {
  const SimulationConfig config = paper_fig4_config();
  FitParams truth = params_from_config(config);
  truth.c1 = 0.955;
  truth.c2 = std::sqrt(1.0 - truth.c1 * truth.c1);
  ReferenceSeries ref;
  ref.beta = uniform_grid(config.beta_min, config.beta_max, config.points);
  PatternModel model(config, Channel::Singles);
  ref.counts = model.evaluate(truth, ref.beta);

  FitSpec spec;
  spec.free = {{FitParameter::C1, 0.80, 0.5, 1.0}, {FitParameter::AmplitudeScale, 0.7, 0.0, 5.0}};
  const FitResult result = fit(spec, ref, config);
  const double error = std::abs(result.params.c1 - 0.955);
  return {error < 1e-3 && result.evaluations < 500,
          "c1 = " + fmt(result.params.c1) + " (|error| " + fmt(error) + ", limit 1e-3), " +
              std::to_string(result.evaluations) + " evaluations (limit 500)"};
}

Outcome ac12_end_to_end() {
  const fs::path root = fs::temp_directory_path() / "slitwave_acceptance";
  fs::remove_all(root);
  double slowest = 0.0;
  for (const char* run : {"run1", "run2"}) {
    fs::create_directories(root / run);
    const std::string cmd = std::string("\"") + SLITWAVE_CLI_PATH +
                            "\" simulate --preset paper_fig4 --out \"" + (root / run).string() +
                            "\" > \"" + (root / run / "stdout.txt").string() + "\" 2>&1";
    const auto start = Clock::now();
    const int code = std::system(cmd.c_str());
    slowest = std::max(slowest, seconds_since(start));
    if (code != 0) return {false, std::string("CLI exited with status ") + std::to_string(code)};
  }
  bool identical = true;
  for (const char* file : {"pattern.csv", "manifest.json"}) {
    const fs::path a = root / "run1" / file;
    const fs::path b = root / "run2" / file;
    if (!fs::exists(a) || !fs::exists(b) || read_text_file(a) != read_text_file(b)) identical = false;
  }
  std::istringstream csv(read_text_file(root / "run1" / "pattern.csv"));
  const PatternSeries written = read_pattern_csv(csv);
  fs::remove_all(root);
  const bool rows_ok = written.size() == 801;
  return {identical && rows_ok && slowest < 30.0,
          std::string(identical ? "CSV and manifest byte-identical" : "outputs differ") + ", " +
              std::to_string(written.size()) + " rows, slowest run " + fmt(slowest) +
              " s (limit 30 s)"};
}

}  // namespace

int main() {
  const SimulationConfig config = paper_fig4_config();
  const PatternSeries pattern =
      normalize(sweep(config.beta_min, config.beta_max, config.points, config));

  report("AC1", "boundary conditions", ac1_boundary);
  report("AC2", "mode coefficients vs 2-D quadrature", ac2_coefficients);
  report("AC3", "Helmholtz residual convergence", ac3_helmholtz);
  report("AC4", "line integrals vs quadrature", ac4_line_integrals);
  report("AC5", "far field vs surface quadrature", ac5_far_field);
  report("AC6", "pattern symmetry", [&] { return ac6_symmetry(pattern); });
  report("AC7", "fringe spacing", [&] { return ac7_spacing(pattern); });
  report("AC8", "envelope zero", ac8_envelope);
  report("AC9", "coincidence square law", [&] { return ac9_square_law(pattern); });
  report("AC10", "shifted-variant phase identity", ac10_phase_identity);
  report("AC11", "calibration round trip", ac11_calibration);
  report("AC12", "end-to-end CLI run", ac12_end_to_end);

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}

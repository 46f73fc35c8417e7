#pragma once

#include <string>
#include <vector>

namespace slitwave {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   ///< worst deviation observed
  double tolerance = 0.0;
  std::string detail;
};

struct SelfCheckOptions {
  bool fast = false;
  /// Flips the sign of the closed-form coefficients and line integrals
  /// before comparison so those checks fail. Used to test the harness itself.
  bool inject_fault = false;
};

/// q grid for line-integral checks: every resonance +-p pi/L for
/// p = 1..9 odd and the points 1e-4 relative on either side, then
/// log-spaced magnitudes of alternating sign up to `points` entries.
std::vector<double> line_integral_test_grid(double L, int points);

/// RMS difference between the peak-normalized single-slit |Phi(beta)| of the
/// closed form and of the full surface integral, for the reference slit with
/// 10 x 10 modes at R = 1000 (2a + d). Optionally returns both profiles.
double far_field_profile_rms(int beta_points, double beta_limit, std::vector<double>* closed,
                             std::vector<double>* oracle);

/// mode_coefficient against 2-D quadrature for (2m+1)(2n+1) <= 81 (25 fast).
CheckResult check_mode_coefficients(const SelfCheckOptions& options);
/// line_integral_sine against adaptive quadrature on the 200-point grid (90
/// fast), for slit 1 and both slit-2 variants.
CheckResult check_line_integrals(const SelfCheckOptions& options);
/// far_field_profile_rms over |beta| <= 5 mrad, 15 angles (5 fast).
CheckResult check_far_field(const SelfCheckOptions& options);

/// Cross-checks of the closed-form far-field path against the brute-force
/// oracle: coefficient quadrature, line integrals across resonances, and the
/// single-slit profile against the full surface integral.
std::vector<CheckResult> run_self_checks(const SelfCheckOptions& options);

}  // namespace slitwave

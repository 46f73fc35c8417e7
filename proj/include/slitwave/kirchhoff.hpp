#pragma once

// Far-field (Fraunhofer) diffraction amplitudes of the modal slit field,
// evaluated in closed form from the Kirchhoff surface integral.

#include <optional>
#include <utility>
#include <vector>

#include "slitwave/complex_vec3.hpp"
#include "slitwave/config.hpp"
#include "slitwave/slit_field.hpp"

namespace slitwave {

/// Half-width, in units of the harmonic index, of the window around
/// q = +-p pi / L where the series form of the line integral is used.
inline constexpr double kResonanceEps = 1e-6;

/// \int_{lo}^{hi} exp(-i q u) sin(p pi (u - s) / L) du, with s = 0 for
/// Literal and s = lo for Shifted.
cplx line_integral_sine(double q, int p, double L, Interval interval,
                        ModeVariant variant = ModeVariant::Literal);

/// Direction cosine sqrt(cos^2 alpha - sin^2 beta) between k2 and the slit normal.
/// Throws DomainError when sin^2 beta > cos^2 alpha.
double direction_cosine(double alpha, double beta);

/// i kz(m, n) + (i k - 1/R) sqrt(cos^2 alpha - sin^2 beta).
cplx obliquity_prefactor(ModeIndex idx, const DetectorDirection& dir, const SlitGeometry& geom,
                         double wavelength);

/// Global factor -exp(i k R) / (4 pi R) at t = 0.
cplx spherical_prefactor(double k, double R);

struct FarFieldAmplitude {
  DetectorDirection direction;
  ComplexVec3 value;
  std::optional<std::pair<ComplexVec3, ComplexVec3>> per_slit;
};

struct TruncationReport {
  int width_modes = 0;       ///< distinct m retained
  int max_length_modes = 0;  ///< largest per-row count of n retained
  long long total_modes = 0;
};

/// Precomputed modal sums for one geometry, wavelength and alpha. All terms
/// that do not depend on beta are folded into two per-width-mode sums, so a
/// direction costs O(width modes).
class FarFieldEvaluator {
 public:
  FarFieldEvaluator(const SlitGeometry& geom, double wavelength, const TruncationPolicy& trunc,
                    ModeVariant variant, double alpha = 0.0);

  /// Amplitude of one slit for unit incident amplitude (A_j = 1).
  cplx scalar_slit_amplitude(int slit_index, double beta, double screen_R) const;

  ComplexVec3 slit_amplitude(int slit_index, double beta, double screen_R,
                             const IncidentWave& wave) const;

  /// c1 Phi_1 + c2 Phi_2 (or Phi_1 alone for one slit).
  FarFieldAmplitude total(double beta, double screen_R, const IncidentWave& wave) const;

  const SlitGeometry& geometry() const { return geom_; }
  double alpha() const { return alpha_; }
  double k() const { return k_; }
  ModeVariant variant() const { return variant_; }
  const TruncationReport& report() const { return report_; }

 private:
  struct WidthMode {
    int m;
    double km;
    cplx s_kz;  // sum_n C e^{i kz c'} (i kz) Ix(n)
    cplx s_1;   // sum_n C e^{i kz c'} Ix(n)
  };

  SlitGeometry geom_;
  double k_;
  TruncationPolicy trunc_;
  ModeVariant variant_;
  double alpha_;
  std::vector<WidthMode> modes_;
  TruncationReport report_;
};

ComplexVec3 slit_amplitude(int slit_index, const DetectorDirection& dir, const SlitGeometry& geom,
                           const IncidentWave& wave, const TruncationPolicy& trunc,
                           ModeVariant variant);

FarFieldAmplitude total_amplitude(const DetectorDirection& dir, const SlitGeometry& geom,
                                  const IncidentWave& wave, const TruncationPolicy& trunc,
                                  ModeVariant variant);

}  // namespace slitwave

#pragma once

// Brute-force numerical references for the closed-form far-field path:
// adaptive quadrature of the aperture line integrals, and the full Kirchhoff
// surface integral with exact distances. Nothing here calls into kirchhoff.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "slitwave/complex_vec3.hpp"
#include "slitwave/config.hpp"

namespace slitwave {

struct QuadratureSpec {
  double abs_tol = 1e-15;
  double rel_tol = 1e-11;
  int max_subdivisions = 1'000'000;
  int initial_panels_per_wavelength = 8;
};

std::vector<Violation> validate(const QuadratureSpec& spec);

struct QuadratureResult {
  cplx value{};
  double error_estimate = 0.0;
  long long evaluations = 0;
  bool converged = true;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct SurfaceQuadratureResult {
  ComplexVec3 value;
  double error_estimate = 0.0;
  long long evaluations = 0;
  bool converged = true;
};

/// Panels needed for `panels_per_wavelength` panels per period of an
/// integrand whose phase advances at most `max_rate` rad per unit length.
int oscillation_panels(double length, double max_rate, int panels_per_wavelength);

namespace detail {

struct KronrodPanel {
  cplx value;
  double error;
};

/// 15-point Kronrod estimate on [l, r]; error is |K15 - G7|.
template <class F>
KronrodPanel kronrod15(F& f, double l, double r) {
  static constexpr double kNodes[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr double kKronrod[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double kGauss[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double centre = 0.5 * (l + r);
  const double half = 0.5 * (r - l);
  cplx values[15];
  values[7] = f(centre);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    values[i] = f(centre - dx);
    values[14 - i] = f(centre + dx);
  }
  cplx kronrod = kKronrod[7] * values[7];
  cplx gauss = kGauss[3] * values[7];
  for (int i = 0; i < 7; ++i) {
    const cplx pair = values[i] + values[14 - i];
    kronrod += kKronrod[i] * pair;
    if (i % 2 == 1) gauss += kGauss[i / 2] * pair;
  }
  // QUADPACK error scaling: |K15 - G7| overstates the K15 error, so it is
  // rescaled against the integrand's spread about its panel mean.
  const cplx mean = 0.5 * kronrod;
  double spread = kKronrod[7] * std::abs(values[7] - mean);
  for (int i = 0; i < 7; ++i) {
    spread += kKronrod[i] * (std::abs(values[i] - mean) + std::abs(values[14 - i] - mean));
  }
  spread *= half;
  double error = std::abs((kronrod - gauss) * half);
  if (spread > 0.0 && error > 0.0) error = spread * std::min(1.0, std::pow(200.0 * error / spread, 1.5));
  return {kronrod * half, error};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) quadrature with panel halving. The range is
/// first split into `initial_panels` equal panels; a panel is halved until
/// its |K15 - G7| estimate drops below its share of max(abs_tol, rel_tol |I|),
/// where |I| comes from the initial pass.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double lo, double hi, int initial_panels,
                                    const QuadratureSpec& spec) {
  struct Panel {
    double l, r;
    detail::KronrodPanel estimate;
    int depth;
  };
  QuadratureResult out;
  const double width = hi - lo;
  if (width == 0.0) return out;
  initial_panels = std::max(initial_panels, 1);

  std::vector<Panel> pending;
  pending.reserve(static_cast<std::size_t>(initial_panels) + 64);
  cplx coarse{0.0, 0.0};
  for (int i = initial_panels - 1; i >= 0; --i) {
    const double l = lo + width * i / initial_panels;
    const double r = i + 1 == initial_panels ? hi : lo + width * (i + 1) / initial_panels;
    const auto estimate = detail::kronrod15(f, l, r);
    coarse += estimate.value;
    pending.push_back({l, r, estimate, 0});
  }
  out.evaluations = 15LL * initial_panels;
  const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(coarse));

  // Depth-first from the low end, so the summation order is deterministic.
  long long splits = 0;
  while (!pending.empty()) {
    const Panel p = pending.back();
    pending.pop_back();
    const double share = tol * (p.r - p.l) / width;
    const bool exhausted = splits >= spec.max_subdivisions || p.depth >= 50;
    if (p.estimate.error <= share || exhausted) {
      out.value += p.estimate.value;
      out.error_estimate += p.estimate.error;
      if (p.estimate.error > share) out.converged = false;
      continue;
    }
    ++splits;
    const double m = 0.5 * (p.l + p.r);
    const auto right = detail::kronrod15(f, m, p.r);
    const auto left = detail::kronrod15(f, p.l, m);
    out.evaluations += 30;
    pending.push_back({m, p.r, right, p.depth + 1});
    pending.push_back({p.l, m, left, p.depth + 1});
  }
  return out;
}

/// Adaptive quadrature of exp(-i q u) sin(p pi (u - s) / L) over the
/// interval, s = 0 for Literal and s = lo for Shifted. Panel density scales
/// with |q| + p pi / L.
QuadratureResult line_integral_quadrature(double q, int p, double L, Interval interval,
                                          ModeVariant variant, const QuadratureSpec& spec);

/// Full Kirchhoff integral over the exit aperture(s) at z = c' for an
/// observation point P with exact distances |P - r'|. The aperture field and
/// its normal derivative come termwise from the modal series (caps and
/// evanescent floor from trunc). Two slits are weighted by c1 and c2; the
/// variant selects the mode function used on slit 2.
/// Throws DomainError unless P lies beyond the exit plane.
SurfaceQuadratureResult kirchhoff_surface_quadrature(const Point3& P, const SlitGeometry& geom,
                                                     const IncidentWave& wave,
                                                     const TruncationPolicy& trunc,
                                                     const QuadratureSpec& spec,
                                                     ModeVariant variant = ModeVariant::Literal);

/// Observation point at distance R from the exit-plane origin along the
/// direction (alpha, beta).
Point3 far_point(double alpha, double beta, double R, double thickness_c);

}  // namespace slitwave

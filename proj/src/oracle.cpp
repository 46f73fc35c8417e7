#include "slitwave/oracle.hpp"

#include <cmath>

#include "slitwave/slit_field.hpp"

namespace slitwave {

namespace {
constexpr cplx kI{0.0, 1.0};
}

std::vector<Violation> validate(const QuadratureSpec& spec) {
  std::vector<Violation> out;
  if (!(spec.abs_tol > 0.0)) out.push_back({"abs_tol", "must be > 0"});
  if (!(spec.rel_tol > 0.0)) out.push_back({"rel_tol", "must be > 0"});
  if (spec.max_subdivisions < 1) out.push_back({"max_subdivisions", "must be >= 1"});
  if (spec.initial_panels_per_wavelength < 4) {
    out.push_back({"initial_panels_per_wavelength", "must be >= 4"});
  }
  return out;
}

int oscillation_panels(double length, double max_rate, int panels_per_wavelength) {
  const double periods = std::abs(length) * max_rate / (2.0 * kPi);
  return std::max(4, static_cast<int>(std::ceil(panels_per_wavelength * periods)));
}

QuadratureResult line_integral_quadrature(double q, int p, double L, Interval interval,
                                          ModeVariant variant, const QuadratureSpec& spec) {
  const auto problems = validate(spec);
  if (!problems.empty()) throw ConfigError("invalid quadrature spec\n" + describe(problems));
  const double K = p * kPi / L;
  // Integrate over v = u - lo with exp(-i q lo) pulled out, so the phase
  // argument stays small and keeps its absolute precision.
  const double offset = variant == ModeVariant::Shifted ? 0.0 : interval.lo;
  // Phases reach |q| h ~ 1e3 rad; forming and reducing them in long double
  // keeps the integrand accurate where the integral nearly cancels.
  auto reduced = [](long double phase) {
    constexpr long double two_pi = 6.283185307179586476925286766559005768L;
    return static_cast<double>(phase - two_pi * std::nearbyint(phase / two_pi));
  };
  auto integrand = [&](double v) {
    const double phase = reduced(-static_cast<long double>(q) * v);
    const double arg = reduced(static_cast<long double>(K) * (static_cast<long double>(v) + offset));
    return cplx(std::cos(phase), std::sin(phase)) * std::sin(arg);
  };
  const double h = interval.hi - interval.lo;
  const int panels = oscillation_panels(h, std::abs(q) + K, spec.initial_panels_per_wavelength);
  QuadratureResult result = integrate_adaptive(integrand, 0.0, h, panels, spec);
  result.value *= std::exp(cplx(0.0, -q * interval.lo));
  return result;
}

Point3 far_point(double alpha, double beta, double R, double thickness_c) {
  const double sa = std::sin(alpha);
  const double sb = std::sin(beta);
  const double radicand = 1.0 - sa * sa - sb * sb;
  if (radicand <= 0.0) throw DomainError("direction does not point beyond the exit plane");
  return {R * sa, R * sb, thickness_c + R * std::sqrt(radicand)};
}

namespace {

struct ApertureModes {
  std::vector<int> width_m;              // row index -> m
  std::vector<std::vector<cplx>> field;  // [row][n] C e^{i kz c'}
  std::vector<std::vector<cplx>> slope;  // [row][n] C e^{i kz c'} i kz
  int max_n = 0;                         // largest n + 1 over rows
};

ApertureModes aperture_modes(const SlitGeometry& geom, double k, const TruncationPolicy& trunc) {
  ApertureModes modes;
  for (int m = 0; m <= trunc.max_m; ++m) {
    const double km = (2.0 * m + 1.0) * kPi / geom.width_a;
    std::vector<cplx> field;
    std::vector<cplx> slope;
    for (int n = 0; n <= trunc.max_n; ++n) {
      const double kn = (2.0 * n + 1.0) * kPi / geom.length_b;
      const cplx kz = longitudinal_from_transverse(k, kn * kn + km * km);
      if (plate_attenuation(kz, geom.thickness_c) < trunc.evanescent_floor) break;
      const cplx value = mode_coefficient({m, n}, 1.0) * std::exp(kI * kz * geom.thickness_c);
      field.push_back(value);
      slope.push_back(value * kI * kz);
    }
    if (field.empty()) break;
    modes.max_n = std::max(modes.max_n, static_cast<int>(field.size()));
    modes.width_m.push_back(m);
    modes.field.push_back(std::move(field));
    modes.slope.push_back(std::move(slope));
  }
  return modes;
}

// sin((2n+1) theta) for n = 0..count-1 by the Chebyshev recurrence.
void odd_harmonics(double theta, std::vector<double>& out) {
  if (out.empty()) return;
  const double s1 = std::sin(theta);
  const double c2 = std::cos(2.0 * theta);
  double prev = -s1;
  double cur = s1;
  out[0] = cur;
  for (std::size_t n = 1; n < out.size(); ++n) {
    const double next = 2.0 * c2 * cur - prev;
    prev = cur;
    cur = next;
    out[n] = cur;
  }
}

// Integral of exp(i k (r - R0)) / r [d_z psi + (i k - 1/r) (dz / r) psi]
// over one aperture. `y_origin` is where the slit's mode functions start.
SurfaceQuadratureResult integrate_aperture(const Point3& P, const SlitGeometry& geom, double k,
                                           const ApertureModes& modes, Interval ys,
                                           double y_origin, const QuadratureSpec& spec) {
  const double b = geom.length_b;
  const double a = geom.width_a;
  const double dz = P.z - geom.thickness_c;
  const double R0 = std::sqrt(P.x * P.x + P.y * P.y + dz * dz);
  const std::size_t rows = modes.width_m.size();
  const std::size_t cols = static_cast<std::size_t>(modes.max_n);

  const double k_max_x = (2.0 * cols - 1.0) * kPi / b;
  const double k_max_y = (2.0 * modes.width_m.back() + 1.0) * kPi / a;
  const double reach_x = std::max(std::abs(P.x), std::abs(P.x - b));
  const double reach_y = std::max(std::abs(P.y - ys.lo), std::abs(P.y - ys.hi));
  const int panels_x =
      oscillation_panels(b, k * reach_x / dz + k_max_x, spec.initial_panels_per_wavelength);
  const int panels_y =
      oscillation_panels(ys.hi - ys.lo, k * reach_y / dz + k_max_y, spec.initial_panels_per_wavelength);

  SurfaceQuadratureResult result;
  std::vector<double> sin_x(cols);
  std::vector<cplx> g(cols);  // sum_m field * sin_m(y)
  std::vector<cplx> h(cols);  // sum_m slope * sin_m(y)
  double inner_error = 0.0;
  bool inner_converged = true;

  QuadratureSpec inner_spec = spec;
  inner_spec.abs_tol = spec.abs_tol / (ys.hi - ys.lo);

  auto over_y = [&](double y) -> cplx {
    std::fill(g.begin(), g.end(), cplx{});
    std::fill(h.begin(), h.end(), cplx{});
    for (std::size_t row = 0; row < rows; ++row) {
      const double sy = std::sin((2.0 * modes.width_m[row] + 1.0) * kPi * (y - y_origin) / a);
      for (std::size_t n = 0; n < modes.field[row].size(); ++n) {
        g[n] += modes.field[row][n] * sy;
        h[n] += modes.slope[row][n] * sy;
      }
    }
    const double ry = P.y - y;
    auto over_x = [&](double x) -> cplx {
      const double rx = P.x - x;
      const double r = std::sqrt(rx * rx + ry * ry + dz * dz);
      const double excess = (x * x - 2.0 * P.x * x + y * y - 2.0 * P.y * y) / (r + R0);
      odd_harmonics(kPi * x / b, sin_x);
      cplx psi{0.0, 0.0};
      cplx dpsi{0.0, 0.0};
      for (std::size_t n = 0; n < cols; ++n) {
        psi += g[n] * sin_x[n];
        dpsi += h[n] * sin_x[n];
      }
      const cplx obliquity = (kI * k - 1.0 / r) * (dz / r);
      return std::exp(kI * (k * excess)) / r * (dpsi + obliquity * psi);
    };
    const QuadratureResult inner = integrate_adaptive(over_x, 0.0, b, panels_x, inner_spec);
    inner_error = std::max(inner_error, inner.error_estimate);
    inner_converged = inner_converged && inner.converged;
    result.evaluations += inner.evaluations;
    return inner.value;
  };

  const QuadratureResult outer = integrate_adaptive(over_y, ys.lo, ys.hi, panels_y, spec);
  const cplx prefactor = -std::exp(kI * (k * R0)) / (4.0 * kPi);
  const cplx value = prefactor * outer.value;
  result.value = {value, value, value};  // scaled by A_j by the caller
  result.error_estimate = (outer.error_estimate + inner_error * (ys.hi - ys.lo)) / (4.0 * kPi);
  result.converged = outer.converged && inner_converged;
  return result;
}

}  // namespace

SurfaceQuadratureResult kirchhoff_surface_quadrature(const Point3& P, const SlitGeometry& geom,
                                                     const IncidentWave& wave,
                                                     const TruncationPolicy& trunc,
                                                     const QuadratureSpec& spec,
                                                     ModeVariant variant) {
  const auto problems = validate(spec);
  if (!problems.empty()) throw ConfigError("invalid quadrature spec\n" + describe(problems));
  if (!(P.z > geom.thickness_c)) throw DomainError("observation point must lie beyond z = c'");
  const double k = wavenumber(wave);
  const ApertureModes modes = aperture_modes(geom, k, trunc);
  if (modes.width_m.empty()) return {};

  const double a = geom.width_a;
  SurfaceQuadratureResult first = integrate_aperture(P, geom, k, modes, {0.0, a}, 0.0, spec);
  cplx scalar = first.value.x;
  SurfaceQuadratureResult total = first;
  if (geom.slit_count == 2) {
    const double lo = a + geom.separation_d;
    const double origin = variant == ModeVariant::Shifted ? lo : 0.0;
    const SurfaceQuadratureResult second =
        integrate_aperture(P, geom, k, modes, {lo, lo + a}, origin, spec);
    scalar = wave.c1 * first.value.x + wave.c2 * second.value.x;
    total.error_estimate = std::abs(wave.c1) * first.error_estimate +
                           std::abs(wave.c2) * second.error_estimate;
    total.evaluations += second.evaluations;
    total.converged = first.converged && second.converged;
  }
  total.value = scale(wave.amplitude, scalar);
  const double amax = std::max({std::abs(wave.amplitude[0]), std::abs(wave.amplitude[1]),
                                std::abs(wave.amplitude[2])});
  total.error_estimate *= amax;
  return total;
}

}  // namespace slitwave

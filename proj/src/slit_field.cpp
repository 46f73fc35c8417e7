#include "slitwave/slit_field.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace slitwave {

double sin_pi(double t) {
  // Reduce to r in (-1, 1]; fmod is exact, so integers land on 0 or 1.
  double r = std::fmod(t, 2.0);
  if (r > 1.0) r -= 2.0;
  if (r <= -1.0) r += 2.0;
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

double mode_coefficient(ModeIndex idx, double amplitude_j) {
  const double pm = 2.0 * idx.m + 1.0;
  const double pn = 2.0 * idx.n + 1.0;
  return 16.0 * amplitude_j / (pm * pn * kPi * kPi);
}

cplx longitudinal_from_transverse(double k, double transverse_sq) {
  const double radicand = k * k - transverse_sq;
  if (radicand >= 0.0) return {std::sqrt(radicand), 0.0};
  return {0.0, std::sqrt(-radicand)};
}

cplx longitudinal_wavenumber(ModeIndex idx, const SlitGeometry& geom, double wavelength) {
  const double k = wavenumber(wavelength);
  const double kn = (2.0 * idx.n + 1.0) * kPi / geom.length_b;
  const double km = (2.0 * idx.m + 1.0) * kPi / geom.width_a;
  return longitudinal_from_transverse(k, kn * kn + km * km);
}

cplx longitudinal_wavenumber_infinite_length(int m, double width_a, double wavelength) {
  const double k = wavenumber(wavelength);
  const double km = (2.0 * m + 1.0) * kPi / width_a;
  return longitudinal_from_transverse(k, km * km);
}

double plate_attenuation(cplx kz, double thickness_c) {
  return std::exp(-kz.imag() * thickness_c);
}

namespace {

constexpr double kEdgeUlps = 8.0 * std::numeric_limits<double>::epsilon();

// Position as a fraction of the aperture extent; values within a few ulps of
// an edge are snapped onto it so edge evaluations vanish exactly.
double aperture_fraction(double coord, double extent, const char* what) {
  double u = coord / extent;
  if (std::abs(u) <= kEdgeUlps) u = 0.0;
  if (std::abs(u - 1.0) <= kEdgeUlps) u = 1.0;
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError(std::string(what) + " coordinate lies outside the slit aperture");
  }
  return u;
}

void check_depth(double z, double thickness_c) {
  if (!(z >= 0.0 && z <= thickness_c)) {
    throw DomainError("z must lie within the plate, 0 <= z <= thickness_c");
  }
}

cplx time_factor(double t, double wavelength) {
  if (t == 0.0) return {1.0, 0.0};
  return std::exp(cplx(0.0, -angular_frequency(wavelength) * t));
}

}  // namespace

ComplexVec3 slit_wavefunction(double x, double y, double z, double t, int slit_index,
                              const SlitGeometry& geom, const IncidentWave& wave,
                              const TruncationPolicy& trunc) {
  if (slit_index != 1 && slit_index != 2) throw DomainError("slit_index must be 1 or 2");
  if (slit_index == 2 && geom.slit_count != 2) throw DomainError("geometry has a single slit");
  const double k = wavenumber(wave);
  const double y_eff = slit_index == 1 ? y : y - (geom.width_a + geom.separation_d);
  const double ux = aperture_fraction(x, geom.length_b, "x");
  const double uy = aperture_fraction(y_eff, geom.width_a, "y");
  check_depth(z, geom.thickness_c);

  // The modal series is only conditionally convergent in the interior, so the
  // cutoff here is the hard caps plus the evanescent floor; tail_eps applies
  // to the absolutely convergent far-field sums.
  std::vector<double> sx(static_cast<std::size_t>(trunc.max_n) + 1);
  for (int n = 0; n <= trunc.max_n; ++n) sx[n] = sin_pi((2.0 * n + 1.0) * ux);

  cplx sum{0.0, 0.0};
  for (int m = 0; m <= trunc.max_m; ++m) {
    const double pm = 2.0 * m + 1.0;
    const double km = pm * kPi / geom.width_a;
    const double sy = sin_pi(pm * uy);
    cplx row{0.0, 0.0};
    bool any = false;
    for (int n = 0; n <= trunc.max_n; ++n) {
      const double kn = (2.0 * n + 1.0) * kPi / geom.length_b;
      const cplx kz = longitudinal_from_transverse(k, kn * kn + km * km);
      if (plate_attenuation(kz, geom.thickness_c) < trunc.evanescent_floor) break;
      any = true;
      if (sy == 0.0 || sx[n] == 0.0) continue;
      row += mode_coefficient({m, n}, 1.0) * sx[n] * std::exp(cplx(0.0, 1.0) * kz * z);
    }
    if (!any) break;
    sum += sy * row;
  }
  return scale(wave.amplitude, sum * time_factor(t, wave.wavelength));
}

ComplexVec3 slit_wavefunction_infinite_length(double y, double z, double t,
                                              const SlitGeometry& geom, const IncidentWave& wave,
                                              const TruncationPolicy& trunc) {
  const double k = wavenumber(wave);
  const double uy = aperture_fraction(y, geom.width_a, "y");
  check_depth(z, geom.thickness_c);

  cplx sum{0.0, 0.0};
  for (int m = 0; m <= trunc.max_m; ++m) {
    const double pm = 2.0 * m + 1.0;
    const double km = pm * kPi / geom.width_a;
    const cplx kz = longitudinal_from_transverse(k, km * km);
    if (plate_attenuation(kz, geom.thickness_c) < trunc.evanescent_floor) break;
    const double sy = sin_pi(pm * uy);
    if (sy == 0.0) continue;
    sum += 4.0 / (pm * kPi) * sy * std::exp(cplx(0.0, 1.0) * kz * z);
  }
  return scale(wave.amplitude, sum * time_factor(t, wave.wavelength));
}

}  // namespace slitwave

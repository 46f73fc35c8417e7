#pragma once

// Photon field inside a rectangular slit, expanded in hard-wall waveguide
// modes sin((2n+1)pi x/b) sin((2m+1)pi y/a) exp(i kz z).

#include "slitwave/complex_vec3.hpp"
#include "slitwave/config.hpp"

namespace slitwave {

/// Odd-harmonic mode label: width harmonic 2m+1, length harmonic 2n+1.
struct ModeIndex {
  int m = 0;
  int n = 0;
};

/// sin(pi * t), exactly zero for integer t.
double sin_pi(double t);

/// Expansion coefficient 16 A_j / ((2m+1)(2n+1) pi^2) of a uniform
/// incident component over the odd modes.
double mode_coefficient(ModeIndex idx, double amplitude_j);

/// Longitudinal wavenumber from a squared transverse wavenumber. Returns the
/// non-negative real root when propagating and +i sqrt(|.|) when evanescent.
cplx longitudinal_from_transverse(double k, double transverse_sq);

/// kz(m, n) = sqrt(k^2 - ((2n+1)pi/b)^2 - ((2m+1)pi/a)^2) with the decaying branch.
cplx longitudinal_wavenumber(ModeIndex idx, const SlitGeometry& geom, double wavelength);

/// kz for the infinitely long slit, sqrt(k^2 - ((2m+1)pi/a)^2).
cplx longitudinal_wavenumber_infinite_length(int m, double width_a, double wavelength);

/// |exp(i kz c')|, the amplitude factor a mode keeps after crossing the plate.
double plate_attenuation(cplx kz, double thickness_c);

/// Field at (x, y, z) inside slit 1 or 2 at time t. Slit 2 spans
/// y in [a+d, 2a+d] and carries the slit-1 field translated by a+d.
/// Throws DomainError for points outside the selected aperture volume.
ComplexVec3 slit_wavefunction(double x, double y, double z, double t, int slit_index,
                              const SlitGeometry& geom, const IncidentWave& wave,
                              const TruncationPolicy& trunc);

/// b -> infinity limit: single sum over width modes with coefficient
/// 4 A_j / ((2m+1) pi). Throws DomainError for y outside [0, a].
ComplexVec3 slit_wavefunction_infinite_length(double y, double z, double t,
                                              const SlitGeometry& geom, const IncidentWave& wave,
                                              const TruncationPolicy& trunc);

}  // namespace slitwave

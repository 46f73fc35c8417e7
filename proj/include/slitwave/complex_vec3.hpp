#pragma once

#include <cmath>
#include <complex>

namespace slitwave {

using cplx = std::complex<double>;

/// Three complex Cartesian components of a photon amplitude.
struct ComplexVec3 {
  cplx x{};
  cplx y{};
  cplx z{};

  friend ComplexVec3 operator+(const ComplexVec3& a, const ComplexVec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend ComplexVec3 operator*(cplx s, const ComplexVec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend ComplexVec3 operator*(const ComplexVec3& v, cplx s) { return s * v; }
  ComplexVec3& operator+=(const ComplexVec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  friend bool operator==(const ComplexVec3&, const ComplexVec3&) = default;

  /// Sum of squared moduli.
  double norm2() const { return std::norm(x) + std::norm(y) + std::norm(z); }

  bool finite() const {
    return std::isfinite(x.real()) && std::isfinite(x.imag()) && std::isfinite(y.real()) &&
           std::isfinite(y.imag()) && std::isfinite(z.real()) && std::isfinite(z.imag());
  }
};

/// Unconjugated bilinear product a_x b_x + a_y b_y + a_z b_z.
inline cplx bilinear_dot(const ComplexVec3& a, const ComplexVec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Scales a real 3-vector by a complex scalar.
template <class Vec>
ComplexVec3 scale(const Vec& real3, cplx s) {
  return {s * real3[0], s * real3[1], s * real3[2]};
}

}  // namespace slitwave

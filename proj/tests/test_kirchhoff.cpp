#include <cmath>
#include <random>

#include "doctest.h"
#include "slitwave/kirchhoff.hpp"
#include "slitwave/oracle.hpp"
#include "slitwave/slit_field.hpp"

using namespace slitwave;

namespace {

constexpr cplx kI{0.0, 1.0};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

TruncationPolicy small_truncation(int m, int n) {
  TruncationPolicy t;
  t.max_m = m;
  t.max_n = n;
  return t;
}

}  // namespace

TEST_SUITE("kirchhoff") {
  TEST_CASE("line integral at q = 0 over one period") {
    const double L = 0.13e-3;
    CHECK(rel(line_integral_sine(0.0, 1, L, {0.0, L}), 2.0 * L / kPi) < 1e-15);
    // Higher odd harmonics: 2L / (p pi).
    CHECK(rel(line_integral_sine(0.0, 5, L, {0.0, L}), 2.0 * L / (5.0 * kPi)) < 1e-14);
  }

  TEST_CASE("line integral at resonance is -iL/2") {
    const double L = 0.13e-3;
    for (int p : {1, 3, 9}) {
      const double K = p * kPi / L;
      CHECK(rel(line_integral_sine(K, p, L, {0.0, L}), -kI * L / 2.0) < 1e-13);
      CHECK(rel(line_integral_sine(-K, p, L, {0.0, L}), kI * L / 2.0) < 1e-13);
    }
  }

  TEST_CASE("series branch near resonance is continuous with the exact form") {
    const double L = 0.13e-3;
    const int p = 3;
    const double K = p * kPi / L;
    // Just inside and just outside the series window.
    const double inside = K * (1.0 + 0.5 * kResonanceEps / p);
    const double outside = K * (1.0 + 2.0 * kResonanceEps / p);
    const cplx a = line_integral_sine(inside, p, L, {0.0, L});
    const cplx b = line_integral_sine(outside, p, L, {0.0, L});
    CHECK(rel(a, -kI * L / 2.0) < 1e-5);
    CHECK(rel(a, b) < 1e-5);
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-24;
    for (double rel_offset : {1e-9, 1e-12}) {
      const double q = K * (1.0 - rel_offset);
      const QuadratureResult quad = line_integral_quadrature(q, p, L, {0.0, L}, ModeVariant::Literal, spec);
      CHECK(rel(line_integral_sine(q, p, L, {0.0, L}), quad.value) < 1e-10);
    }
  }

  TEST_CASE("line integral matches quadrature at q = 3.7e6") {
    const double L = 0.13e-3;
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-22;
    const QuadratureResult quad = line_integral_quadrature(3.7e6, 3, L, {0.0, L}, ModeVariant::Literal, spec);
    CHECK(quad.converged);
    CHECK(rel(line_integral_sine(3.7e6, 3, L, {0.0, L}), quad.value) < 1e-9);
  }

  TEST_CASE("shifted line integral is the local one times a phase") {
    const double L = 0.13e-3;
    const double lo = 0.53e-3;
    for (double q : {-2e5, 1e3, 3.3e4, 7.7e6}) {
      const cplx shifted = line_integral_sine(q, 3, L, {lo, lo + L}, ModeVariant::Shifted);
      const cplx local = line_integral_sine(q, 3, L, {0.0, L});
      CHECK(rel(shifted, local * std::exp(-kI * (q * lo))) < 1e-12);
    }
  }

  TEST_CASE("obliquity on axis") {
    const SlitGeometry geom = paper_fig4_config().geometry;
    const double k = wavenumber(916e-9);
    const cplx kz = longitudinal_wavenumber({0, 0}, geom, 916e-9);
    const cplx value = obliquity_prefactor({0, 0}, {0.0, 0.0, 1e300}, geom, 916e-9);
    CHECK(rel(value, kI * (kz + k)) < 1e-15);
  }

  TEST_CASE("obliquity at beta = 2 mrad follows the direction cosine") {
    const SlitGeometry geom = paper_fig4_config().geometry;
    const double k = wavenumber(916e-9);
    const cplx kz = longitudinal_wavenumber({0, 0}, geom, 916e-9);
    const cplx value = obliquity_prefactor({0, 0}, {0.0, 2e-3, 1.0}, geom, 916e-9);
    CHECK(value.imag() == doctest::Approx(kz.real() + k * (1.0 - 2e-6)).epsilon(1e-12));
    CHECK(value.real() == doctest::Approx(-std::sqrt(1.0 - std::pow(std::sin(2e-3), 2))));
  }

  TEST_CASE("obliquity outside its domain is refused") {
    const SlitGeometry geom = paper_fig4_config().geometry;
    const DetectorDirection dir{80.0 * kPi / 180.0, 30.0 * kPi / 180.0, 1.0};
    CHECK_THROWS_AS(obliquity_prefactor({0, 0}, dir, geom, 916e-9), DomainError);
    CHECK_THROWS_AS(direction_cosine(dir.alpha, dir.beta), DomainError);
  }

  TEST_CASE("single-term amplitude on axis reduces to the product form") {
    const SimulationConfig config = paper_fig4_config();
    const SlitGeometry& geom = config.geometry;
    const double R = 1.0;
    const double k = wavenumber(config.wave);
    const FarFieldEvaluator evaluator(geom, config.wave.wavelength, small_truncation(0, 0),
                                      ModeVariant::Literal);
    CHECK(evaluator.report().total_modes == 1);
    const cplx kz = longitudinal_wavenumber({0, 0}, geom, config.wave.wavelength);
    const cplx bracket = kI * kz + (kI * k - 1.0 / R);
    const cplx expected = spherical_prefactor(k, R) * (2.0 * geom.length_b / kPi) *
                          (2.0 * geom.width_a / kPi) * mode_coefficient({0, 0}, 1.0) *
                          std::exp(kI * kz * geom.thickness_c) * bracket;
    CHECK(rel(evaluator.scalar_slit_amplitude(1, 0.0, R), expected) < 1e-13);
  }

  TEST_CASE("slit 1 magnitude is even in beta") {
    const SimulationConfig config = paper_fig4_config();
    const FarFieldEvaluator evaluator(config.geometry, config.wave.wavelength, config.truncation,
                                      ModeVariant::Literal);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> beta(0.0, 5e-3);
    for (int i = 0; i < 20; ++i) {
      const double b = beta(rng);
      const double plus = std::abs(evaluator.scalar_slit_amplitude(1, b, 1.0));
      const double minus = std::abs(evaluator.scalar_slit_amplitude(1, -b, 1.0));
      CHECK(std::abs(plus - minus) <= 1e-10 * plus);
    }
  }

  TEST_CASE("shifted slit 2 is slit 1 times the separation phase") {
    const SimulationConfig config = paper_fig4_config();
    const SlitGeometry& geom = config.geometry;
    const FarFieldEvaluator evaluator(geom, config.wave.wavelength, config.truncation,
                                      ModeVariant::Shifted);
    const double shift = geom.width_a + geom.separation_d;
    for (double b : {-4.1e-3, -1e-3, 0.0, 0.7e-3, 3.3e-3}) {
      const cplx one = evaluator.scalar_slit_amplitude(1, b, 1.0);
      const cplx two = evaluator.scalar_slit_amplitude(2, b, 1.0);
      CHECK(rel(two, one * std::exp(-kI * (evaluator.k() * std::sin(b) * shift))) < 1e-12);
    }
  }

  TEST_CASE("c1 = 1, c2 = 0 gives slit 1 alone") {
    SimulationConfig config = paper_fig4_config();
    config.wave.c1 = 1.0;
    config.wave.c2 = 0.0;
    const FarFieldEvaluator evaluator(config.geometry, config.wave.wavelength, config.truncation,
                                      config.variant);
    for (double b : {-2e-3, 0.0, 1.5e-3}) {
      const FarFieldAmplitude total = evaluator.total(b, 1.0, config.wave);
      REQUIRE(total.per_slit.has_value());
      CHECK(total.value == total.per_slit->first);
    }
  }

  TEST_CASE("balanced shifted slits cancel where the path difference is half a wave") {
    SimulationConfig config = paper_fig4_config();
    config.wave.c1 = std::sqrt(0.5);
    config.wave.c2 = std::sqrt(0.5);
    const SlitGeometry& geom = config.geometry;
    const FarFieldEvaluator evaluator(geom, config.wave.wavelength, config.truncation,
                                      ModeVariant::Shifted);
    const double beta = std::asin(kPi / (evaluator.k() * (geom.width_a + geom.separation_d)));
    const FarFieldAmplitude total = evaluator.total(beta, 1.0, config.wave);
    const double one = std::abs(total.per_slit->first.x);
    CHECK(std::abs(total.value.x) < 1e-12 * one);
  }

  TEST_CASE("total amplitude is linear in (c1, c2)") {
    SimulationConfig config = paper_fig4_config();
    const FarFieldEvaluator evaluator(config.geometry, config.wave.wavelength, config.truncation,
                                      config.variant);
    IncidentWave only1 = config.wave;
    only1.c1 = 1.0;
    only1.c2 = 0.0;
    IncidentWave only2 = config.wave;
    only2.c1 = 0.0;
    only2.c2 = 1.0;
    for (double b : {-3e-3, 0.2e-3, 1.9e-3}) {
      const ComplexVec3 mixed = evaluator.total(b, 1.0, config.wave).value;
      const ComplexVec3 combo = cplx(0.955) * evaluator.total(b, 1.0, only1).value +
                                cplx(0.298) * evaluator.total(b, 1.0, only2).value;
      CHECK(rel(mixed.y, combo.y) < 1e-12);
    }
  }

  TEST_CASE("free functions agree with the evaluator") {
    const SimulationConfig config = paper_fig4_config();
    const TruncationPolicy trunc = small_truncation(20, 200);
    const FarFieldEvaluator evaluator(config.geometry, config.wave.wavelength, trunc,
                                      config.variant);
    const DetectorDirection dir{0.0, 1.1e-3, 2.0};
    const ComplexVec3 a = slit_amplitude(2, dir, config.geometry, config.wave, trunc, config.variant);
    CHECK(a == evaluator.slit_amplitude(2, dir.beta, dir.screen_R, config.wave));
    const FarFieldAmplitude t = total_amplitude(dir, config.geometry, config.wave, trunc, config.variant);
    CHECK(t.value == evaluator.total(dir.beta, dir.screen_R, config.wave).value);
  }

  TEST_CASE("paper configuration keeps the propagating width modes") {
    const SimulationConfig config = paper_fig4_config();
    const FarFieldEvaluator evaluator(config.geometry, config.wave.wavelength, config.truncation,
                                      config.variant);
    // 142 propagating width harmonics plus the first evanescent ones that
    // survive the 1e-8 floor across 26.5 um.
    CHECK(evaluator.report().width_modes >= 142);
    CHECK(evaluator.report().width_modes < 160);
    CHECK(evaluator.report().total_modes > 100000);
  }

  TEST_CASE("invalid slit index") {
    const SimulationConfig config = paper_fig4_config();
    const FarFieldEvaluator evaluator(config.geometry, config.wave.wavelength,
                                      small_truncation(1, 1), config.variant);
    CHECK_THROWS_AS(evaluator.scalar_slit_amplitude(3, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(evaluator.scalar_slit_amplitude(1, 0.0, 0.0), DomainError);
  }
}

#include "slitwave/kirchhoff.hpp"

#include <cmath>

namespace slitwave {

namespace {

constexpr cplx kI{0.0, 1.0};

// \int_{lo}^{hi} exp(i delta u) du written as exp(i delta mid) h sinc(delta h / 2),
// which never subtracts nearly equal exponentials. Inside the resonance window
// the sinc is replaced by its Taylor series.
cplx exp_segment(double delta, Interval iv, double L) {
  const double h = iv.hi - iv.lo;
  const double mid = 0.5 * (iv.lo + iv.hi);
  const double x = 0.5 * delta * h;
  double sinc;
  if (std::abs(delta * L / kPi) < kResonanceEps) {
    const double x2 = x * x;
    sinc = 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  } else {
    sinc = std::sin(x) / x;
  }
  return std::exp(kI * (delta * mid)) * (h * sinc);
}

// Upper bound of |line_integral_sine| for K > |q|, independent of the interval.
double line_integral_bound(double K, double q) { return 2.0 * K / (K * K - q * q); }

}  // namespace

cplx line_integral_sine(double q, int p, double L, Interval interval, ModeVariant variant) {
  const double K = p * kPi / L;
  if (variant == ModeVariant::Shifted && interval.lo != 0.0) {
    // Substitute v = u - lo: the mode starts at the interval edge.
    const Interval local{0.0, interval.hi - interval.lo};
    return std::exp(-kI * (q * interval.lo)) * line_integral_sine(q, p, L, local);
  }
  const cplx up = exp_segment(K - q, interval, L);
  const cplx down = exp_segment(-K - q, interval, L);
  return (up - down) / (2.0 * kI);
}

double direction_cosine(double alpha, double beta) {
  const double sa = std::sin(alpha);
  const double sb = std::sin(beta);
  const double radicand = (1.0 - sa * sa) - sb * sb;
  if (radicand < 0.0) {
    throw DomainError("direction outside the obliquity domain: sin^2(beta) > cos^2(alpha)");
  }
  return std::sqrt(radicand);
}

cplx obliquity_prefactor(ModeIndex idx, const DetectorDirection& dir, const SlitGeometry& geom,
                         double wavelength) {
  const double cosine = direction_cosine(dir.alpha, dir.beta);
  const double k = wavenumber(wavelength);
  const cplx kz = longitudinal_wavenumber(idx, geom, wavelength);
  return kI * kz + (kI * k - 1.0 / dir.screen_R) * cosine;
}

cplx spherical_prefactor(double k, double R) {
  return -std::exp(kI * (k * R)) / (4.0 * kPi * R);
}

FarFieldEvaluator::FarFieldEvaluator(const SlitGeometry& geom, double wavelength,
                                     const TruncationPolicy& trunc, ModeVariant variant,
                                     double alpha)
    : geom_(geom),
      k_(wavenumber(wavelength)),
      trunc_(trunc),
      variant_(variant),
      alpha_(alpha) {
  const double qx = k_ * std::sin(alpha_);
  const Interval along_x{0.0, geom_.length_b};

  std::vector<cplx> ix;  // length-direction line integrals, filled on demand
  auto length_integral = [&](int n) {
    while (static_cast<int>(ix.size()) <= n) {
      const int p = 2 * static_cast<int>(ix.size()) + 1;
      ix.push_back(line_integral_sine(qx, p, geom_.length_b, along_x));
    }
    return ix[n];
  };

  for (int m = 0; m <= trunc_.max_m; ++m) {
    const double km = (2.0 * m + 1.0) * kPi / geom_.width_a;
    cplx s_kz{0.0, 0.0};
    cplx s_1{0.0, 0.0};
    int retained = 0;
    for (int n = 0; n <= trunc_.max_n; ++n) {
      const double pn = 2.0 * n + 1.0;
      const double kn = pn * kPi / geom_.length_b;
      const cplx kz = longitudinal_from_transverse(k_, kn * kn + km * km);
      const double attenuation = plate_attenuation(kz, geom_.thickness_c);
      if (attenuation < trunc_.evanescent_floor) break;
      const double coeff = mode_coefficient({m, n}, 1.0);
      const cplx w = coeff * std::exp(kI * kz * geom_.thickness_c) * length_integral(n);
      s_kz += w * (kI * kz);
      s_1 += w;
      ++retained;
      // Terms fall off as 1/(2n+1)^2 once past the resonance, so the
      // remaining tail is about (2n+1)/2 times the current bound.
      if (kn > 2.0 * std::abs(qx)) {
        const double bound =
            coeff * attenuation * (std::abs(kz) + k_) * line_integral_bound(kn, qx);
        if (bound * 0.5 * pn < trunc_.tail_eps * (std::abs(s_kz) + k_ * std::abs(s_1))) break;
      }
    }
    if (retained == 0) break;
    modes_.push_back({m, km, s_kz, s_1});
    report_.total_modes += retained;
    report_.max_length_modes = std::max(report_.max_length_modes, retained);
  }
  report_.width_modes = static_cast<int>(modes_.size());
}

cplx FarFieldEvaluator::scalar_slit_amplitude(int slit_index, double beta, double screen_R) const {
  if (slit_index != 1 && slit_index != 2) throw DomainError("slit_index must be 1 or 2");
  if (slit_index == 2 && geom_.slit_count != 2) throw DomainError("geometry has a single slit");
  if (!(screen_R > 0.0)) throw DomainError("screen_R must be positive");
  const double cosine = direction_cosine(alpha_, beta);
  const double q = k_ * std::sin(beta);
  const double abs_q = std::abs(q);
  const cplx oblique = (kI * k_ - 1.0 / screen_R) * cosine;
  const double oblique_abs = std::abs(oblique);
  const double a = geom_.width_a;
  const Interval iv = slit_index == 1 ? Interval{0.0, a}
                                      : Interval{a + geom_.separation_d,
                                                 2.0 * a + geom_.separation_d};

  cplx sum{0.0, 0.0};
  double scale = 0.0;  // symmetric in beta, so truncation is too
  for (const auto& mode : modes_) {
    const int p = 2 * mode.m + 1;
    const cplx weight = mode.s_kz + oblique * mode.s_1;
    sum += line_integral_sine(q, p, a, iv, variant_) * weight;
    const double weight_bound = std::abs(mode.s_kz) + oblique_abs * std::abs(mode.s_1);
    scale += weight_bound * a / p;
    if (mode.km > 2.0 * abs_q) {
      const double bound = weight_bound * line_integral_bound(mode.km, q);
      if (bound * 0.5 * p < trunc_.tail_eps * scale) break;
    }
  }
  return spherical_prefactor(k_, screen_R) * sum;
}

ComplexVec3 FarFieldEvaluator::slit_amplitude(int slit_index, double beta, double screen_R,
                                              const IncidentWave& wave) const {
  return scale(wave.amplitude, scalar_slit_amplitude(slit_index, beta, screen_R));
}

FarFieldAmplitude FarFieldEvaluator::total(double beta, double screen_R,
                                           const IncidentWave& wave) const {
  FarFieldAmplitude out;
  out.direction = {alpha_, beta, screen_R};
  const ComplexVec3 first = slit_amplitude(1, beta, screen_R, wave);
  if (geom_.slit_count == 2) {
    const ComplexVec3 second = slit_amplitude(2, beta, screen_R, wave);
    out.value = cplx(wave.c1) * first + cplx(wave.c2) * second;
    out.per_slit = std::make_pair(first, second);
  } else {
    out.value = first;
  }
  return out;
}

ComplexVec3 slit_amplitude(int slit_index, const DetectorDirection& dir, const SlitGeometry& geom,
                           const IncidentWave& wave, const TruncationPolicy& trunc,
                           ModeVariant variant) {
  const FarFieldEvaluator evaluator(geom, wave.wavelength, trunc, variant, dir.alpha);
  return evaluator.slit_amplitude(slit_index, dir.beta, dir.screen_R, wave);
}

FarFieldAmplitude total_amplitude(const DetectorDirection& dir, const SlitGeometry& geom,
                                  const IncidentWave& wave, const TruncationPolicy& trunc,
                                  ModeVariant variant) {
  const FarFieldEvaluator evaluator(geom, wave.wavelength, trunc, variant, dir.alpha);
  return evaluator.total(dir.beta, dir.screen_R, wave);
}

}  // namespace slitwave

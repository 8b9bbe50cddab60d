#include "specsense/fading.hpp"

#include <cmath>
#include <limits>

#include "specsense/errors.hpp"
#include "specsense/special_fn.hpp"

namespace specsense {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
  detail::require(linear > 0.0, "linear_to_db: value must be positive");
  return 10.0 * std::log10(linear);
}

FadingParams FadingParams::from_db(double m, double ms, double mean_snr_db, double omega) {
  FadingParams p{m, ms, db_to_linear(mean_snr_db), omega};
  p.validate();
  return p;
}

void FadingParams::validate() const {
  detail::require(m > 0.0 && std::isfinite(m), "fading: m must be positive");
  detail::require(ms > 1.0 && std::isfinite(ms), "fading: m_s must exceed 1");
  detail::require(mean_snr > 0.0 && std::isfinite(mean_snr), "fading: mean SNR must be positive");
  detail::require(omega > 0.0 && std::isfinite(omega), "fading: omega must be positive");
}

double log_snr_pdf(const FadingParams& p, double gamma) {
  p.validate();
  detail::require(gamma >= 0.0, "snr_pdf: gamma must be non-negative");
  const double c = (p.ms - 1.0) * p.mean_snr;
  if (gamma == 0.0) {
    if (p.m > 1.0) return -std::numeric_limits<double>::infinity();
    if (p.m < 1.0) return std::numeric_limits<double>::infinity();
    // m = 1: f(0) = (m_s - 1)^{m_s} mean^{m_s} / (B(1, m_s) c^{1 + m_s}) = m_s / c
    return std::log(p.ms) - std::log(c);
  }
  return p.m * std::log(p.m) + p.ms * std::log(c) + (p.m - 1.0) * std::log(gamma) - ln_beta(p.m, p.ms) -
         (p.m + p.ms) * std::log(p.m * gamma + c);
}

double snr_pdf(const FadingParams& p, double gamma) { return std::exp(log_snr_pdf(p, gamma)); }

double envelope_pdf(const FadingParams& p, double r) {
  p.validate();
  detail::require(r >= 0.0, "envelope_pdf: r must be non-negative");
  if (r == 0.0) {
    if (p.m > 0.5) return 0.0;
    if (p.m < 0.5) return std::numeric_limits<double>::infinity();
  }
  const double c = (p.ms - 1.0) * p.omega;
  const double log_f = std::log(2.0) + p.m * std::log(p.m) + p.ms * std::log(c) +
                       (2.0 * p.m - 1.0) * std::log(r) - ln_beta(p.m, p.ms) -
                       (p.m + p.ms) * std::log(p.m * r * r + c);
  return std::exp(log_f);
}

double sample_gamma(double shape, RandomStream& rng) {
  detail::require(shape > 0.0, "sample_gamma: shape must be positive");
  if (shape < 1.0) {
    const double boost = std::pow(rng.uniform(), 1.0 / shape);
    return sample_gamma(shape + 1.0, rng) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_snr(const FadingParams& p, RandomStream& rng) {
  const double x = sample_gamma(p.m, rng);
  const double y = sample_gamma(p.ms, rng);
  return p.scale() * x / y;
}

double nakagami_snr_pdf(double m_hat, double mean_snr, double gamma) {
  detail::require(m_hat > 0.0, "nakagami_snr_pdf: m_hat must be positive");
  detail::require(mean_snr > 0.0, "nakagami_snr_pdf: mean SNR must be positive");
  detail::require(gamma >= 0.0, "nakagami_snr_pdf: gamma must be non-negative");
  if (gamma == 0.0) {
    if (m_hat > 1.0) return 0.0;
    if (m_hat < 1.0) return std::numeric_limits<double>::infinity();
    return 1.0 / mean_snr;
  }
  const double rate = m_hat / mean_snr;
  return std::exp(m_hat * std::log(rate) + (m_hat - 1.0) * std::log(gamma) - rate * gamma - ln_gamma(m_hat));
}

}  // namespace specsense

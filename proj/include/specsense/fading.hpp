#pragma once

#include "specsense/random.hpp"

namespace specsense {

double db_to_linear(double db);
double linear_to_db(double linear);

/// Fisher-Snedecor F composite fading channel.
///
/// The instantaneous SNR is gamma = (m_s - 1) * mean_snr / m * X / Y with
/// X ~ Gamma(m, 1) and Y ~ Gamma(m_s, 1): Nakagami-m multipath power whose
/// mean is modulated by inverse-Nakagami shadowing. Larger m means milder
/// multipath, larger m_s means lighter shadowing; m_s -> inf recovers
/// Nakagami-m. `omega` is the mean envelope power, used only by
/// envelope_pdf.
struct FadingParams {
  double m = 1.0;
  double ms = 2.0;
  double mean_snr = 1.0;  // linear
  double omega = 1.0;

  static FadingParams from_db(double m, double ms, double mean_snr_db, double omega = 1.0);

  /// Throws DomainError unless m > 0, m_s > 1, mean_snr > 0 and omega > 0.
  void validate() const;

  /// (m_s - 1) * mean_snr / m, the scale of the SNR law.
  double scale() const { return (ms - 1.0) * mean_snr / m; }
};

/// Density of the instantaneous SNR.
double snr_pdf(const FadingParams& p, double gamma);
/// log of snr_pdf; -inf where the density vanishes.
double log_snr_pdf(const FadingParams& p, double gamma);

/// Density of the received envelope r (with E[r^2] = omega).
double envelope_pdf(const FadingParams& p, double r);

/// Marsaglia-Tsang gamma variate with unit scale; shapes below one use the
/// U^{1/shape} boost.
double sample_gamma(double shape, RandomStream& rng);

/// One draw of the instantaneous SNR as a scaled ratio of gamma variates.
double sample_snr(const FadingParams& p, RandomStream& rng);

/// SNR density under Nakagami-m fading: gamma law with shape m_hat and mean
/// mean_snr. m_hat = 1 is Rayleigh fading.
double nakagami_snr_pdf(double m_hat, double mean_snr, double gamma);

}  // namespace specsense

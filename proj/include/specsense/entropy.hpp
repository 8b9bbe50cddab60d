#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "specsense/fading.hpp"

namespace specsense {

/// Entropies of the F composite SNR law, in bits.
struct EntropyReport {
  double shannon_bits = 0.0;
  double cross_rayleigh_bits = 0.0;
  double cross_nakagami_bits = 0.0;
  double kl_rayleigh_bits = 0.0;
  double kl_nakagami_bits = 0.0;
  double m_hat = 0.0;
  double mean_snr_n = 0.0;
  double mean_snr_r = 0.0;
};

/// Differential entropy H(p) of the SNR density.
double shannon_entropy(const FadingParams& p);

/// H(p, q) with q the exponential (Rayleigh-fading) SNR law of mean mean_snr_r.
double cross_entropy_rayleigh(const FadingParams& p, double mean_snr_r);

/// H(p, q) with q the gamma (Nakagami-m) SNR law with shape m_hat and mean mean_snr_n.
double cross_entropy_nakagami(const FadingParams& p, double m_hat, double mean_snr_n);

struct NakagamiFit {
  double m_hat = 0.0;
  double mean_snr = 0.0;
};

/// Gamma-law maximum likelihood fit: the mean is the sample mean and m_hat
/// solves ln m - psi(m) = ln(mean) - mean(ln x). Needs at least 100 strictly
/// positive samples that are not all equal.
NakagamiFit fit_nakagami_mle(std::span<const double> samples);

/// `count` SNR draws from `p`, reproducible for a given seed whatever the
/// thread count.
std::vector<double> sample_snr_batch(const FadingParams& p, std::size_t count, std::uint64_t seed);

/// Samples the channel, fits both encoders and evaluates the closed forms.
EntropyReport entropy_report(const FadingParams& p, std::size_t sample_count, std::uint64_t seed);

}  // namespace specsense

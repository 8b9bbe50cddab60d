#include "specsense/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "specsense/errors.hpp"
#include "specsense/parallel.hpp"
#include "specsense/random.hpp"
#include "specsense/special_fn.hpp"

namespace specsense {
namespace {

constexpr std::size_t kSampleStreams = 64;

// E[ln gamma] under the F law.
double mean_log_snr(const FadingParams& p) { return std::log(p.scale()) + digamma(p.m) - digamma(p.ms); }

}  // namespace

double shannon_entropy(const FadingParams& p) {
  p.validate();
  const double nats = (p.m + p.ms) * digamma(p.m + p.ms) - (p.m - 1.0) * digamma(p.m) -
                      (p.ms + 1.0) * digamma(p.ms) + ln_beta(p.m, p.ms) + std::log(p.scale());
  return nats / std::numbers::ln2;
}

double cross_entropy_rayleigh(const FadingParams& p, double mean_snr_r) {
  p.validate();
  detail::require(mean_snr_r > 0.0, "cross_entropy_rayleigh: mean SNR must be positive");
  return std::log2(mean_snr_r) + p.mean_snr / (std::numbers::ln2 * mean_snr_r);
}

double cross_entropy_nakagami(const FadingParams& p, double m_hat, double mean_snr_n) {
  p.validate();
  detail::require(m_hat > 0.0 && mean_snr_n > 0.0, "cross_entropy_nakagami: m_hat and mean SNR must be positive");
  const double nats = m_hat * p.mean_snr / mean_snr_n - m_hat * std::log(m_hat) + ln_gamma(m_hat) +
                      m_hat * std::log(mean_snr_n) - (m_hat - 1.0) * mean_log_snr(p);
  return nats / std::numbers::ln2;
}

NakagamiFit fit_nakagami_mle(std::span<const double> samples) {
  detail::require(samples.size() >= 100, "fit_nakagami_mle: need at least 100 samples");
  long double sum = 0.0L;
  long double sum_log = 0.0L;
  for (double x : samples) {
    detail::require(x > 0.0 && std::isfinite(x), "fit_nakagami_mle: samples must be finite and positive");
    sum += x;
    sum_log += std::log(x);
  }
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  detail::require(*lo < *hi, "fit_nakagami_mle: degenerate sample (all values equal)");

  const double n = static_cast<double>(samples.size());
  const double mean = static_cast<double>(sum / n);
  const double s = std::log(mean) - static_cast<double>(sum_log / n);
  detail::require(s > 0.0, "fit_nakagami_mle: degenerate sample");

  // ln m - psi(m) falls monotonically from +inf to 0, so keep a bracket and
  // fall back to bisection whenever Newton leaves it.
  auto g = [s](double m) { return std::log(m) - digamma(m) - s; };
  double m = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  double lo_m = 0.0;
  double hi_m = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    const double gm = g(m);
    if (gm > 0.0) {
      lo_m = m;
    } else {
      hi_m = m;
    }
    double next = m - gm / (1.0 / m - trigamma(m));
    if (!(next > lo_m && next < hi_m)) next = std::isinf(hi_m) ? 2.0 * m : 0.5 * (lo_m + hi_m);
    const double step = next - m;
    m = next;
    if (std::abs(step) < 1e-10) break;
  }
  return {m, mean};
}

std::vector<double> sample_snr_batch(const FadingParams& p, std::size_t count, std::uint64_t seed) {
  p.validate();
  std::vector<double> out(count);
  parallel_for(kSampleStreams, [&](std::size_t k) {
    RandomStream rng(seed, k);
    const std::size_t begin = count * k / kSampleStreams;
    const std::size_t end = count * (k + 1) / kSampleStreams;
    for (std::size_t i = begin; i < end; ++i) out[i] = sample_snr(p, rng);
  });
  return out;
}

EntropyReport entropy_report(const FadingParams& p, std::size_t sample_count, std::uint64_t seed) {
  p.validate();
  const std::vector<double> samples = sample_snr_batch(p, sample_count, seed);
  const NakagamiFit fit = fit_nakagami_mle(samples);
  EntropyReport r;
  r.m_hat = fit.m_hat;
  r.mean_snr_n = fit.mean_snr;
  r.mean_snr_r = fit.mean_snr;
  r.shannon_bits = shannon_entropy(p);
  r.cross_rayleigh_bits = cross_entropy_rayleigh(p, r.mean_snr_r);
  r.cross_nakagami_bits = cross_entropy_nakagami(p, r.m_hat, r.mean_snr_n);
  r.kl_rayleigh_bits = r.cross_rayleigh_bits - r.shannon_bits;
  r.kl_nakagami_bits = r.cross_nakagami_bits - r.shannon_bits;
  return r;
}

}  // namespace specsense

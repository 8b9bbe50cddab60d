#include "specsense/auc.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "specsense/errors.hpp"
#include "specsense/special_fn.hpp"

namespace specsense {
namespace {

double ln_binomial(int n, int k) { return ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0); }

}  // namespace

double auc_instantaneous(int u, double gamma) {
  detail::require(u >= 1, "auc_instantaneous: u must be a positive integer");
  detail::require(gamma >= 0.0 && std::isfinite(gamma), "auc_instantaneous: SNR must be non-negative");
  const double ln2 = std::log(2.0);
  double sum = 0.0;
  for (int l = 0; l < u; ++l) {
    for (int i = 0; i <= l; ++i) {
      if (i > 0 && gamma == 0.0) break;
      const double log_gamma_pow = i == 0 ? 0.0 : i * std::log(gamma);
      sum += std::exp(ln_binomial(l + u - 1, l - i) + log_gamma_pow - ln_gamma(i + 1.0) - (l + u + i) * ln2 -
                      0.5 * gamma);
    }
  }
  return std::clamp(1.0 - sum, 0.5, 1.0);
}

double auc_average(int u, const FadingParams& p) {
  detail::require(u >= 1, "auc_average: u must be a positive integer");
  p.validate();
  const double ln2 = std::log(2.0);
  const double half_scale = 0.5 * p.scale();
  const double log_pref =
      p.ms * std::log(p.ms - 1.0) + p.ms * std::log(p.mean_snr) - p.ms * std::log(p.m) - ln_beta(p.m, p.ms);

  std::vector<double> log_inner(static_cast<std::size_t>(u));
  for (int i = 0; i < u; ++i) {
    log_inner[static_cast<std::size_t>(i)] = ln_gamma(p.m + i) - ln_gamma(i + 1.0) +
                                             ln_tricomi_u(p.m + p.ms, p.ms - i + 1.0, half_scale);
  }
  double sum = 0.0;
  for (int l = 0; l < u; ++l) {
    for (int i = 0; i <= l; ++i) {
      sum += std::exp(log_pref + ln_binomial(l + u - 1, l - i) + log_inner[static_cast<std::size_t>(i)] -
                      (l + u + p.ms) * ln2);
    }
  }
  return std::clamp(1.0 - sum, 0.5, 1.0);
}

double auc(const AucRequest& request) {
  if (const auto* g = std::get_if<double>(&request.channel)) return auc_instantaneous(request.u, *g);
  return auc_average(request.u, std::get<FadingParams>(request.channel));
}

}  // namespace specsense

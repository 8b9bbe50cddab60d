#include "specsense/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "specsense/auc.hpp"
#include "specsense/detection.hpp"
#include "specsense/quadrature.hpp"
#include "specsense/special_fn.hpp"

namespace specsense::oracle {

double expect_snr(const FadingParams& p, const std::function<double(double)>& g, double rel_tol) {
  p.validate();
  const double c = (p.ms - 1.0) * p.mean_snr;
  const double log_b = ln_beta(p.ms, p.m);
  auto integrand = [&](double y) {
    if (y <= 0.0 || y >= 1.0) return 0.0;
    const double gamma = c * (1.0 - y) / (p.m * y);
    const double log_pdf = (p.ms - 1.0) * std::log(y) + (p.m - 1.0) * std::log1p(-y) - log_b;
    const double w = std::exp(log_pdf);
    return w == 0.0 ? 0.0 : g(gamma) * w;
  };
  std::vector<double> pts{0.0, 1.0};
  for (double k : {1e-2, 0.1, 1.0, 10.0, 100.0}) pts.push_back(c / (p.m * k * p.mean_snr + c));
  if (p.m > 1.0) pts.push_back((p.ms - 1.0) / (p.ms + p.m - 2.0));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  quad::Options opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = 1e-15;
  opts.max_intervals = 20000;
  return quad::integrate_or_throw(integrand, pts, opts, "expect_snr");
}

double auc_average_quadrature(int u, const FadingParams& p) {
  return expect_snr(p, [u](double g) { return auc_instantaneous(u, g); });
}

double roc_trapezoid_auc(int u, const std::variant<double, FadingParams>& channel, int points) {
  std::optional<ChannelSeries> series;
  if (const auto* f = std::get_if<FadingParams>(&channel)) series.emplace(*f);
  // Cubic spacing crowds points toward Pf = 0, where the ROC is steepest.
  double prev_pf = 0.0;
  double prev_pd = 0.0;
  double area = 0.0;
  for (int i = 1; i <= points; ++i) {
    const double t = static_cast<double>(i) / points;
    double pf = t * t * t;
    double pd = 1.0;
    if (i < points) {
      const DetectorConfig cfg{u, threshold_for_pfa(u, pf), 0.0};
      pf = pfa(cfg);
      pd = series ? series->average_pd(cfg).value : pd_awgn(cfg, std::get<double>(channel));
    } else {
      pf = 1.0;
    }
    area += 0.5 * (pf - prev_pf) * (pd + prev_pd);
    prev_pf = pf;
    prev_pd = pd;
  }
  return area;
}

double shannon_entropy_quadrature(const FadingParams& p) {
  return expect_snr(p, [&](double g) { return -log_snr_pdf(p, g); }) / std::numbers::ln2;
}

double cross_entropy_rayleigh_quadrature(const FadingParams& p, double mean_snr_r) {
  return expect_snr(p, [&](double g) { return std::log(mean_snr_r) + g / mean_snr_r; }) / std::numbers::ln2;
}

double cross_entropy_nakagami_quadrature(const FadingParams& p, double m_hat, double mean_snr_n) {
  // -ln q = -m ln(m / mean) + ln Gamma(m) - (m - 1) ln gamma + m gamma / mean
  return expect_snr(p,
                    [&](double g) {
                      return -m_hat * std::log(m_hat / mean_snr_n) + ln_gamma(m_hat) - (m_hat - 1.0) * std::log(g) +
                             m_hat * g / mean_snr_n;
                    }) /
         std::numbers::ln2;
}

}  // namespace specsense::oracle

#include "specsense/detection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "specsense/errors.hpp"
#include "specsense/quadrature.hpp"

namespace specsense {
namespace {

constexpr double kClampSlack = 1e-9;

std::string describe(const DetectorConfig& cfg, const FadingParams& p) {
  std::ostringstream os;
  os << "u=" << cfg.u << " lambda=" << cfg.threshold << " beta_db=" << cfg.noise_uncertainty_db
     << " m=" << p.m << " ms=" << p.ms << " mean_snr=" << p.mean_snr;
  return os.str();
}

double log_series_prefactor(const FadingParams& p) {
  // (m_s-1)^{m_s} mean^{m_s} / (B(m, m_s) m^{m_s})
  return p.ms * std::log(p.ms - 1.0) + p.ms * std::log(p.mean_snr) - ln_beta(p.m, p.ms) - p.ms * std::log(p.m);
}

void check_probability(double value, const char* what) {
  detail::require(value >= 0.0 && value <= 1.0, std::string(what) + " must lie in [0, 1]");
}

// Breakpoints for integrating against an SNR density on [0, upper].
std::vector<double> snr_breakpoints(double mode, double mean, double threshold, double upper) {
  std::vector<double> pts{0.0, upper};
  for (double v : {mode, 0.25 * threshold, 0.5 * threshold, threshold}) {
    if (v > 0.0 && v < upper) pts.push_back(v);
  }
  // One panel per decade from well below the mean, so that a density
  // concentrated far below the cutoff is not stepped over.
  for (double v = 1e-3 * mean; v < upper; v *= 10.0) pts.push_back(v);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// 1 - int (1 - Pd(gamma)) f(gamma) dgamma; the integrand dies off once the
// non-central statistic clears the threshold.
template <class Density>
double average_pd_by_quadrature(const DetectorConfig& cfg, Density density, double mode, double mean) {
  cfg.validate();
  const double lambda = cfg.effective_threshold();
  if (lambda == 0.0) return 1.0;
  const double root_lambda = std::sqrt(lambda);
  auto miss = [&](double g) { return marcum_q_complement(cfg.u, std::sqrt(2.0 * g), root_lambda); };
  double upper = std::max(1.0, 0.5 * lambda + cfg.u);
  while (miss(upper) > 1e-18) upper *= 1.5;
  const auto pts = snr_breakpoints(mode, mean, 0.5 * lambda, upper);
  quad::Options opts;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 1e-14;
  const double missed = quad::integrate_or_throw(
      [&](double g) {
        const double f = density(g);
        return f == 0.0 ? 0.0 : miss(g) * f;
      },
      pts, opts, "average_pd_quadrature");
  return std::clamp(1.0 - missed, 0.0, 1.0);
}

}  // namespace

void DetectorConfig::validate() const {
  detail::require(u >= 1, "detector: time-bandwidth product u must be a positive integer");
  detail::require(threshold >= 0.0 && std::isfinite(threshold), "detector: threshold must be non-negative");
  detail::require(noise_uncertainty_db >= 0.0 && std::isfinite(noise_uncertainty_db),
                  "detector: noise uncertainty must be non-negative (dB)");
}

double DetectorConfig::alpha() const { return std::pow(10.0, noise_uncertainty_db / 10.0); }

double DetectorConfig::effective_threshold() const {
  const double a = alpha();
  return a * a * threshold;
}

void SeriesControl::validate() const {
  detail::require(rel_tol > 0.0, "series control: rel_tol must be positive");
  detail::require(max_terms >= 10, "series control: max_terms must be at least 10");
}

double pfa(const DetectorConfig& cfg) {
  cfg.validate();
  return reg_gamma_q(cfg.u, 0.5 * cfg.threshold);
}

double threshold_for_pfa(int u, double target_pfa) {
  detail::require(u >= 1, "threshold_for_pfa: u must be a positive integer");
  detail::require(target_pfa > 0.0 && target_pfa < 1.0, "threshold_for_pfa: target must lie in (0, 1)");
  auto f = [u](double lambda) { return reg_gamma_q(u, 0.5 * lambda); };
  double lo = 0.0;
  double hi = 2.0 * u + 10.0;
  while (f(hi) > target_pfa) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (f(mid) > target_pfa) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(f(lo) - target_pfa) < std::abs(f(hi) - target_pfa) ? lo : hi;
}

double pd_awgn(const DetectorConfig& cfg, double gamma) {
  cfg.validate();
  detail::require(gamma >= 0.0, "pd_awgn: SNR must be non-negative");
  return marcum_q(cfg.u, std::sqrt(2.0 * gamma), std::sqrt(cfg.effective_threshold()));
}

ChannelSeries::ChannelSeries(const FadingParams& p, const SeriesControl& ctl)
    : params_(p), control_(ctl), log_prefactor_(0.0) {
  params_.validate();
  control_.validate();
  log_prefactor_ = log_series_prefactor(params_);
}

void ChannelSeries::extend_to(int n) {
  const double a = params_.m + params_.ms;
  const double z = params_.scale();
  Accuracy acc;
  acc.rel_tol = 1e-12;
  while (static_cast<int>(log_weights_.size()) <= n) {
    const double k = static_cast<double>(log_weights_.size());
    const double log_u = ln_tricomi_u(a, params_.ms - k + 1.0, z, acc);
    log_weights_.push_back(log_prefactor_ + ln_gamma(k + params_.m) - ln_gamma(k + 1.0) + log_u);
  }
}

double ChannelSeries::log_weight(int n) {
  detail::require(n >= 0, "ChannelSeries: term index must be non-negative");
  extend_to(n);
  return log_weights_[static_cast<std::size_t>(n)];
}

double ChannelSeries::weight(int n) { return std::exp(log_weight(n)); }

SeriesResult ChannelSeries::average_pd(const DetectorConfig& cfg) {
  cfg.validate();
  const double x = 0.5 * cfg.effective_threshold();
  if (x == 0.0) return {1.0, 0, 0.0, 1.0};

  double missed = 0.0;  // sum_n w_n P(n+u, x)
  double lower = reg_gamma_p(cfg.u, x);
  SeriesResult out;
  for (int n = 0; n < control_.max_terms; ++n) {
    const double term = weight(n) * lower;
    missed += term;
    out.terms = n + 1;
    out.last_term = term;
    // P(k, x) falls with k and the remaining weights sum to at most one, so
    // P(n+1+u, x) bounds everything not yet added.
    lower = reg_gamma_p(n + 1 + cfg.u, x);
    if (lower <= control_.rel_tol * std::max(1.0 - missed, 1e-300)) {
      out.unclamped = 1.0 - missed;
      if (out.unclamped < -kClampSlack || out.unclamped > 1.0 + kClampSlack) {
        throw ConvergenceError("average_pd: series left [0, 1] (" + std::to_string(out.unclamped) + ") for " +
                               describe(cfg, params_));
      }
      out.value = std::clamp(out.unclamped, 0.0, 1.0);
      return out;
    }
  }
  throw ConvergenceError("average_pd: no convergence within " + std::to_string(control_.max_terms) +
                         " terms for " + describe(cfg, params_));
}

double ChannelSeries::direct_partial_sum(const DetectorConfig& cfg, int terms) {
  cfg.validate();
  detail::require(terms >= 0, "direct_partial_sum: term count must be non-negative");
  const double x = 0.5 * cfg.effective_threshold();
  double sum = 0.0;
  for (int n = 0; n < terms; ++n) sum += weight(n) * reg_gamma_q(n + cfg.u, x);
  return sum;
}

double ChannelSeries::fixed_terms_pd(const DetectorConfig& cfg, int terms) {
  cfg.validate();
  detail::require(terms >= 0, "fixed_terms_pd: term count must be non-negative");
  const double x = 0.5 * cfg.effective_threshold();
  if (x == 0.0) return 1.0;
  double missed = 0.0;
  for (int n = 0; n < terms; ++n) {
    const double lower = reg_gamma_p(n + cfg.u, x);
    if (lower == 0.0) break;
    missed += weight(n) * lower;
  }
  return 1.0 - missed;
}

SeriesResult average_pd_series(const DetectorConfig& cfg, const FadingParams& p, const SeriesControl& ctl) {
  ChannelSeries series(p, ctl);
  return series.average_pd(cfg);
}

double average_pd(const DetectorConfig& cfg, const FadingParams& p, const SeriesControl& ctl) {
  return average_pd_series(cfg, p, ctl).value;
}

double average_pd_quadrature(const DetectorConfig& cfg, const FadingParams& p) {
  p.validate();
  const double mode = p.m > 1.0 ? (p.m - 1.0) * (p.ms - 1.0) * p.mean_snr / (p.m * (p.ms + 1.0)) : 0.0;
  return average_pd_by_quadrature(cfg, [&](double g) { return g > 0.0 ? snr_pdf(p, g) : 0.0; }, mode, p.mean_snr);
}

double average_pd_nakagami(const DetectorConfig& cfg, double m_hat, double mean_snr) {
  detail::require(m_hat > 0.0 && mean_snr > 0.0, "average_pd_nakagami: parameters must be positive");
  const double mode = m_hat > 1.0 ? (m_hat - 1.0) * mean_snr / m_hat : 0.0;
  return average_pd_by_quadrature(
      cfg, [&](double g) { return g > 0.0 ? nakagami_snr_pdf(m_hat, mean_snr, g) : 0.0; }, mode, mean_snr);
}

TruncationBound truncation_bound(const DetectorConfig& cfg, const FadingParams& p, int t0) {
  cfg.validate();
  p.validate();
  detail::require(t0 >= 1, "truncation_bound: t0 must be at least 1");
  TruncationBound out;
  out.t0 = t0;
  out.closed_form = std::numeric_limits<double>::infinity();

  const double log_u = ln_tricomi_u(p.m + p.ms, p.ms - t0 + 1.0, p.scale());
  out.u_factor = std::exp(log_u);
  const double log_pref = log_series_prefactor(p);

  // P(N >= t0) = E[P(t0, gamma)]. With y = c/(m gamma + c) the SNR law maps
  // onto Beta(m_s, m) on (0, 1), which keeps the heavy SNR tail finite.
  {
    const double c = (p.ms - 1.0) * p.mean_snr;
    const double log_b = ln_beta(p.ms, p.m);
    auto integrand = [&](double y) {
      const double g = c * (1.0 - y) / (p.m * y);
      const double log_pdf = (p.ms - 1.0) * std::log(y) + (p.m - 1.0) * std::log1p(-y) - log_b;
      return reg_gamma_p(t0, g) * std::exp(log_pdf);
    };
    std::vector<double> pts{0.0, 1.0};
    for (double g : {0.5 * t0, 1.0 * t0, 2.0 * t0}) pts.push_back(c / (p.m * g + c));
    if (p.ms > 1.0 && p.m > 1.0) pts.push_back((p.ms - 1.0) / (p.ms + p.m - 2.0));
    std::sort(pts.begin(), pts.end());
    quad::Options opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-300;
    out.tail_mass = quad::integrate_or_throw(integrand, pts, opts, "truncation_bound");
  }

  // sum_{n=t0}^{N} Gamma(n+m)/Gamma(n+1) = [Gamma(N+m+1)/Gamma(N+1) - Gamma(t0+m)/Gamma(t0)] / m
  const double log_start = ln_gamma(t0 + p.m) - ln_gamma(t0);
  auto log_partial = [&](double cap) {
    const double log_end = ln_gamma(cap + p.m + 1.0) - ln_gamma(cap + 1.0);
    return log_end + std::log(-std::expm1(log_start - log_end)) - std::log(p.m);
  };
  auto log_pd_bound = [&](double cap) { return log_pref + log_u + log_partial(cap); };

  const double target = std::log(out.tail_mass);
  double lo = t0;
  double hi = t0;
  if (log_pd_bound(lo) < target) {
    hi = 2.0 * t0;
    while (log_pd_bound(hi) < target && hi < 1e300) {
      lo = hi;
      hi *= 2.0;
    }
    while (hi - lo > 1.0) {
      const double mid = std::floor(0.5 * (lo + hi));
      if (log_pd_bound(mid) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  out.n_cap = hi;
  out.series_bound = std::exp(log_u + log_partial(hi));
  // The remainder of a probability series never exceeds one; capping there
  // also keeps the bound non-increasing in t0 where the cap overshoots.
  out.pd_bound = std::min(1.0, std::exp(log_pd_bound(hi)));
  return out;
}

double collaborative_pd(double pd_single, int n_users, FusionRule rule) {
  check_probability(pd_single, "collaborative_pd: probability");
  detail::require(n_users >= 1, "collaborative_pd: user count must be positive");
  if (rule == FusionRule::And) return std::pow(pd_single, n_users);
  if (pd_single == 1.0) return 1.0;
  return -std::expm1(n_users * std::log1p(-pd_single));
}

double collaborative_pfa(double pfa_single, int n_users, FusionRule rule) {
  return collaborative_pd(pfa_single, n_users, rule);
}

double invert_collaborative(double collaborative, int n_users, FusionRule rule) {
  check_probability(collaborative, "invert_collaborative: probability");
  detail::require(n_users >= 1, "invert_collaborative: user count must be positive");
  if (rule == FusionRule::And) return std::pow(collaborative, 1.0 / n_users);
  if (collaborative == 1.0) return 1.0;
  return -std::expm1(std::log1p(-collaborative) / n_users);
}

double sls_pfa(int u, double threshold, int branches) {
  detail::require(branches >= 1, "sls_pfa: branch count must be positive");
  return collaborative_pfa(pfa(DetectorConfig{u, threshold, 0.0}), branches, FusionRule::Or);
}

double invert_sls_pfa(double target, int branches) {
  return invert_collaborative(target, branches, FusionRule::Or);
}

double sls_average_pd(const DetectorConfig& cfg, std::span<const FadingParams> branches, const SeriesControl& ctl) {
  detail::require(!branches.empty(), "sls_average_pd: at least one branch required");
  double all_miss = 1.0;
  for (const FadingParams& p : branches) all_miss *= 1.0 - average_pd(cfg, p, ctl);
  return 1.0 - all_miss;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  detail::require(lo > 0.0 && hi >= lo, "log_spaced: need 0 < lo <= hi");
  detail::require(n >= 1, "log_spaced: need at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

std::vector<double> default_pf_grid() { return log_spaced(1e-4, 0.999, 200); }

RocCurve roc_curve(const RocRequest& request) {
  detail::require(request.u >= 1, "roc_curve: u must be a positive integer");
  detail::require(request.users >= 1, "roc_curve: user count must be positive");
  detail::require(request.branches >= 1, "roc_curve: branch count must be positive");
  RocCurve curve;
  curve.request = request;
  if (curve.request.pf_grid.empty()) curve.request.pf_grid = default_pf_grid();
  const std::vector<double>& grid = curve.request.pf_grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    detail::require(grid[i] > 0.0 && grid[i] < 1.0, "roc_curve: Pf grid must lie in (0, 1)");
    if (i > 0) detail::require(grid[i] > grid[i - 1], "roc_curve: Pf grid must be strictly increasing");
  }
  {
    std::ostringstream os;
    os << grid.size() << " Pf points in [" << grid.front() << ", " << grid.back() << "]";
    curve.sweep = os.str();
  }

  std::optional<ChannelSeries> series;
  if (const auto* f = std::get_if<FadingParams>(&request.channel)) series.emplace(*f, request.control);

  const int users = request.fusion ? request.users : 1;
  const FusionRule rule = request.fusion.value_or(FusionRule::Or);
  curve.points.reserve(grid.size());
  for (double target : grid) {
    const double per_user = invert_collaborative(target, users, rule);
    const double per_branch = invert_sls_pfa(per_user, request.branches);
    const double lambda = threshold_for_pfa(request.u, per_branch);
    const DetectorConfig cfg{request.u, lambda, request.noise_uncertainty_db};

    double branch_pd;
    if (series) {
      branch_pd = series->average_pd(cfg).value;
    } else {
      branch_pd = pd_awgn(cfg, std::get<AwgnChannel>(request.channel).snr);
    }
    const double user_pd = collaborative_pd(branch_pd, request.branches, FusionRule::Or);
    const double user_pfa = sls_pfa(request.u, lambda, request.branches);
    curve.points.push_back(
        {lambda, collaborative_pfa(user_pfa, users, rule), collaborative_pd(user_pd, users, rule)});
  }
  return curve;
}

}  // namespace specsense

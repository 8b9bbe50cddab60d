#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "specsense/fading.hpp"
#include "specsense/special_fn.hpp"

namespace specsense {

/// Energy detector: time-bandwidth product u, threshold lambda on the
/// 2u-degree-of-freedom energy statistic, and noise power uncertainty beta.
struct DetectorConfig {
  int u = 1;
  double threshold = 0.0;
  double noise_uncertainty_db = 0.0;

  void validate() const;

  /// alpha = 10^{beta/10} >= 1.
  double alpha() const;
  /// Threshold seen by the signal-present statistic when the noise power is
  /// overestimated by alpha: alpha^2 * lambda.
  double effective_threshold() const;
};

/// Truncation control for the fading-averaged series.
struct SeriesControl {
  double rel_tol = 1e-10;
  int max_terms = 10'000;

  void validate() const;
};

/// A series value plus the diagnostics reported by the `pd` command.
struct SeriesResult {
  double value = 0.0;
  int terms = 0;
  double last_term = 0.0;
  /// Value before clamping into [0, 1].
  double unclamped = 0.0;
};

enum class FusionRule { Or, And };

/// Pf = Gamma(u, lambda/2) / Gamma(u). Independent of fading.
double pfa(const DetectorConfig& cfg);

/// lambda with pfa(u, lambda) = target_pfa, by bisection.
double threshold_for_pfa(int u, double target_pfa);

/// Pd at a fixed SNR: Q_u(sqrt(2 gamma), sqrt(alpha^2 lambda)).
double pd_awgn(const DetectorConfig& cfg, double gamma);

/// Fading-averaged detection probability over an F composite channel.
///
/// With an F-distributed SNR the count N in the Poisson-mixture form of the
/// Marcum function becomes a mixed Poisson variable with probabilities
///
///   w_n = (m_s-1)^{m_s} mean^{m_s} / (B(m,m_s) m^{m_s})
///         * Gamma(n+m)/n! * U(m+m_s; m_s-n+1; (m_s-1) mean / m)
///
/// and Pd = sum_n w_n Q(n+u, lambda/2). The w_n decay only like n^{-m_s-1},
/// so the sum is evaluated in its complementary form
///
///   Pd = 1 - sum_n w_n P(n+u, lambda/2),
///
/// whose terms vanish super-exponentially once n exceeds lambda/2. The
/// weights do not depend on the detector, so one ChannelSeries can serve a
/// whole threshold sweep. Not thread-safe: the weight cache grows lazily.
class ChannelSeries {
 public:
  explicit ChannelSeries(const FadingParams& p, const SeriesControl& ctl = {});

  const FadingParams& params() const { return params_; }
  const SeriesControl& control() const { return control_; }

  /// Mixed-Poisson weight w_n.
  double weight(int n);
  /// log w_n.
  double log_weight(int n);

  /// Fading-averaged Pd for the given detector (complementary form).
  SeriesResult average_pd(const DetectorConfig& cfg);

  /// sum_{n < terms} w_n Q(n+u, lambda'/2): the textbook series truncated
  /// after `terms` terms. Used to study truncation; converges slowly.
  double direct_partial_sum(const DetectorConfig& cfg, int terms);

  /// 1 - sum_{n < terms} w_n P(n+u, lambda'/2) with no early stop; terms
  /// whose P factor underflows to zero are skipped.
  double fixed_terms_pd(const DetectorConfig& cfg, int terms);

 private:
  void extend_to(int n);

  FadingParams params_;
  SeriesControl control_;
  double log_prefactor_;
  std::vector<double> log_weights_;
};

SeriesResult average_pd_series(const DetectorConfig& cfg, const FadingParams& p, const SeriesControl& ctl = {});
double average_pd(const DetectorConfig& cfg, const FadingParams& p, const SeriesControl& ctl = {});

/// Independent reference for average_pd: adaptive quadrature of
/// (1 - Pd_awgn(gamma)) against the SNR density, subtracted from one.
double average_pd_quadrature(const DetectorConfig& cfg, const FadingParams& p);

/// Average Pd under Nakagami-m fading (gamma-law SNR), by quadrature.
double average_pd_nakagami(const DetectorConfig& cfg, double m_hat, double mean_snr);

/// Truncation-error bounds for the textbook series cut after t0 terms.
struct TruncationBound {
  int t0 = 1;
  /// U(m+m_s; m_s-t0+1; z): the U factor pulled out of the remainder.
  double u_factor = 0.0;
  /// Cap N at which sum_{n=t0}^{N} Gamma(n+m)/Gamma(n+1) is cut off.
  double n_cap = 0.0;
  /// u_factor * sum_{n=t0}^{n_cap} Gamma(n+m)/Gamma(n+1), bare-series units.
  double series_bound = 0.0;
  /// series_bound scaled by the series prefactor, i.e. in units of Pd,
  /// capped at one.
  double pd_bound = 0.0;
  /// P(N >= t0) for the mixed-Poisson count; the remainder never exceeds it.
  double tail_mass = 0.0;
  /// The fully closed form U(...) Gamma(m) 1F0(m;;1). 1F0(m;;1) = (1-1)^{-m}
  /// diverges for every m > 0, so this is always +infinity.
  double closed_form = 0.0;
};

/// n_cap is the smallest N for which pd_bound >= tail_mass, which makes the
/// capped form a valid bound; the uncapped sum diverges for every m > 0.
TruncationBound truncation_bound(const DetectorConfig& cfg, const FadingParams& p, int t0);

double collaborative_pd(double pd_single, int n_users, FusionRule rule);
double collaborative_pfa(double pfa_single, int n_users, FusionRule rule);

/// Per-user probability that yields `collaborative` after fusion.
double invert_collaborative(double collaborative, int n_users, FusionRule rule);

/// Square-law selection over L branches: 1 - (1 - Pf)^L.
double sls_pfa(int u, double threshold, int branches);
/// Per-branch Pf that yields the SLS false-alarm probability `target`.
double invert_sls_pfa(double target, int branches);

double sls_average_pd(const DetectorConfig& cfg, std::span<const FadingParams> branches,
                      const SeriesControl& ctl = {});

struct AwgnChannel {
  double snr = 0.0;  // linear, fixed
};
using Channel = std::variant<AwgnChannel, FadingParams>;

struct RocRequest {
  Channel channel = AwgnChannel{};
  int u = 1;
  double noise_uncertainty_db = 0.0;
  std::optional<FusionRule> fusion;  // nullopt: single user
  int users = 1;
  int branches = 1;  // SLS branches per user, i.i.d. copies of `channel`
  std::vector<double> pf_grid;  // empty: default_pf_grid()
  SeriesControl control;
};

struct RocPoint {
  double threshold = 0.0;  // per-user, per-branch lambda
  double pfa = 0.0;        // system false-alarm probability
  double pd = 0.0;         // system detection probability
};

struct RocCurve {
  std::vector<RocPoint> points;  // ascending pfa
  std::string sweep;
  RocRequest request;
};

/// n log-spaced points in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int n);
/// 200 log-spaced points in [1e-4, 0.999].
std::vector<double> default_pf_grid();

RocCurve roc_curve(const RocRequest& request);

}  // namespace specsense

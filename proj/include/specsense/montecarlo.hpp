#pragma once

#include <cstdint>
#include <span>

#include "specsense/detection.hpp"
#include "specsense/fading.hpp"
#include "specsense/random.hpp"

namespace specsense {

inline constexpr std::uint64_t kDefaultSeed = 20190601;

/// Trials are split over `stream_count` independent substreams keyed by
/// (seed, stream index). Results depend on (seed, stream_count, trials) only;
/// `workers` (0 = automatic) changes nothing but speed.
struct SimConfig {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = kDefaultSeed;
  unsigned stream_count = 16;
  unsigned workers = 0;

  void validate() const;
};

struct SimResult {
  double estimate = 0.0;
  std::uint64_t trials = 0;
  /// 1.96 sqrt(p (1 - p) / trials)
  double ci95_halfwidth = 0.0;
};

enum class Hypothesis { H0, H1 };

/// Energy statistic over 2u real Gaussian components with unit variance.
/// Under H1 the whole mean sqrt(2 gamma) sits on the first component.
double sample_statistic(int u, double gamma, Hypothesis h, RandomStream& rng);

/// Fraction of trials in which a fresh fading draw and H1 statistic exceed
/// alpha^2 lambda.
SimResult simulate_average_pd(const DetectorConfig& cfg, const FadingParams& p, const SimConfig& sim);

/// N users with independent fading, hard decisions fused by `rule`. Under H0
/// the users compare against the nominal lambda.
SimResult simulate_fusion(const DetectorConfig& cfg, const FadingParams& p, int n_users, FusionRule rule,
                          const SimConfig& sim, Hypothesis h = Hypothesis::H1);

/// Square-law selection: the largest branch statistic against the threshold.
SimResult simulate_sls(const DetectorConfig& cfg, std::span<const FadingParams> branches, const SimConfig& sim,
                       Hypothesis h = Hypothesis::H1);

/// Paired rank statistic P(Y1 > Y0) with ties at half weight; each pair uses
/// a fresh fading draw for Y1.
SimResult simulate_auc(int u, const FadingParams& p, const SimConfig& sim);

}  // namespace specsense

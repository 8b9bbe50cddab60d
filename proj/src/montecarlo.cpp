#include "specsense/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "specsense/errors.hpp"
#include "specsense/parallel.hpp"

namespace specsense {
namespace {

// Runs `trials` scored trials. Each trial scores 0..scale; the estimate is
// total / (scale * trials). Scores are integers, so the merge is exact.
SimResult run_trials(const SimConfig& sim, std::uint64_t scale,
                     const std::function<std::uint64_t(RandomStream&)>& trial) {
  sim.validate();
  const std::uint64_t streams = sim.stream_count;
  std::vector<std::uint64_t> totals(streams, 0);
  parallel_for(
      streams,
      [&](std::size_t k) {
        RandomStream rng(sim.seed, k);
        const std::uint64_t n = sim.trials / streams + (k < sim.trials % streams ? 1 : 0);
        std::uint64_t total = 0;
        for (std::uint64_t t = 0; t < n; ++t) total += trial(rng);
        totals[k] = total;
      },
      sim.workers);
  std::uint64_t total = 0;
  for (std::uint64_t v : totals) total += v;
  SimResult r;
  r.trials = sim.trials;
  r.estimate = static_cast<double>(total) / (static_cast<double>(scale) * static_cast<double>(sim.trials));
  r.ci95_halfwidth = 1.96 * std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(sim.trials));
  return r;
}

double decision_threshold(const DetectorConfig& cfg, Hypothesis h) {
  return h == Hypothesis::H1 ? cfg.effective_threshold() : cfg.threshold;
}

}  // namespace

void SimConfig::validate() const {
  detail::require(trials >= 1000, "simulation: at least 1000 trials required");
  detail::require(stream_count >= 1, "simulation: stream_count must be positive");
}

double sample_statistic(int u, double gamma, Hypothesis h, RandomStream& rng) {
  double y = 0.0;
  for (int k = 0; k < 2 * u; ++k) {
    double x = rng.normal();
    if (k == 0 && h == Hypothesis::H1) x += std::sqrt(2.0 * gamma);
    y += x * x;
  }
  return y;
}

SimResult simulate_average_pd(const DetectorConfig& cfg, const FadingParams& p, const SimConfig& sim) {
  cfg.validate();
  p.validate();
  const double lambda = cfg.effective_threshold();
  return run_trials(sim, 1, [&](RandomStream& rng) -> std::uint64_t {
    const double gamma = sample_snr(p, rng);
    return sample_statistic(cfg.u, gamma, Hypothesis::H1, rng) > lambda ? 1 : 0;
  });
}

SimResult simulate_fusion(const DetectorConfig& cfg, const FadingParams& p, int n_users, FusionRule rule,
                          const SimConfig& sim, Hypothesis h) {
  cfg.validate();
  p.validate();
  detail::require(n_users >= 1, "simulate_fusion: user count must be positive");
  const double lambda = decision_threshold(cfg, h);
  return run_trials(sim, 1, [&](RandomStream& rng) -> std::uint64_t {
    int detections = 0;
    for (int i = 0; i < n_users; ++i) {
      const double gamma = h == Hypothesis::H1 ? sample_snr(p, rng) : 0.0;
      if (sample_statistic(cfg.u, gamma, h, rng) > lambda) ++detections;
    }
    return rule == FusionRule::Or ? (detections > 0 ? 1 : 0) : (detections == n_users ? 1 : 0);
  });
}

SimResult simulate_sls(const DetectorConfig& cfg, std::span<const FadingParams> branches, const SimConfig& sim,
                       Hypothesis h) {
  cfg.validate();
  detail::require(!branches.empty(), "simulate_sls: at least one branch required");
  for (const FadingParams& p : branches) p.validate();
  const double lambda = decision_threshold(cfg, h);
  return run_trials(sim, 1, [&](RandomStream& rng) -> std::uint64_t {
    double best = 0.0;
    for (const FadingParams& p : branches) {
      const double gamma = h == Hypothesis::H1 ? sample_snr(p, rng) : 0.0;
      best = std::max(best, sample_statistic(cfg.u, gamma, h, rng));
    }
    return best > lambda ? 1 : 0;
  });
}

SimResult simulate_auc(int u, const FadingParams& p, const SimConfig& sim) {
  detail::require(u >= 1, "simulate_auc: u must be a positive integer");
  p.validate();
  return run_trials(sim, 2, [&](RandomStream& rng) -> std::uint64_t {
    const double gamma = sample_snr(p, rng);
    const double y1 = sample_statistic(u, gamma, Hypothesis::H1, rng);
    const double y0 = sample_statistic(u, 0.0, Hypothesis::H0, rng);
    return y1 > y0 ? 2 : (y1 == y0 ? 1 : 0);
  });
}

}  // namespace specsense

#include "specsense/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "specsense/auc.hpp"
#include "specsense/detection.hpp"
#include "specsense/entropy.hpp"
#include "specsense/montecarlo.hpp"
#include "specsense/oracles.hpp"
#include "specsense/random.hpp"

namespace specsense {
namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Mean SNR in dB at which the averaged Pd reaches `target`.
double snr_db_for_pd(const DetectorConfig& cfg, double m, double ms, double target) {
  double lo = -10.0;
  double hi = 60.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (average_pd(cfg, FadingParams::from_db(m, ms, mid)) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Outcome noise_uncertainty_anchor() {
  const FadingParams p = FadingParams::from_db(1.3, 2.7, 6.0);
  const double pd0 = average_pd({2, 7.78, 0.0}, p);
  const double pd2 = average_pd({2, 7.78, 2.0}, p);
  const double gap = snr_db_for_pd({2, 7.78, 2.0}, 1.3, 2.7, 0.9) - snr_db_for_pd({2, 7.78, 0.0}, 1.3, 2.7, 0.9);
  const bool ok = std::abs(pd0 - 0.52) <= 0.03 && std::abs(pd2 - 0.15) <= 0.03 && std::abs(gap - 5.0) <= 0.5;
  return {ok, fmt("Pd(0 dB)=%.4f Pd(2 dB)=%.4f extra SNR for Pd=0.9: %.3f dB", pd0, pd2, gap)};
}

struct TableRow {
  double m, ms, snr_db, shannon, cross_rayleigh, m_hat, cross_nakagami;
};

constexpr std::array<TableRow, 8> kEntropyTable{{
    {2, 3, 5, 3.005, 3.104, 1.14, 3.096},
    {2, 30, 5, 2.959, 3.104, 1.89, 2.960},
    {20, 3, 5, 2.730, 3.104, 2.11, 2.913},
    {20, 30, 5, 1.870, 3.104, 11.99, 1.876},
    {2, 3, 15, 6.327, 6.426, 1.14, 6.418},
    {2, 30, 15, 6.281, 6.426, 1.88, 6.282},
    {20, 3, 15, 6.051, 6.426, 2.11, 6.235},
    {20, 30, 15, 5.191, 6.426, 11.98, 5.198},
}};

Outcome entropy_table() {
  double worst = 0.0;
  for (const TableRow& row : kEntropyTable) {
    const FadingParams p = FadingParams::from_db(row.m, row.ms, row.snr_db);
    worst = std::max(worst, std::abs(shannon_entropy(p) - row.shannon));
    worst = std::max(worst, std::abs(cross_entropy_rayleigh(p, p.mean_snr) - row.cross_rayleigh));
    worst = std::max(worst, std::abs(cross_entropy_nakagami(p, row.m_hat, p.mean_snr) - row.cross_nakagami));
  }
  return {worst <= 0.005, fmt("24 tabulated entropies, worst deviation %.4f bits", worst)};
}

Outcome mle_table(std::uint64_t seed) {
  bool ok = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < 4; ++i) {
    const TableRow& row = kEntropyTable[i];
    const FadingParams p = FadingParams::from_db(row.m, row.ms, row.snr_db);
    const EntropyReport r = entropy_report(p, 1'000'000, seed + i);
    const double mean_err = std::abs(r.mean_snr_n / p.mean_snr - 1.0);
    ok = ok && std::abs(r.m_hat - row.m_hat) <= 0.05 && mean_err <= 0.01;
    os << (i ? "; " : "") << fmt("(%g,%g) m_hat=%.3f mean err %.2f%%", row.m, row.ms, r.m_hat, 100.0 * mean_err);
  }
  return {ok, os.str()};
}

constexpr std::array<double, 5> kGridM{1.0, 1.3, 3.5, 5.6, 20.0};
constexpr std::array<double, 4> kGridMs{1.1, 2.7, 4.3, 30.0};
constexpr std::array<double, 4> kGridSnrDb{0.0, 3.0, 7.0, 15.0};

void for_each_grid_point(const std::function<void(ChannelSeries&, const DetectorConfig&)>& body) {
  for (double m : kGridM) {
    for (double ms : kGridMs) {
      for (double db : kGridSnrDb) {
        ChannelSeries series(FadingParams::from_db(m, ms, db));
        for (int u = 1; u <= 3; ++u) body(series, DetectorConfig{u, threshold_for_pfa(u, 0.1), 0.0});
      }
    }
  }
}

Outcome series_vs_quadrature() {
  double worst = 0.0;
  int count = 0;
  for_each_grid_point([&](ChannelSeries& s, const DetectorConfig& cfg) {
    worst = std::max(worst, std::abs(s.average_pd(cfg).value - average_pd_quadrature(cfg, s.params())));
    ++count;
  });
  return {worst <= 1e-6, fmt("%d grid points, max |series - quadrature| = %.2e", count, worst)};
}

Outcome closed_forms_vs_simulation(std::uint64_t seed) {
  SimConfig sim;
  sim.trials = 100'000;
  int total = 0;
  int inside = 0;
  auto check = [&](double analytic, const SimResult& r) {
    const double sigma = std::sqrt(std::max(analytic * (1.0 - analytic), 1e-12) / static_cast<double>(r.trials));
    ++total;
    if (std::abs(r.estimate - analytic) <= 3.0 * sigma) ++inside;
    ++sim.seed;
  };
  sim.seed = seed;

  const std::array<std::array<double, 4>, 5> single{{
      {1.3, 2.7, 6.0, 2}, {3.5, 4.3, 3.0, 2}, {5.6, 1.1, 7.0, 1}, {2.0, 10.0, 10.0, 3}, {1.0, 30.0, 0.0, 1}}};
  for (const auto& s : single) {
    const FadingParams p = FadingParams::from_db(s[0], s[1], s[2]);
    const int u = static_cast<int>(s[3]);
    for (double pf : {0.01, 0.1}) {
      for (double beta : {0.0, 1.0}) {
        const DetectorConfig cfg{u, threshold_for_pfa(u, pf), beta};
        check(average_pd(cfg, p), simulate_average_pd(cfg, p, sim));
      }
    }
  }

  const FadingParams fusion_channel = FadingParams::from_db(3.5, 4.3, 3.0);
  const DetectorConfig fusion_cfg{2, threshold_for_pfa(2, 0.1), 0.0};
  const double pd_user = average_pd(fusion_cfg, fusion_channel);
  const double pf_user = pfa(fusion_cfg);
  for (int n : {2, 4, 8}) {
    for (FusionRule rule : {FusionRule::Or, FusionRule::And}) {
      check(collaborative_pd(pd_user, n, rule), simulate_fusion(fusion_cfg, fusion_channel, n, rule, sim));
      check(collaborative_pfa(pf_user, n, rule),
            simulate_fusion(fusion_cfg, fusion_channel, n, rule, sim, Hypothesis::H0));
    }
  }

  const FadingParams sls_channel = FadingParams::from_db(5.6, 1.1, 7.0);
  for (int branches : {1, 2, 4}) {
    const std::vector<FadingParams> list(static_cast<std::size_t>(branches), sls_channel);
    for (int u : {1, 3}) {
      const DetectorConfig cfg{u, threshold_for_pfa(u, 0.05), 0.0};
      check(sls_average_pd(cfg, list), simulate_sls(cfg, list, sim));
      check(sls_pfa(u, cfg.threshold, branches), simulate_sls(cfg, list, sim, Hypothesis::H0));
    }
  }

  for (double m : {1.0, 15.0}) {
    for (double ms : {1.5, 15.0}) {
      const FadingParams p = FadingParams::from_db(m, ms, 2.0);
      check(auc_average(2, p), simulate_auc(2, p, sim));
    }
  }
  const double share = static_cast<double>(inside) / total;
  return {share >= 0.95, fmt("%d/%d grid points within 3 sigma (%.1f%%)", inside, total, 100.0 * share)};
}

Outcome auc_consistency() {
  double worst_trap = 0.0;
  for (int u : {1, 2, 3}) {
    for (auto [m, ms] : std::array<std::array<double, 2>, 3>{{{1.0, 2.0}, {3.5, 4.3}, {15.0, 15.0}}}) {
      for (double db : {0.0, 5.0, 10.0}) {
        const FadingParams p = FadingParams::from_db(m, ms, db);
        worst_trap = std::max(worst_trap, std::abs(auc_average(u, p) - oracle::roc_trapezoid_auc(u, p, 500)));
      }
    }
  }
  double worst_inst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double g = 0.4 * i;
    worst_inst = std::max(worst_inst, std::abs(auc_instantaneous(1, g) - (1.0 - 0.5 * std::exp(-0.5 * g))));
  }
  bool increasing = true;
  const std::vector<double> ms_axis{1.5, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  const std::vector<double> m_axis{0.5, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  std::vector<std::vector<double>> surface;
  for (double m : m_axis) {
    surface.emplace_back();
    for (double ms : ms_axis) surface.back().push_back(auc_average(2, FadingParams::from_db(m, ms, 2.0)));
  }
  for (std::size_t i = 0; i < m_axis.size(); ++i) {
    for (std::size_t j = 0; j < ms_axis.size(); ++j) {
      if (i > 0 && !(surface[i][j] > surface[i - 1][j])) increasing = false;
      if (j > 0 && !(surface[i][j] > surface[i][j - 1])) increasing = false;
    }
  }
  const bool ok = worst_trap <= 1e-4 && worst_inst <= 1e-12 && increasing;
  return {ok, fmt("trapezoid gap %.2e, u=1 reduction gap %.2e, surface increasing in m and m_s: %s", worst_trap,
                  worst_inst, increasing ? "yes" : "no")};
}

Outcome nakagami_limit() {
  double worst = 0.0;
  for (double m : {1.0, 2.0, 4.0}) {
    for (double db : {0.0, 5.0, 10.0}) {
      const FadingParams p = FadingParams::from_db(m, 1e4, db);
      for (int u : {1, 2}) {
        for (double pf : {0.01, 0.1}) {
          const DetectorConfig cfg{u, threshold_for_pfa(u, pf), 0.0};
          worst = std::max(worst, std::abs(average_pd(cfg, p) - average_pd_nakagami(cfg, m, p.mean_snr)));
        }
      }
    }
  }
  return {worst <= 1e-3, fmt("m_s = 1e4 against gamma-law SNR, max gap %.2e", worst)};
}

struct Draw {
  FadingParams p;
  int u;
  double beta;
};

Draw random_draw(RandomStream& rng) {
  Draw d;
  d.p = FadingParams::from_db(0.5 + 19.5 * rng.uniform(), 1.2 + 28.8 * rng.uniform(), -5.0 + 25.0 * rng.uniform());
  d.u = 1 + static_cast<int>(4.0 * rng.uniform());
  d.beta = 3.0 * rng.uniform();
  return d;
}

Outcome property_suites(std::uint64_t seed) {
  constexpr int kDraws = 200;
  constexpr double kSlack = 1e-12;
  RandomStream rng(seed, 0xC0FFEE);
  int roc_fail = 0, fusion_fail = 0, beta_fail = 0, kl_fail = 0, cross_fail = 0, det_fail = 0;
  const std::vector<double> grid = log_spaced(1e-4, 0.999, 20);
  for (int i = 0; i < kDraws; ++i) {
    const Draw d = random_draw(rng);
    RocRequest req;
    req.channel = d.p;
    req.u = d.u;
    req.pf_grid = grid;
    const RocCurve curve = roc_curve(req);
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
      const RocPoint& pt = curve.points[k];
      bool bad = pt.pd + kSlack < pt.pfa || pt.pd < 0.0 || pt.pd > 1.0;
      if (k > 0) {
        const RocPoint& prev = curve.points[k - 1];
        bad = bad || !(pt.pfa > prev.pfa) || pt.pd + kSlack < prev.pd || !(pt.threshold < prev.threshold);
      }
      if (bad) {
        ++roc_fail;
        break;
      }
    }
  }
  for (int i = 0; i < kDraws; ++i) {
    const Draw d = random_draw(rng);
    const DetectorConfig cfg{d.u, threshold_for_pfa(d.u, 0.001 + 0.5 * rng.uniform()), d.beta};
    const int n = 2 + static_cast<int>(7.0 * rng.uniform());
    const double pd = average_pd(cfg, d.p);
    const double pf = pfa(cfg);
    const bool ok = collaborative_pd(pd, n, FusionRule::Or) + kSlack >= pd &&
                    pd + kSlack >= collaborative_pd(pd, n, FusionRule::And) &&
                    collaborative_pfa(pf, n, FusionRule::Or) + kSlack >= pf &&
                    pf + kSlack >= collaborative_pfa(pf, n, FusionRule::And);
    if (!ok) ++fusion_fail;
  }
  for (int i = 0; i < kDraws; ++i) {
    const Draw d = random_draw(rng);
    const double lambda = threshold_for_pfa(d.u, 0.001 + 0.5 * rng.uniform());
    const double b1 = 3.0 * rng.uniform();
    const double b2 = b1 + 0.01 + 2.0 * rng.uniform();
    if (average_pd({d.u, lambda, b2}, d.p) > average_pd({d.u, lambda, b1}, d.p) + kSlack) ++beta_fail;
  }
  for (int i = 0; i < kDraws; ++i) {
    const Draw d = random_draw(rng);
    const double h = shannon_entropy(d.p);
    const double mean_r = d.p.mean_snr * std::exp(2.0 * rng.uniform() - 1.0);
    const double m_hat = 0.2 + 20.0 * rng.uniform();
    const double mean_n = d.p.mean_snr * std::exp(2.0 * rng.uniform() - 1.0);
    const double kl_r = cross_entropy_rayleigh(d.p, mean_r) - h;
    const double kl_n = cross_entropy_nakagami(d.p, m_hat, mean_n) - h;
    if (kl_r < -1e-9 || kl_n < -1e-9) ++kl_fail;
    if (cross_entropy_rayleigh(d.p, mean_r) + 1e-9 < h || cross_entropy_nakagami(d.p, m_hat, mean_n) + 1e-9 < h)
      ++cross_fail;
  }
  for (int i = 0; i < kDraws; ++i) {
    const Draw d = random_draw(rng);
    SimConfig sim;
    sim.trials = 1000 + static_cast<std::uint64_t>(3000.0 * rng.uniform());
    sim.seed = seed + static_cast<std::uint64_t>(i);
    sim.stream_count = 1 + static_cast<unsigned>(16.0 * rng.uniform());
    const DetectorConfig cfg{d.u, threshold_for_pfa(d.u, 0.1), d.beta};
    sim.workers = 1;
    const SimResult serial = simulate_average_pd(cfg, d.p, sim);
    sim.workers = 4;
    const SimResult threaded = simulate_average_pd(cfg, d.p, sim);
    if (serial.estimate != threaded.estimate || serial.ci95_halfwidth != threaded.ci95_halfwidth) ++det_fail;
  }
  const int fails = roc_fail + fusion_fail + beta_fail + kl_fail + cross_fail + det_fail;
  return {fails == 0,
          fmt("%d draws per suite; failures: roc %d, fusion %d, noise %d, kl %d, cross %d, determinism %d", kDraws,
              roc_fail, fusion_fail, beta_fail, kl_fail, cross_fail, det_fail)};
}

Outcome truncation_documentation() {
  bool all_infinite = true;
  for (double m : kGridM) {
    const TruncationBound b = truncation_bound({2, 7.78, 0.0}, FadingParams::from_db(m, 2.7, 6.0), 10);
    all_infinite = all_infinite && std::isinf(b.closed_form) && b.closed_form > 0.0;
  }
  const double rel_tol = SeriesControl{}.rel_tol;
  double worst = 0.0;
  for_each_grid_point([&](ChannelSeries& s, const DetectorConfig& cfg) {
    const double adaptive = s.average_pd(cfg).value;
    const double reference = s.fixed_terms_pd(cfg, 10'000);
    worst = std::max(worst, std::abs(adaptive - reference) / reference);
  });
  return {all_infinite && worst <= rel_tol,
          fmt("closed form infinite for every m: %s; max relative remainder %.2e (tolerance %.0e)",
              all_infinite ? "yes" : "no", worst, rel_tol)};
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome(std::uint64_t)> run;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const std::vector<Criterion> criteria{
      {1, "noise-uncertainty anchor", 1.0, [](std::uint64_t) { return noise_uncertainty_anchor(); }},
      {2, "entropy closed forms vs table", 0.1, [](std::uint64_t) { return entropy_table(); }},
      {3, "Nakagami MLE on 1e6 samples", 10.0, mle_table},
      {4, "series vs quadrature", 30.0, [](std::uint64_t) { return series_vs_quadrature(); }},
      {5, "closed forms vs Monte Carlo", 120.0, closed_forms_vs_simulation},
      {6, "AUC consistency", 0.0, [](std::uint64_t) { return auc_consistency(); }},
      {7, "Nakagami limit", 0.0, [](std::uint64_t) { return nakagami_limit(); }},
      {8, "property suites", 0.0, property_suites},
      {9, "truncation bound", 0.0, [](std::uint64_t) { return truncation_documentation(); }},
  };
  std::vector<CriterionResult> results;
  for (const Criterion& c : criteria) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end())
      continue;
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(options.seed);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = o.passed;
    r.detail = o.detail;
    if (c.budget_seconds > 0.0 && r.seconds > c.budget_seconds) {
      r.passed = false;
      r.detail += fmt("; over time budget of %g s", c.budget_seconds);
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_criterion(const CriterionResult& r) {
  return fmt("%s  %d  %s (%s) [%.2f s]", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.detail.c_str(),
             r.seconds);
}

}  // namespace specsense

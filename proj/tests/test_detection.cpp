#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "specsense/detection.hpp"
#include "specsense/errors.hpp"
#include "specsense/oracles.hpp"

using namespace specsense;

namespace {

struct Draw {
  FadingParams p;
  int u;
  double pf;
  double beta;
};

Draw draw(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> um(0.5, 20.0), ums(1.1, 30.0), udb(-5.0, 20.0), upf(0.001, 0.6),
      ubeta(0.0, 3.0);
  const double m = um(gen), ms = ums(gen), db = udb(gen);
  return {FadingParams::from_db(m, ms, db), 1 + static_cast<int>(gen() % 4), upf(gen), ubeta(gen)};
}

}  // namespace

TEST(Pfa, ClosedForms) {
  EXPECT_NEAR(pfa({2, 7.78, 0.0}), (1.0 + 3.89) * std::exp(-3.89), 1e-15);
  EXPECT_NEAR(pfa({2, 7.78, 0.0}), 0.1, 1e-3);
  EXPECT_EQ(pfa({3, 0.0, 0.0}), 1.0);
  for (double l : {0.1, 2.0, 30.0}) EXPECT_NEAR(pfa({1, l, 0.0}), std::exp(-0.5 * l), 1e-15);
}

TEST(Pfa, NoiseUncertaintyDoesNotMoveFalseAlarms) {
  EXPECT_EQ(pfa({2, 7.78, 0.0}), pfa({2, 7.78, 2.0}));
}

TEST(ThresholdForPfa, InvertsPfa) {
  EXPECT_NEAR(threshold_for_pfa(2, 0.1), 7.78, 1e-2);
  for (double p : {1e-9, 1e-4, 0.1, 0.5, 0.999}) {
    EXPECT_NEAR(threshold_for_pfa(1, p), -2.0 * std::log(p), 1e-12 * std::max(1.0, -2.0 * std::log(p)));
    for (int u : {1, 2, 5, 30}) EXPECT_NEAR(pfa({u, threshold_for_pfa(u, p), 0.0}), p, 1e-12);
  }
  EXPECT_THROW(threshold_for_pfa(2, 0.0), DomainError);
  EXPECT_THROW(threshold_for_pfa(2, 1.0), DomainError);
}

TEST(PdAwgn, Reductions) {
  const DetectorConfig cfg{2, 7.78, 0.0};
  EXPECT_NEAR(pd_awgn(cfg, 0.0), pfa(cfg), 1e-15);
  EXPECT_EQ(pd_awgn({2, 0.0, 0.0}, 3.0), 1.0);
  EXPECT_NEAR(pd_awgn({1, 2.0, 0.0}, 0.5), marcum_q(1, 1.0, std::sqrt(2.0)), 1e-15);
}

TEST(AveragePd, NoiseUncertaintyAnchor) {
  const FadingParams p = FadingParams::from_db(1.3, 2.7, 6.0);
  EXPECT_NEAR(average_pd({2, 7.78, 0.0}, p), 0.52, 0.03);
  EXPECT_NEAR(average_pd({2, 7.78, 2.0}, p), 0.15, 0.03);
}

TEST(AveragePd, ZeroThresholdIsCertainDetection) {
  const auto r = average_pd_series({2, 0.0, 0.0}, FadingParams::from_db(1.3, 2.7, 6.0));
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.terms, 0);
}

TEST(AveragePd, VanishingSnrGivesPfa) {
  const DetectorConfig cfg{2, 7.78, 0.0};
  const FadingParams p{2.0, 3.0, 1e-8};
  EXPECT_NEAR(average_pd(cfg, p), pfa(cfg), 1e-6);
  EXPECT_NEAR(average_pd_quadrature(cfg, p), pfa(cfg), 1e-6);
}

TEST(AveragePd, MatchesQuadratureOnRandomDraws) {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 200; ++i) {
    const Draw d = draw(gen);
    const DetectorConfig cfg{d.u, threshold_for_pfa(d.u, d.pf), d.beta};
    const SeriesResult r = average_pd_series(cfg, d.p);
    EXPECT_NEAR(r.value, average_pd_quadrature(cfg, d.p), 1e-8)
        << "m=" << d.p.m << " ms=" << d.p.ms << " snr=" << d.p.mean_snr << " u=" << d.u;
    EXPECT_LE(r.unclamped, 1.0 + 1e-9);
    EXPECT_GE(r.unclamped, -1e-9);
  }
}

TEST(AveragePd, WeightsFormAProbabilityDistribution) {
  ChannelSeries s(FadingParams::from_db(3.5, 4.3, 3.0));
  double total = 0.0;
  for (int n = 0; n < 4000; ++n) total += s.weight(n);
  // The tail beyond n decays like n^{-m_s}, so 4000 terms leave ~1e-12 of the mass.
  EXPECT_NEAR(total, 1.0, 1e-9);
  // Zero threshold, textbook series: sum_n w_n Q(n + u, 0) = sum_n w_n.
  EXPECT_NEAR(s.direct_partial_sum({2, 0.0, 0.0}, 4000), total, 1e-15);
}

TEST(AveragePd, RayleighLimit) {
  // m = 1, m_s large: exponential SNR, against quadrature over the exponential density.
  for (double db : {0.0, 5.0, 10.0}) {
    const FadingParams p = FadingParams::from_db(1.0, 1e4, db);
    for (double pf : {0.01, 0.1, 0.5}) {
      const DetectorConfig cfg{2, threshold_for_pfa(2, pf), 0.0};
      EXPECT_NEAR(average_pd(cfg, p), average_pd_nakagami(cfg, 1.0, p.mean_snr), 1e-3);
    }
  }
}

TEST(AveragePd, ReportsNonConvergence) {
  SeriesControl ctl;
  ctl.max_terms = 10;
  EXPECT_THROW(average_pd({2, 60.0, 0.0}, FadingParams::from_db(1.3, 2.7, 6.0), ctl), ConvergenceError);
  ctl.max_terms = 5;
  EXPECT_THROW(ctl.validate(), DomainError);
}

TEST(AveragePd, NoiseUncertaintyLowersDetection) {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 200; ++i) {
    const Draw d = draw(gen);
    const double lambda = threshold_for_pfa(d.u, d.pf);
    EXPECT_LE(average_pd({d.u, lambda, d.beta + 0.5}, d.p), average_pd({d.u, lambda, d.beta}, d.p) + 1e-12);
  }
}

TEST(AveragePd, ImprovesWithMeanSnr) {
  const DetectorConfig cfg{2, 7.78, 0.0};
  double prev = 0.0;
  for (double db = -10.0; db <= 30.0; db += 2.0) {
    const double pd = average_pd(cfg, FadingParams::from_db(1.3, 2.7, db));
    EXPECT_GT(pd, prev);
    prev = pd;
  }
}

TEST(TruncationBound, ClosedFormIsInfinite) {
  for (double m : {0.3, 1.0, 5.6, 20.0}) {
    const TruncationBound b = truncation_bound({2, 7.78, 0.0}, FadingParams::from_db(m, 2.7, 6.0), 5);
    EXPECT_TRUE(std::isinf(b.closed_form));
    EXPECT_GT(b.closed_form, 0.0);
  }
}

TEST(TruncationBound, DominatesRemainderAndShrinks) {
  for (double m : {1.0, 3.5, 20.0}) {
    for (double ms : {1.1, 2.7, 30.0}) {
      for (double db : {0.0, 7.0, 15.0}) {
        const FadingParams p = FadingParams::from_db(m, ms, db);
        const DetectorConfig cfg{2, threshold_for_pfa(2, 0.1), 0.0};
        ChannelSeries s(p);
        const double exact = s.average_pd(cfg).value;
        double prev = std::numeric_limits<double>::infinity();
        for (int t0 : {1, 2, 4, 8, 16, 32, 64, 128}) {
          const TruncationBound b = truncation_bound(cfg, p, t0);
          const double remainder = std::abs(exact - s.direct_partial_sum(cfg, t0));
          EXPECT_GE(b.pd_bound * (1.0 + 1e-9) + 1e-13, remainder) << m << " " << ms << " " << db << " t0=" << t0;
          EXPECT_GE(b.pd_bound, std::min(1.0, b.tail_mass));
          EXPECT_LE(b.pd_bound, prev * (1.0 + 1e-12)) << m << " " << ms << " " << db << " t0=" << t0;
          EXPECT_GE(b.n_cap, t0);
          prev = b.pd_bound;
        }
      }
    }
  }
}

TEST(Fusion, ClosedForms) {
  EXPECT_EQ(collaborative_pd(0.37, 1, FusionRule::Or), 0.37);
  EXPECT_EQ(collaborative_pd(0.37, 1, FusionRule::And), 0.37);
  EXPECT_NEAR(collaborative_pd(0.5, 2, FusionRule::Or), 0.75, 1e-15);
  EXPECT_NEAR(collaborative_pd(0.5, 2, FusionRule::And), 0.25, 1e-15);
  EXPECT_NEAR(collaborative_pfa(0.1, 4, FusionRule::Or), 0.3439, 1e-15);
  EXPECT_NEAR(collaborative_pfa(0.1, 4, FusionRule::And), 1e-4, 1e-18);
  for (FusionRule rule : {FusionRule::Or, FusionRule::And}) {
    for (double p : {1e-6, 0.3, 0.99}) {
      EXPECT_NEAR(collaborative_pfa(invert_collaborative(p, 5, rule), 5, rule), p, 1e-14);
    }
  }
}

TEST(Fusion, OrderingOnRandomDraws) {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 200; ++i) {
    const Draw d = draw(gen);
    const DetectorConfig cfg{d.u, threshold_for_pfa(d.u, d.pf), d.beta};
    const int n = 2 + static_cast<int>(gen() % 7);
    const double pd = average_pd(cfg, d.p);
    EXPECT_GE(collaborative_pd(pd, n, FusionRule::Or), pd);
    EXPECT_LE(collaborative_pd(pd, n, FusionRule::And), pd);
    EXPECT_GE(collaborative_pfa(pfa(cfg), n, FusionRule::Or), pfa(cfg));
    EXPECT_LE(collaborative_pfa(pfa(cfg), n, FusionRule::And), pfa(cfg));
  }
}

TEST(Fusion, OrBeatsSingleUserAtEqualFalseAlarm) {
  for (double pf : {0.01, 0.1, 0.3}) {
    RocRequest single;
    single.channel = FadingParams::from_db(3.5, 4.3, 3.0);
    single.u = 2;
    single.pf_grid = {pf};
    RocRequest fused = single;
    fused.fusion = FusionRule::Or;
    fused.users = 2;
    EXPECT_GT(roc_curve(fused).points[0].pd, roc_curve(single).points[0].pd);
  }
}

TEST(Sls, ClosedForms) {
  EXPECT_NEAR(sls_pfa(2, 7.78, 1), pfa({2, 7.78, 0.0}), 1e-15);
  EXPECT_NEAR(sls_pfa(1, 2.0 * std::log(10.0), 2), 0.19, 1e-14);
  EXPECT_LT(sls_pfa(2, 7.78, 2), sls_pfa(2, 7.78, 3));
  const FadingParams p = FadingParams::from_db(5.6, 1.1, 7.0);
  const DetectorConfig cfg{1, 4.0, 0.0};
  const std::vector<FadingParams> one{p};
  EXPECT_NEAR(sls_average_pd(cfg, one), average_pd(cfg, p), 1e-15);
  const double pd = average_pd(cfg, p);
  const std::vector<FadingParams> two{p, p};
  EXPECT_NEAR(sls_average_pd(cfg, two), 1.0 - (1.0 - pd) * (1.0 - pd), 1e-15);
}

TEST(Sls, MoreBranchesDetectMoreAtFixedFalseAlarm) {
  for (int u : {1, 3}) {
    double prev = 0.0;
    for (int branches : {1, 2, 4}) {
      RocRequest req;
      req.channel = FadingParams::from_db(5.6, 1.1, 7.0);
      req.u = u;
      req.branches = branches;
      req.pf_grid = {0.1};
      const RocCurve c = roc_curve(req);
      EXPECT_NEAR(c.points[0].pfa, 0.1, 1e-12);
      EXPECT_GT(c.points[0].pd, prev);
      prev = c.points[0].pd;
    }
  }
}

TEST(Roc, ChanceLineWithoutSignal) {
  RocRequest req;
  req.channel = AwgnChannel{0.0};
  req.u = 3;
  for (const RocPoint& pt : roc_curve(req).points) EXPECT_NEAR(pt.pd, pt.pfa, 1e-12);
}

TEST(Roc, DefaultGridAndEndpoints) {
  RocRequest req;
  req.channel = FadingParams::from_db(2.0, 3.0, 5.0);
  req.u = 2;
  const RocCurve c = roc_curve(req);
  ASSERT_EQ(c.points.size(), 200u);
  EXPECT_NEAR(c.points.front().pfa, 1e-4, 1e-15);
  EXPECT_NEAR(c.points.back().pfa, 0.999, 1e-12);
  EXPECT_GT(c.points.back().pd, 0.999);
}

TEST(Roc, RejectsBadGrid) {
  RocRequest req;
  req.pf_grid = {0.2, 0.1};
  EXPECT_THROW(roc_curve(req), DomainError);
  req.pf_grid = {0.0, 0.1};
  EXPECT_THROW(roc_curve(req), DomainError);
}

TEST(Roc, MonotoneOnRandomDraws) {
  std::mt19937_64 gen(10);
  const std::vector<double> grid = log_spaced(1e-4, 0.999, 25);
  for (int i = 0; i < 200; ++i) {
    const Draw d = draw(gen);
    RocRequest req;
    req.channel = d.p;
    req.u = d.u;
    req.noise_uncertainty_db = 0.0;
    req.pf_grid = grid;
    if (i % 3 == 1) {
      req.fusion = i % 2 ? FusionRule::Or : FusionRule::And;
      req.users = 2 + i % 5;
    }
    if (i % 4 == 2) req.branches = 2 + i % 3;
    const RocCurve c = roc_curve(req);
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      EXPECT_GE(c.points[k].pd + 1e-12, c.points[k].pfa);
      EXPECT_NEAR(c.points[k].pfa, grid[k], 1e-10 * grid[k] + 1e-14);
      if (k > 0) {
        EXPECT_GT(c.points[k].pfa, c.points[k - 1].pfa);
        EXPECT_GE(c.points[k].pd + 1e-12, c.points[k - 1].pd);
      }
    }
  }
}

TEST(Roc, RayleighOverlay) {
  RocRequest req;
  req.channel = FadingParams::from_db(1.0, 1e4, 0.0);
  req.u = 2;
  req.pf_grid = log_spaced(1e-4, 0.999, 40);
  for (const RocPoint& pt : roc_curve(req).points) {
    EXPECT_NEAR(pt.pd, average_pd_nakagami({2, pt.threshold, 0.0}, 1.0, 1.0), 1e-3);
  }
}

#pragma once

#include <functional>
#include <variant>

#include "specsense/fading.hpp"

// Reference computations that share no formulas with the closed forms they
// check: adaptive quadrature and trapezoid rules over the primitive
// definitions.
namespace specsense::oracle {

/// E[g(gamma)] under the F law. The substitution y = c / (m gamma + c) maps
/// the SNR onto Beta(m_s, m) on (0, 1), so the heavy upper tail is finite.
double expect_snr(const FadingParams& p, const std::function<double(double)>& g, double rel_tol = 1e-12);

/// Averaged AUC as the expectation of the instantaneous AUC.
double auc_average_quadrature(int u, const FadingParams& p);

/// Trapezoid area under the analytic ROC built on `points` Pf values.
/// `channel` is a fixed SNR or an F channel.
double roc_trapezoid_auc(int u, const std::variant<double, FadingParams>& channel, int points);

/// -E[log2 f(gamma)].
double shannon_entropy_quadrature(const FadingParams& p);
/// -E[log2 q(gamma)] for the exponential law of mean mean_snr_r.
double cross_entropy_rayleigh_quadrature(const FadingParams& p, double mean_snr_r);
/// -E[log2 q(gamma)] for the gamma law with shape m_hat and mean mean_snr_n.
double cross_entropy_nakagami_quadrature(const FadingParams& p, double m_hat, double mean_snr_n);

}  // namespace specsense::oracle

#pragma once

#include <variant>

#include "specsense/fading.hpp"

namespace specsense {

/// Either a fixed SNR (instantaneous AUC) or an F channel (averaged AUC).
struct AucRequest {
  int u = 1;
  std::variant<double, FadingParams> channel = 0.0;
};

/// Area under the AWGN ROC at instantaneous SNR gamma:
///
///   A = 1 - sum_{l<u} sum_{i<=l} C(l+u-1, l-i) gamma^i / (i! 2^{l+u+i}) e^{-gamma/2}
double auc_instantaneous(int u, double gamma);

/// auc_instantaneous averaged over the F composite SNR law, in closed form.
double auc_average(int u, const FadingParams& p);

double auc(const AucRequest& request);

}  // namespace specsense

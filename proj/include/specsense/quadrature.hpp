#pragma once

#include <functional>
#include <span>

namespace specsense::quad {

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod over [a, b]. Endpoints are never
/// evaluated, so integrable endpoint singularities are tolerated.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Same, over the consecutive panels [points[0], points[1]], ... sharing one
/// global error budget. points must be non-decreasing.
Result integrate(const Integrand& f, std::span<const double> points, const Options& opts = {});

/// int_a^inf f(t) dt through t = a + scale * s / (1 - s).
Result integrate_to_infinity(const Integrand& f, double a, double scale, const Options& opts = {});

/// Throwing convenience wrapper: returns value or raises ConvergenceError.
double integrate_or_throw(const Integrand& f, std::span<const double> points, const Options& opts,
                          const char* what);

}  // namespace specsense::quad

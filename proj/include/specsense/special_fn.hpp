#pragma once

// Special functions needed by the energy-detection closed forms. Everything
// here is real-valued double precision and has no dependencies beyond <cmath>.

namespace specsense {

/// Relative/absolute tolerance pair used by the iterative evaluators.
struct Accuracy {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
};

/// ln Gamma(x) for x > 0. Relative error stays near machine precision,
/// including around the zeros at x = 1 and x = 2.
double ln_gamma(double x);

/// ln|Gamma(x)| and the sign of Gamma(x) for any x that is not a
/// non-positive integer (reflection formula for x < 0.5).
struct SignedLog {
  double log_abs;
  int sign;
};
SignedLog ln_gamma_signed(double x);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double reg_gamma_q(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x), computed
/// without cancellation when P is small.
double reg_gamma_p(double a, double x);

/// Digamma psi(x) for x > 0.
double digamma(double x);

/// Trigamma psi'(x) for x > 0.
double trigamma(double x);

/// ln B(a, b) for a, b > 0.
double ln_beta(double a, double b);

/// Tricomi confluent hypergeometric function U(a, b, z) for a > 0, z > 0 and
/// any real b, from the Laplace-type integral
///   U(a,b,z) = 1/Gamma(a) * int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt.
double tricomi_u(double a, double b, double z, const Accuracy& acc = {});

/// ln U(a, b, z); same domain as tricomi_u but safe when U under/overflows.
double ln_tricomi_u(double a, double b, double z, const Accuracy& acc = {});

/// U(a, b, z) through the Kummer connection formula. Integer b is handled by
/// nudging b by 1e-8. Cross-check only; accuracy degrades near integer b and
/// for large z.
double tricomi_u_connection(double a, double b, double z);

/// Kummer confluent hypergeometric 1F1(a; b; z) by direct power series.
double kummer_1f1(double a, double b, double z, const Accuracy& acc = {});

/// Generalized Marcum Q function Q_u(a, b) for integer order u >= 1.
double marcum_q(int u, double a, double b, const Accuracy& acc = {});

/// 1 - Q_u(a, b), accurate when Q_u is close to one.
double marcum_q_complement(int u, double a, double b, const Accuracy& acc = {});

}  // namespace specsense

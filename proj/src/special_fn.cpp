#include "specsense/special_fn.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "specsense/errors.hpp"
#include "specsense/quadrature.hpp"

namespace specsense {
namespace {

constexpr double kEulerGamma = 0.5772156649015328606065;
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;
constexpr int kMaxSeriesTerms = 1'000'000;

// zeta(k) - 1 for k = 2..41.
constexpr std::array<double, 40> kZetaMinusOne = {
    0.644934066848226436472,    0.2020569031595942854,      0.082323233711138191516,
    0.0369277551433699263314,   0.0173430619844491397145,   0.0083492773819228268398,
    0.00407735619794433937869,  0.00200839282608221441785,  0.000994575127818085337146,
    0.000494188604119464558702, 0.000246086553308048298638, 0.000122713347578489146752,
    6.12481350587048292585e-5,  3.05882363070204935517e-5,  1.52822594086518717326e-5,
    7.6371976378997622736e-6,   3.81729326499983985646e-6,  1.90821271655393892566e-6,
    9.53962033872796113152e-7,  4.76932986787806463117e-7,  2.38450502727732990004e-7,
    1.19219925965311073068e-7,  5.96081890512594796124e-8,  2.98035035146522801861e-8,
    1.49015548283650412347e-8,  7.45071178983542949198e-9,  3.72533402478845705482e-9,
    1.8626597235130490064e-9,   9.31327432419668182872e-10, 4.65662906503378407299e-10,
    2.328311833676505492e-10,   1.16415501727005197759e-10, 5.82077208790270088924e-11,
    2.91038504449709968693e-11, 1.45519218910419842359e-11, 7.27595983505748101452e-12,
    3.63797954737865119024e-12, 1.81898965030706594758e-12, 9.09494784026388928253e-13,
    4.5474737830421540268e-13,
};

// B_{2k} / (2k (2k-1)), k = 1..8, for the Stirling series.
constexpr std::array<double, 8> kStirling = {
    0.08333333333333333333333,  -0.002777777777777777777778, 0.0007936507936507936507937,
    -0.0005952380952380952380952, 0.0008417508417508417508418, -0.001917526917526917526918,
    0.00641025641025641025641,  -0.02955065359477124183007,
};

// sum_{k>=2} (-1)^k (zeta(k)-1) eps^k / k, |eps| <= 0.5
double zeta_tail_series(double eps) {
  double sum = 0.0;
  double power = eps * eps;
  for (std::size_t i = 0; i < kZetaMinusOne.size(); ++i) {
    const int k = static_cast<int>(i) + 2;
    const double term = kZetaMinusOne[i] * power / k;
    sum += (k % 2 == 0) ? term : -term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    power *= eps;
  }
  return sum;
}

double stirling_ln_gamma(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double corr = 0.0;
  double power = inv;
  for (double c : kStirling) {
    corr += c * power;
    power *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + corr;
}

// sin(pi x) with exact reduction of the integer part.
double sin_pi(double x) {
  const double r = std::remainder(x, 2.0);  // r in [-1, 1]
  if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
  return std::sin(std::numbers::pi * r);
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Power series for P(a, x); accurate for x < a + 1.
double lower_gamma_series(double a, double x) {
  const double log_prefix = a * std::log(x) - x - ln_gamma(a + 1.0);
  double term = 1.0;
  double sum = 1.0;
  int small = 0;
  for (int n = 1; n < kMaxSeriesTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    small = (term < 1e-17 * sum) ? small + 1 : 0;
    if (small >= 3) return std::exp(log_prefix + std::log(sum));
  }
  throw ConvergenceError("reg_gamma: series did not converge for a=" + std::to_string(a) +
                         ", x=" + std::to_string(x));
}

// Continued fraction (modified Lentz) for Q(a, x); accurate for x >= a + 1.
double upper_gamma_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  const double log_prefix = a * std::log(x) - x - ln_gamma(a);
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxSeriesTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return std::exp(log_prefix + std::log(h));
  }
  throw ConvergenceError("reg_gamma: continued fraction did not converge for a=" +
                         std::to_string(a) + ", x=" + std::to_string(x));
}

void check_gamma_args(double a, double x, const char* fn) {
  detail::require(a > 0.0 && std::isfinite(a), std::string(fn) + ": shape a must be positive");
  detail::require(x >= 0.0 && !std::isnan(x), std::string(fn) + ": x must be non-negative");
}

}  // namespace

double ln_gamma(double x) {
  detail::require(x > 0.0 && !std::isnan(x), "ln_gamma: argument must be positive");
  if (std::isinf(x)) return x;
  if (x < 0.5) return ln_gamma(x + 1.0) - std::log(x);
  if (x < 1.5) {
    const double eps = x - 1.0;
    return eps * (1.0 - kEulerGamma) + zeta_tail_series(eps) - std::log1p(eps);
  }
  if (x < 2.5) {
    const double eps = x - 2.0;
    return eps * (1.0 - kEulerGamma) + zeta_tail_series(eps);
  }
  if (x < 10.0) {
    double product = 1.0;
    while (x >= 2.5) {
      x -= 1.0;
      product *= x;
    }
    return std::log(product) + ln_gamma(x);
  }
  return stirling_ln_gamma(x);
}

SignedLog ln_gamma_signed(double x) {
  detail::require(std::isfinite(x) && !is_nonpositive_integer(x),
                  "ln_gamma_signed: argument is a pole of Gamma");
  if (x > 0.0) return {ln_gamma(x), 1};
  // Gamma(x) Gamma(1-x) = pi / sin(pi x)
  const double s = sin_pi(x);
  return {std::log(std::numbers::pi) - std::log(std::abs(s)) - ln_gamma(1.0 - x), s > 0 ? 1 : -1};
}

double reg_gamma_q(double a, double x) {
  check_gamma_args(a, x, "reg_gamma_q");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - lower_gamma_series(a, x);
  return upper_gamma_fraction(a, x);
}

double reg_gamma_p(double a, double x) {
  check_gamma_args(a, x, "reg_gamma_p");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return lower_gamma_series(a, x);
  return 1.0 - upper_gamma_fraction(a, x);
}

double digamma(double x) {
  detail::require(x > 0.0 && std::isfinite(x), "digamma: argument must be positive");
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // ln x - 1/(2x) - sum B_2k / (2k x^2k)
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760))))));
  return shift + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
  detail::require(x > 0.0 && std::isfinite(x), "trigamma: argument must be positive");
  double shift = 0.0;
  while (x < 10.0) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 + inv * (0.5 + inv * (1.0 / 6 -
                                        inv2 * (1.0 / 30 -
                                                inv2 * (1.0 / 42 -
                                                        inv2 * (1.0 / 30 - inv2 * (5.0 / 66)))))));
  return shift + series;
}

double ln_beta(double a, double b) {
  detail::require(a > 0.0 && b > 0.0, "ln_beta: arguments must be positive");
  return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
}

double ln_tricomi_u(double a, double b, double z, const Accuracy& acc) {
  detail::require(a > 0.0 && std::isfinite(a), "tricomi_u: a must be positive");
  detail::require(z > 0.0 && std::isfinite(z), "tricomi_u: z must be positive");
  detail::require(std::isfinite(b), "tricomi_u: b must be finite");

  const double c = b - a - 1.0;  // exponent of (1 + t)
  auto log_kernel = [&](double t) { return (a - 1.0) * std::log(t) + c * std::log1p(t) - z * t; };

  // Interior maximum of the kernel: larger root of z t^2 - (b - 2 - z) t - (a - 1) = 0.
  double peak = 0.0;
  {
    const double bb = b - 2.0 - z;
    const double disc = bb * bb + 4.0 * z * (a - 1.0);
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      const double t = bb > 0.0 ? (bb + root) / (2.0 * z)
                                : (a > 1.0 ? 2.0 * (a - 1.0) / (root - bb) : (bb + root) / (2.0 * z));
      if (t > 0.0 && std::isfinite(t)) peak = t;
    }
  }
  double width;
  if (peak > 0.0) {
    const double curvature = (a - 1.0) / (peak * peak) + c / ((1.0 + peak) * (1.0 + peak));
    width = curvature > 0.0 ? 1.0 / std::sqrt(curvature) : peak;
  } else {
    width = 1.0 / (z + std::abs(c) + 1.0);
  }
  double log_scale = peak > 0.0 ? log_kernel(peak) : 0.0;
  if (a < 1.0) log_scale = std::max(log_scale, 0.0);

  quad::Options opts;
  opts.rel_tol = acc.rel_tol;
  opts.abs_tol = 0.0;

  const double split = peak > 0.0 ? peak : width;
  double head = 0.0;
  if (a < 1.0) {
    // v = t^a removes the t^{a-1} endpoint singularity.
    const double v_end = std::pow(split, a);
    auto f = [&](double v) {
      const double t = std::pow(v, 1.0 / a);
      return std::exp(c * std::log1p(t) - z * t - log_scale) / a;
    };
    const std::array<double, 2> pts{0.0, v_end};
    head = quad::integrate_or_throw(f, pts, opts, "tricomi_u");
  } else {
    auto f = [&](double t) { return t > 0.0 ? std::exp(log_kernel(t) - log_scale) : (a == 1.0 ? std::exp(-log_scale) : 0.0); };
    const double inner = std::max(0.0, split - 8.0 * width);
    const std::array<double, 3> pts{0.0, inner, split};
    head = quad::integrate_or_throw(f, pts, opts, "tricomi_u");
  }

  auto g = [&](double t) { return std::exp(log_kernel(t) - log_scale); };
  const double near_end = split + 8.0 * width;
  const std::array<double, 2> near_pts{split, near_end};
  const double near = quad::integrate_or_throw(g, near_pts, opts, "tricomi_u");
  const quad::Result tail = quad::integrate_to_infinity(g, near_end, near_end, opts);
  const double total = head + near + tail.value;
  if (!tail.converged && tail.abs_error > acc.rel_tol * total) {
    throw ConvergenceError("tricomi_u: tail quadrature did not converge for a=" + std::to_string(a) +
                           ", b=" + std::to_string(b) + ", z=" + std::to_string(z));
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ConvergenceError("tricomi_u: non-positive or non-finite integral for a=" +
                           std::to_string(a) + ", b=" + std::to_string(b) + ", z=" +
                           std::to_string(z));
  }
  return log_scale + std::log(total) - ln_gamma(a);
}

double tricomi_u(double a, double b, double z, const Accuracy& acc) {
  return std::exp(ln_tricomi_u(a, b, z, acc));
}

double kummer_1f1(double a, double b, double z, const Accuracy& acc) {
  detail::require(std::isfinite(a) && std::isfinite(b) && std::isfinite(z),
                  "kummer_1f1: arguments must be finite");
  detail::require(!is_nonpositive_integer(b), "kummer_1f1: b must not be a non-positive integer");
  constexpr int kCap = 100'000;
  double term = 1.0;
  double sum = 1.0;
  int small = 0;
  for (int n = 0; n < kCap; ++n) {
    term *= (a + n) * z / ((b + n) * (n + 1));
    sum += term;
    const bool negligible = std::abs(term) <= acc.rel_tol * std::abs(sum) || std::abs(term) <= acc.abs_tol;
    small = negligible ? small + 1 : 0;
    if (small >= 3 && b + n > 0.0) return sum;
  }
  throw ConvergenceError("kummer_1f1: series did not converge within 1e5 terms");
}

double tricomi_u_connection(double a, double b, double z) {
  detail::require(z > 0.0, "tricomi_u_connection: z must be positive");
  if (std::abs(b - std::round(b)) < 1e-12) b += 1e-8;
  // U = Gamma(1-b)/Gamma(a-b+1) M(a,b,z) + Gamma(b-1)/Gamma(a) z^{1-b} M(a-b+1,2-b,z)
  auto ratio = [](double num, double den) {
    if (is_nonpositive_integer(den)) return 0.0;
    const SignedLog n = ln_gamma_signed(num);
    const SignedLog d = ln_gamma_signed(den);
    return n.sign * d.sign * std::exp(n.log_abs - d.log_abs);
  };
  const double first = ratio(1.0 - b, a - b + 1.0) * kummer_1f1(a, b, z);
  const double second = ratio(b - 1.0, a) * std::pow(z, 1.0 - b) * kummer_1f1(a - b + 1.0, 2.0 - b, z);
  return first + second;
}

namespace {

struct MarcumSplit {
  double q;
  double p;
};

// Poisson(g) mixture of chi-square tails: Q_u = sum_n w_n Q(n+u, x), with
// g = a^2/2 and x = b^2/2. Sums whichever of Q or 1-Q is the smaller side.
MarcumSplit marcum_split(int u, double a, double b, const Accuracy& acc) {
  detail::require(u >= 1, "marcum_q: order u must be a positive integer");
  detail::require(a >= 0.0 && std::isfinite(a), "marcum_q: a must be non-negative");
  detail::require(b >= 0.0 && !std::isnan(b), "marcum_q: b must be non-negative");
  if (b == 0.0) return {1.0, 0.0};
  if (std::isinf(b)) return {0.0, 1.0};
  const double x = 0.5 * b * b;
  const double g = 0.5 * a * a;
  if (g == 0.0) return {reg_gamma_q(u, x), reg_gamma_p(u, x)};

  const bool sum_q = x > g + u;
  auto side = [&](double order) { return sum_q ? reg_gamma_q(order, x) : reg_gamma_p(order, x); };
  // d_k = e^{-x} x^k / k!, the increment between consecutive integer orders.
  auto increment = [&](double k) { return std::exp(k * std::log(x) - x - ln_gamma(k + 1.0)); };

  const double n0 = std::floor(g);
  const double log_w0 = -g + n0 * std::log(g) - ln_gamma(n0 + 1.0);
  double sum = 0.0;

  // Upward from the Poisson mode.
  {
    double n = n0;
    double w = std::exp(log_w0);
    double f = side(n + u);
    double d = sum_q ? increment(n + u) : 0.0;
    for (int iter = 0; iter < kMaxSeriesTerms; ++iter) {
      sum += w * f;
      double tail = std::numeric_limits<double>::infinity();
      if (n + 2.0 > g) tail = w * (g / (n + 1.0)) / (1.0 - g / (n + 2.0));
      if (!sum_q) tail *= f;
      if (tail <= acc.rel_tol * sum || tail <= acc.abs_tol) break;
      w *= g / (n + 1.0);
      if (sum_q) {
        f += d;  // Q(k+1, x) = Q(k, x) + d_k
        d *= x / (n + u + 1.0);
      } else {
        f = side(n + 1.0 + u);
      }
      n += 1.0;
      if (iter + 1 == kMaxSeriesTerms) throw ConvergenceError("marcum_q: upward sum did not converge");
    }
  }
  // Downward from the mode.
  if (n0 >= 1.0) {
    double n = n0;
    double w = std::exp(log_w0);
    double f = side(n + u);
    while (n >= 1.0) {
      w *= n / g;
      if (sum_q) {
        f = side(n - 1.0 + u);
      } else {
        f += increment(n - 1.0 + u);  // P(k-1, x) = P(k, x) + d_{k-1}
      }
      n -= 1.0;
      sum += w * f;
      double tail = std::numeric_limits<double>::infinity();
      if (n - 1.0 < g) tail = w * (n / g) / (1.0 - (n - 1.0) / g);
      if (sum_q) tail *= f;
      if (n < 1.0 || tail <= acc.rel_tol * sum || tail <= acc.abs_tol) break;
    }
  }
  sum = std::min(sum, 1.0);
  return sum_q ? MarcumSplit{sum, 1.0 - sum} : MarcumSplit{1.0 - sum, sum};
}

}  // namespace

double marcum_q(int u, double a, double b, const Accuracy& acc) { return marcum_split(u, a, b, acc).q; }

double marcum_q_complement(int u, double a, double b, const Accuracy& acc) {
  return marcum_split(u, a, b, acc).p;
}

}  // namespace specsense

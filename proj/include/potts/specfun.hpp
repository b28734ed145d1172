#pragma once

// Zamolodchikov's Upsilon function for real arguments, plus the gamma ratio
// used by its shift relations.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "potts/error.hpp"
#include "potts/quadrature.hpp"

namespace potts {

/// Truncation and tolerance policy for the Upsilon integral.
struct QuadratureSpec {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  double t_max = 1e4;  // hard cap on the upper integration limit
  int max_subdivisions = 2000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(t_max > 0.0) || max_subdivisions < 1) {
      throw DomainError("QuadratureSpec: tolerances, t_max and max_subdivisions must be positive");
    }
  }
};

/// Coupling beta > 0 and the derived background charge Q = beta + 1/beta.
class UpsilonParams {
 public:
  explicit UpsilonParams(double beta) : beta_(beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("UpsilonParams: beta must be positive");
    q_ = beta + 1.0 / beta;
  }
  double beta() const { return beta_; }
  double Q() const { return q_; }
  /// Same function, dual coupling 1/beta.
  UpsilonParams dual() const { return UpsilonParams(1.0 / beta_); }

 private:
  double beta_;
  double q_;
};

/// A real number held as sign * exp(log_abs); sign == 0 encodes an exact zero.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;

  static SignedLog zero() { return {-std::numeric_limits<double>::infinity(), 0}; }
  static SignedLog from_value(double v) {
    if (v == 0.0) return zero();
    return {std::log(std::abs(v)), v > 0 ? 1 : -1};
  }
  bool is_zero() const { return sign == 0; }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  friend SignedLog operator*(SignedLog a, SignedLog b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return {a.log_abs + b.log_abs, a.sign * b.sign};
  }
  friend SignedLog operator/(SignedLog a, SignedLog b) {
    if (b.is_zero()) throw DomainError("SignedLog: division by zero");
    if (a.is_zero()) return zero();
    return {a.log_abs - b.log_abs, a.sign * b.sign};
  }
};

namespace detail {

inline bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

// Integrand of ln Upsilon with a = Q/2 - z, written in decaying exponentials
// so that it neither overflows for large t nor divides by sinh(0).
inline double upsilon_integrand(double t, double a, double beta) {
  const double abs_a = std::abs(a);
  const double half_q = 0.5 * (beta + 1.0 / beta);
  double ratio = 0.0;
  if (abs_a > 0.0) {
    const double num = -std::expm1(-abs_a * t);
    const double den = (-std::expm1(-beta * t)) * (-std::expm1(-t / beta));
    ratio = std::exp((abs_a - half_q) * t) * num * num / den;
  }
  return (a * a * std::exp(-t) - ratio) / t;
}

// True if z is, up to a few ulps, one of -m beta - n/beta or
// Q + m beta + n/beta with m, n >= 0.
inline bool on_zero_lattice(double z, double beta) {
  const double q = beta + 1.0 / beta;
  const double d = z >= q ? z - q : (z <= 0.0 ? -z : -1.0);
  if (d < 0.0) return false;
  const double tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z));
  const double inv = 1.0 / beta;
  for (int m = 0; m * beta <= d + tol; ++m) {
    const double rest = (d - m * beta) * beta;  // candidate n
    const double n = std::round(rest);
    if (n >= 0.0 && std::abs(d - m * beta - n * inv) <= tol) return true;
  }
  return false;
}

// Below this t the integrand is replaced by its Taylor expansion
// a^2 (-1 + c t), c = 1/2 - a^2/12 + (beta^2 + beta^-2)/24.
inline constexpr double kSeriesCutoff = 1e-4;

// e^{-41.45} < 1e-18.
inline constexpr double kEnvelopeLog = 41.45;

}  // namespace detail

/// gamma(x) = Gamma(x) / Gamma(1 - x), evaluated through the reflection form
/// Gamma(x)^2 sin(pi x) / pi. With that form gamma vanishes at the positive
/// integers (gamma(1) = 0); the nonpositive integers are poles.
inline SignedLog gamma_ratio_log(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma_ratio: non-finite argument");
  if (detail::is_integer(x)) {
    if (x >= 1.0) return SignedLog::zero();
    throw DomainError("gamma_ratio: pole at nonpositive integer x = " + std::to_string(x));
  }
  const double s = boost::math::sin_pi(x);
  const double lg = boost::math::lgamma(x);
  return {2.0 * lg + std::log(std::abs(s)) - std::log(std::numbers::pi), s > 0 ? 1 : -1};
}

inline double gamma_ratio(double x) { return gamma_ratio_log(x).value(); }

/// ln Upsilon_beta(z) for z in the open strip (0, Q), by adaptive quadrature
/// of the defining integral with denominator sinh(beta t/2) sinh(t/(2 beta)).
inline double ln_upsilon_strip(double z, const UpsilonParams& p, const QuadratureSpec& quad = {}) {
  quad.validate();
  const double beta = p.beta();
  const double q = p.Q();
  if (!(z > 0.0 && z < q)) {
    throw DomainError("ln_upsilon_strip: z = " + std::to_string(z) + " outside (0, " + std::to_string(q) + ")");
  }
  const double a = 0.5 * q - z;
  if (a == 0.0) return 0.0;

  const double h = detail::kSeriesCutoff;
  const double c = 0.5 - a * a / 12.0 + (beta * beta + 1.0 / (beta * beta)) / 24.0;
  const double head = a * a * (-h + 0.5 * c * h * h);

  const double decay = 0.5 * q - std::abs(a);
  double cut = std::max(2.0, detail::kEnvelopeLog / decay);
  cut = std::min(cut, quad.t_max);
  auto f = [a, beta](double t) { return detail::upsilon_integrand(t, a, beta); };
  if (std::abs(f(cut)) >= quad.abs_tol) {
    throw ConvergenceError("ln_upsilon_strip: integrand still " + std::to_string(std::abs(f(cut))) +
                           " at cutoff t = " + std::to_string(cut));
  }

  std::array<double, 4> breaks{h, 1.0, std::min(8.0, 0.5 * (1.0 + cut)), cut};
  const auto r = adaptive_gauss_kronrod(f, breaks, quad.abs_tol, quad.rel_tol, quad.max_subdivisions);
  return head + r.value;
}

/// Upsilon_beta(z) for any real z, in log-magnitude-plus-sign form. Outside the
/// strip the argument is moved back by the shift
///   Upsilon(z + beta) = gamma(beta z) beta^{1 - 2 beta z} Upsilon(z).
/// Points of the zero lattice {-m beta - n/beta, Q + m beta + n/beta} give an
/// exact zero.
inline SignedLog log_upsilon(double z, const UpsilonParams& p, const QuadratureSpec& quad = {}) {
  if (!std::isfinite(z)) throw DomainError("upsilon: non-finite argument");
  const double beta = p.beta();
  const double q = p.Q();
  const double log_beta = std::log(beta);
  auto shift_factor = [&](double w) {
    return gamma_ratio_log(beta * w) * SignedLog{(1.0 - 2.0 * beta * w) * log_beta, 1};
  };

  // Near the strip edges the integrand decays like e^{-z t}. The upper edge is
  // reflected onto the lower one (Q - z is exact there), and one shift by the
  // larger of beta, 1/beta moves the argument to a well-conditioned point.
  const double big = std::max(beta, 1.0 / beta);
  const double margin = 0.25 / big;
  if (z >= margin && z <= q - margin) return {ln_upsilon_strip(z, p, quad), 1};
  if (z > 0.0 && z < q) {
    const double low = z < margin ? z : q - z;
    const SignedLog up{ln_upsilon_strip(low + big, p, quad), 1};
    return up / (gamma_ratio_log(big * low) * SignedLog{(1.0 - 2.0 * big * low) * std::log(big), 1});
  }
  if (detail::on_zero_lattice(z, beta)) return SignedLog::zero();

  SignedLog factor{0.0, 1};
  double w = z;
  if (z >= q) {
    while (w >= q) {
      w -= beta;
      factor = factor * shift_factor(w);
      if (factor.is_zero()) return factor;
    }
  } else {
    while (w <= 0.0) {
      const double x = beta * w;
      if (detail::is_integer(x)) return SignedLog::zero();  // pole of gamma in the divisor
      factor = factor / shift_factor(w);
      w += beta;
    }
  }
  return factor * log_upsilon(w, p, quad);
}

inline double upsilon(double z, const UpsilonParams& p, const QuadratureSpec& quad = {}) {
  return log_upsilon(z, p, quad).value();
}

}  // namespace potts

#pragma once

// Moment laws for conformal radii of fuzzy Potts interfaces and of the
// boundary loop ensembles they are built from.
//
// Every law is a ratio of sin(c theta) / cos(c theta) terms with
//   theta = (pi/kappa) sqrt((4 - kappa)^2 - 8 kappa lambda).
// For lambda > (4 - kappa)^2 / (8 kappa) theta is imaginary; the ratios stay
// real, and ThetaParams evaluates them through sin(c theta)/theta and
// cos(c theta), which continue to sinh(c s)/s and cosh(c s) with theta = i s.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "potts/constants.hpp"
#include "potts/error.hpp"

namespace potts {

/// E[CR^lambda] for a (0,1]-valued conformal radius: either finite or +infinity.
struct MomentValue {
  bool finite = false;
  double value = 0.0;  // meaningful only when finite

  static MomentValue infinite() { return {false, 0.0}; }
  static MomentValue of(double v) { return {true, v}; }
};

enum class LoopEvent { true_loop, false_loop };

class ThetaParams {
 public:
  ThetaParams(double kappa, double lambda)
      : kappa_(kappa), lambda_(lambda), scale_(std::numbers::pi / kappa) {
    radicand_ = (4.0 - kappa) * (4.0 - kappa) - 8.0 * kappa * lambda;
  }

  double kappa() const { return kappa_; }
  double lambda() const { return lambda_; }
  /// theta^2; negative past the radicand zero.
  double theta_squared() const { return scale_ * scale_ * radicand_; }
  bool theta_real() const { return radicand_ >= 0.0; }
  /// theta itself when real.
  double theta() const {
    if (!theta_real()) throw DomainError("ThetaParams: theta is imaginary for lambda = " + std::to_string(lambda_));
    return scale_ * std::sqrt(radicand_);
  }

  /// sin(c theta) / theta, continued to sinh(c s)/s for theta = i s.
  double sin_over_theta(double c) const {
    if (radicand_ == 0.0) return c;
    if (radicand_ > 0.0) {
      const double t = scale_ * std::sqrt(radicand_);
      return std::sin(c * t) / t;
    }
    const double s = scale_ * std::sqrt(-radicand_);
    return std::sinh(c * s) / s;
  }

  /// cos(c theta), continued to cosh(c s).
  double cos_of(double c) const {
    if (radicand_ >= 0.0) return std::cos(c * scale_ * std::sqrt(radicand_));
    return std::cosh(c * scale_ * std::sqrt(-radicand_));
  }

  /// sin(a theta) / sin(b theta).
  double sin_ratio(double a, double b) const { return sin_over_theta(a) / sin_over_theta(b); }

 private:
  double kappa_;
  double lambda_;
  double scale_;
  double radicand_;
};

namespace detail {

inline void require_potts_kappa(double kappa, const char* who) {
  if (!(kappa > kKappaMin && kappa < kKappaMax)) {
    throw DomainError(std::string(who) + ": kappa = " + std::to_string(kappa) + " outside (8/3, 4)");
  }
}

inline void require_bcle_params(double kappa, double rho, const char* who) {
  if (!(kappa > 2.0 && kappa < 4.0)) {
    throw DomainError(std::string(who) + ": kappa = " + std::to_string(kappa) + " outside (2, 4)");
  }
  if (!(rho > -2.0 && rho < kappa - 4.0)) {
    throw DomainError(std::string(who) + ": rho = " + std::to_string(rho) + " outside (-2, kappa - 4)");
  }
}

inline double sinpi(double x) { return std::sin(std::numbers::pi * x); }
inline double cospi(double x) { return std::cos(std::numbers::pi * x); }

// Bisection for a sign change of fn on [lo, hi], then up to `polish` Newton
// steps that are kept only if they stay inside the final bracket and shrink
// the residual.
inline double bisect_root(const std::function<double(double)>& fn, double lo, double hi, int iterations,
                          const std::function<double(double)>& derivative = {}, int polish = 0) {
  double flo = fn(lo);
  const double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw InternalError("bisect_root: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  if (derivative) {
    for (int i = 0; i < polish; ++i) {
      const double fx = fn(x);
      const double dfx = derivative(x);
      if (fx == 0.0 || dfx == 0.0) break;
      const double next = x - fx / dfx;
      const double width = hi - lo;
      if (!(next >= lo - width && next <= hi + width) || !(std::abs(fn(next)) < std::abs(fx))) break;
      x = next;
    }
  }
  return x;
}

}  // namespace detail

// ---------------------------------------------------------------- thresholds

/// Moments of R_{R->B} are infinite at or below 2/kappa + 3 kappa/32 - 1.
inline double r_to_b_threshold(double kappa) { return 2.0 / kappa + 3.0 * kappa / 32.0 - 1.0; }
/// Non-nested CLE_{16/kappa}: kappa/8 + 3/(2 kappa) - 1.
inline double cle_nonsimple_threshold(double kappa) { return kappa / 8.0 + 3.0 / (2.0 * kappa) - 1.0; }
inline double bcle_simple_threshold(double kappa) { return kappa / 8.0 - 1.0; }
/// kappa'/8 - 1 with kappa' = 16/kappa.
inline double bcle_nonsimple_threshold(double kappa) { return 2.0 / kappa - 1.0; }

/// rho for the blue-boundary exploration at r = 1/q.
inline double potts_rho(double kappa) { return 1.5 * kappa - 6.0; }

// ------------------------------------------------------------- moment laws

/// E[R_{R->B}^lambda] = cos(pi (4-kappa)/kappa) / cos(theta).
inline MomentValue moment_r_to_b(double kappa, double lambda) {
  detail::require_potts_kappa(kappa, "moment_r_to_b");
  if (lambda <= r_to_b_threshold(kappa)) return MomentValue::infinite();
  const ThetaParams th(kappa, lambda);
  return MomentValue::of(detail::cospi((4.0 - kappa) / kappa) / th.cos_of(1.0));
}

/// E[CR^lambda] for the loop of a non-nested CLE_{16/kappa} around the origin.
inline MomentValue cle_nonsimple_moment(double kappa, double lambda) {
  detail::require_potts_kappa(kappa, "cle_nonsimple_moment");
  if (lambda <= cle_nonsimple_threshold(kappa)) return MomentValue::infinite();
  const ThetaParams th(kappa, lambda);
  return MomentValue::of(detail::cospi((4.0 - kappa) / 4.0) / th.cos_of(kappa / 4.0));
}

/// E[CR^lambda 1{event}] for the loop of BCLE_kappa(rho) surrounding the origin.
inline MomentValue bcle_simple_moment(double kappa, double rho, double lambda, LoopEvent event) {
  detail::require_bcle_params(kappa, rho, "bcle_simple_moment");
  if (lambda <= bcle_simple_threshold(kappa)) return MomentValue::infinite();
  using detail::sinpi;
  const ThetaParams th(kappa, lambda);
  const double common = sinpi((4.0 - kappa) / 4.0) / (sinpi((4.0 - kappa) / kappa) * sinpi((kappa - 2.0 * rho - 4.0) / 4.0));
  if (event == LoopEvent::true_loop) {
    return MomentValue::of(common * sinpi(2.0 * (kappa - rho - 4.0) / kappa) *
                           th.sin_ratio((kappa - 2.0 * rho - 4.0) / 4.0, kappa / 4.0));
  }
  return MomentValue::of(common * sinpi(2.0 * (rho + 2.0) / kappa) *
                         th.sin_ratio((2.0 * rho + 8.0 - kappa) / 4.0, kappa / 4.0));
}

/// E[CR^lambda 1{event}] for the loop of BCLE_{kappa'}(rho'_B) surrounding the
/// origin, kappa' = 16/kappa, rho'_B = kappa' - 4 + (kappa'/4) rho. theta is
/// still built from kappa.
inline MomentValue bcle_nonsimple_moment(double kappa, double rho, double lambda, LoopEvent event) {
  detail::require_bcle_params(kappa, rho, "bcle_nonsimple_moment");
  if (lambda <= bcle_nonsimple_threshold(kappa)) return MomentValue::infinite();
  using detail::sinpi;
  const ThetaParams th(kappa, lambda);
  const double common = sinpi((4.0 - kappa) / kappa) / (sinpi((4.0 - kappa) / 4.0) * sinpi(2.0 * (rho + 2.0) / kappa));
  if (event == LoopEvent::true_loop) {
    return MomentValue::of(common * sinpi(-rho / 2.0) * th.sin_ratio((kappa - 2.0 * rho - 4.0) / 4.0, 1.0));
  }
  return MomentValue::of(common * sinpi((kappa - 2.0 * rho - 4.0) / 4.0) * th.sin_ratio((2.0 * rho + 4.0) / 4.0, 1.0));
}

/// Ingredients of the renewal equation E = f + g E for the blue-boundary
/// interface: d1 = E[CR(0, D_1')^lambda] after the kappa' step, f and g the
/// terminating and continuing parts of the kappa step.
struct FixedPointTerms {
  double d1;
  double f;
  double g;
};

inline std::optional<FixedPointTerms> fixed_point_terms(double kappa, double rho, double lambda) {
  detail::require_potts_kappa(kappa, "fixed_point_terms");
  detail::require_bcle_params(kappa, rho, "fixed_point_terms");
  const auto nt = bcle_nonsimple_moment(kappa, rho, lambda, LoopEvent::true_loop);
  const auto nf = bcle_nonsimple_moment(kappa, rho, lambda, LoopEvent::false_loop);
  const auto cle = cle_nonsimple_moment(kappa, lambda);
  const auto st = bcle_simple_moment(kappa, rho, lambda, LoopEvent::true_loop);
  const auto sf = bcle_simple_moment(kappa, rho, lambda, LoopEvent::false_loop);
  if (!(nt.finite && nf.finite && cle.finite && st.finite && sf.finite)) return std::nullopt;
  const double d1 = nt.value * cle.value + nf.value;
  return FixedPointTerms{d1, st.value * d1, sf.value * d1};
}

/// E[CR(0, D(L_{B->R}))^lambda] = f / (1 - g) assembled from the loop-ensemble
/// laws; infinite when an ingredient is infinite or g >= 1.
inline MomentValue fixed_point_moment(double kappa, double rho, double lambda) {
  const auto t = fixed_point_terms(kappa, rho, lambda);
  if (!t || !(t->g < 1.0)) return MomentValue::infinite();
  return MomentValue::of(t->f / (1.0 - t->g));
}

namespace detail {

// Numerator and denominator of the closed form for general rho.
inline double general_rho_numerator(const ThetaParams& th, double kappa, double rho) {
  return sinpi((kappa - 2.0 * rho - 4.0) / 4.0) * th.sin_over_theta((kappa + 2.0 * rho + 4.0) / 4.0) -
         sinpi((kappa + 2.0 * rho - 4.0) / 4.0) * th.sin_over_theta((kappa - 2.0 * rho - 4.0) / 4.0);
}
inline double general_rho_denominator(const ThetaParams& th, double kappa, double rho) {
  return sinpi((kappa - 2.0 * rho - 4.0) / 4.0) * th.sin_over_theta((kappa + 2.0 * rho + 8.0) / 4.0) -
         sinpi((kappa + 2.0 * rho - 4.0) / 4.0) * th.sin_over_theta((kappa - 2.0 * rho - 8.0) / 4.0);
}

}  // namespace detail

/// sup{lambda : g_rho(lambda) = 1}: the largest zero of the closed form's
/// denominator below lambda = 0, above the CLE_{16/kappa} threshold where g
/// blows up. Located by a downward scan for the first sign change, then
/// bisection.
inline double general_rho_threshold(double kappa, double rho) {
  detail::require_potts_kappa(kappa, "general_rho_threshold");
  detail::require_bcle_params(kappa, rho, "general_rho_threshold");
  auto den = [&](double lam) { return detail::general_rho_denominator(ThetaParams(kappa, lam), kappa, rho); };
  const double floor = cle_nonsimple_threshold(kappa);
  constexpr int kScan = 512;
  const double d0 = den(0.0);
  double prev = 0.0;
  for (int i = 1; i <= kScan; ++i) {
    const double lam = floor * static_cast<double>(i) / kScan;
    const double d = den(lam);
    if ((d > 0.0) != (d0 > 0.0) || d == 0.0) return detail::bisect_root(den, lam, prev, 80);
    prev = lam;
  }
  throw InternalError("general_rho_threshold: no sign change of g - 1 above the CLE threshold for kappa = " +
                      std::to_string(kappa) + ", rho = " + std::to_string(rho));
}

/// Closed-form E[CR(0, D(L_{B->R}))^lambda] for a general rho.
inline MomentValue general_rho_moment(double kappa, double rho, double lambda) {
  detail::require_potts_kappa(kappa, "general_rho_moment");
  detail::require_bcle_params(kappa, rho, "general_rho_moment");
  if (lambda <= general_rho_threshold(kappa, rho)) return MomentValue::infinite();
  using detail::sinpi;
  const ThetaParams th(kappa, lambda);
  const double pre = sinpi(2.0 * (kappa - rho - 4.0) / kappa) / sinpi(2.0 * (rho + 2.0) / kappa);
  return MomentValue::of(pre * detail::general_rho_numerator(th, kappa, rho) /
                         detail::general_rho_denominator(th, kappa, rho));
}

namespace detail {

// U and V of the r = 1/q law, as functions of theta.
inline double potts_u(const ThetaParams& th, double kappa) {
  return th.sin_over_theta(kappa - 2.0) + 2.0 * cospi((4.0 - kappa) / 2.0) * th.sin_over_theta(2.0 - kappa / 2.0);
}
inline double potts_v(const ThetaParams& th, double kappa) {
  return th.sin_over_theta(kappa - 1.0) + 2.0 * cospi((4.0 - kappa) / 2.0) * th.sin_over_theta(1.0 - kappa / 2.0);
}

}  // namespace detail

/// Residual of the defining equation of lambda0:
///   sin((kappa-1) theta) / sin((1 - kappa/2) theta) + 2 cos(pi (4-kappa)/2).
inline double lambda0_residual(double kappa, double lambda) {
  const ThetaParams th(kappa, lambda);
  return th.sin_ratio(kappa - 1.0, 1.0 - kappa / 2.0) + 2.0 * detail::cospi((4.0 - kappa) / 2.0);
}

/// The negative finiteness threshold of E[R_{B->R}^lambda]: -lambda0 is the
/// unique root in (0, 1 - kappa/8 - 3/(2 kappa)) of the defining equation.
inline double lambda0(double kappa) {
  detail::require_potts_kappa(kappa, "lambda0");
  const double upper = 1.0 - kappa / 8.0 - 3.0 / (2.0 * kappa);
  auto v_of_x = [kappa](double x) { return detail::potts_v(ThetaParams(kappa, -x), kappa); };
  // dV/dx = -dV/dlambda, dtheta/dlambda = -4 pi / sqrt(radicand).
  auto dv_of_x = [kappa](double x) {
    const ThetaParams th(kappa, -x);
    const double t = th.theta();
    const double h = -4.0 * std::numbers::pi / (t * kappa / std::numbers::pi);
    const double c = 2.0 * detail::cospi((4.0 - kappa) / 2.0);
    return -h * ((kappa - 1.0) * std::cos((kappa - 1.0) * t) + c * (1.0 - kappa / 2.0) * std::cos((1.0 - kappa / 2.0) * t));
  };
  const double x = detail::bisect_root(v_of_x, 0.0, upper, 60, dv_of_x, 3);
  return -x;
}

/// E[R_{B->R}^lambda] for r = 1/q; infinite at or below lambda0(kappa).
inline MomentValue moment_b_to_r(double kappa, double lambda) {
  detail::require_potts_kappa(kappa, "moment_b_to_r");
  if (lambda <= lambda0(kappa)) return MomentValue::infinite();
  const ThetaParams th(kappa, lambda);
  const double pre = 1.0 / (2.0 * detail::cospi((4.0 - kappa) / kappa));
  return MomentValue::of(pre * detail::potts_u(th, kappa) / detail::potts_v(th, kappa));
}

// ---------------------------------------------------------- log-moments

/// d theta / d lambda at lambda = 0.
inline double theta_slope_at_zero(double kappa) { return -4.0 * std::numbers::pi / (4.0 - kappa); }

/// E[log R_{R->B}] = h(0) tan(4 pi / kappa).
inline double log_moment_r_to_b(double kappa) {
  detail::require_potts_kappa(kappa, "log_moment_r_to_b");
  return theta_slope_at_zero(kappa) * std::tan(4.0 * std::numbers::pi / kappa);
}

/// E[log R_{B->R}] = h(0) (2 sin^2 y - kappa sin^2 x) / (-2 cos(y) sin(y)),
/// x = kappa pi / 2, y = 4 pi / kappa.
inline double log_moment_b_to_r(double kappa) {
  detail::require_potts_kappa(kappa, "log_moment_b_to_r");
  const double x = kappa * std::numbers::pi / 2.0;
  const double y = 4.0 * std::numbers::pi / kappa;
  const double sx = std::sin(x);
  const double sy = std::sin(y);
  return theta_slope_at_zero(kappa) * (2.0 * sy * sy - kappa * sx * sx) / (-2.0 * std::cos(y) * sy);
}

enum class CKappaMethod { from_logs, closed_form };

/// The loop-measure ratio sqrt((E log R_{R->B} + E log R_{B->R}) / E log R_{R->B}).
inline double c_kappa(double kappa, CKappaMethod method) {
  detail::require_potts_kappa(kappa, "c_kappa");
  if (method == CKappaMethod::closed_form) return c_of_kappa(kappa);
  const double rb = log_moment_r_to_b(kappa);
  const double br = log_moment_b_to_r(kappa);
  return std::sqrt((rb + br) / rb);
}

}  // namespace potts

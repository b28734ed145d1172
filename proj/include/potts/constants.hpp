#pragma once

// Closed-form constants of the critical q-state Potts model: the q <-> kappa
// map, C(q), the imaginary DOZZ structure constant and R(q).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "potts/error.hpp"
#include "potts/specfun.hpp"

namespace potts {

inline constexpr double kKappaMin = 8.0 / 3.0;
inline constexpr double kKappaMax = 4.0;

/// kappa = 4 arccos(-sqrt(q)/2) / pi, mapping q in [1,4] onto [8/3, 4].
inline double kappa_from_q(double q) {
  if (!(q >= 1.0 && q <= 4.0)) throw DomainError("kappa_from_q: q = " + std::to_string(q) + " outside [1,4]");
  return 4.0 * std::acos(-std::sqrt(q) / 2.0) / std::numbers::pi;
}

/// q = 4 cos^2(pi kappa / 4).
inline double q_from_kappa(double kappa) {
  if (!(kappa >= kKappaMin && kappa <= kKappaMax)) {
    throw DomainError("q_from_kappa: kappa = " + std::to_string(kappa) + " outside [8/3,4]");
  }
  const double c = std::cos(std::numbers::pi * kappa / 4.0);
  return 4.0 * c * c;
}

/// C as a function of kappa: sqrt(kappa/2) sin(kappa pi/2) / sin(4 pi/kappa).
/// The ratio is 0/0 at kappa = 4; within 1e-6 of it the first-order limit 2
/// of the sine ratio is used.
inline double c_of_kappa(double kappa) {
  if (!(kappa >= kKappaMin && kappa <= kKappaMax)) {
    throw DomainError("c_of_kappa: kappa = " + std::to_string(kappa) + " outside [8/3,4]");
  }
  constexpr double pi = std::numbers::pi;
  if (std::abs(kappa - 4.0) < 1e-6) return std::sqrt(kappa / 2.0) * 2.0;
  return std::sqrt(kappa / 2.0) * std::sin(kappa * pi / 2.0) / std::sin(4.0 * pi / kappa);
}

inline double c_of_q(double q) { return c_of_kappa(kappa_from_q(q)); }

/// Bundles the cluster weight with its continuum parameters.
struct ModelParams {
  double q;
  double kappa;
  double beta;  // 2 / sqrt(kappa)
  double r;     // red probability 1/q

  static ModelParams from_q(double q) {
    const double kappa = kappa_from_q(q);
    return {q, kappa, 2.0 / std::sqrt(kappa), 1.0 / q};
  }
  static ModelParams from_kappa(double kappa) {
    const double q = q_from_kappa(kappa);
    return {q, kappa, 2.0 / std::sqrt(kappa), 1.0 / q};
  }
};

/// The common charge 1/(4 beta) - beta/2 of the three-point constant.
inline double alpha0(double beta) {
  if (!(beta > 0.0)) throw DomainError("alpha0: beta must be positive");
  return 1.0 / (4.0 * beta) - beta / 2.0;
}

struct DozzArgs {
  double alpha1;
  double alpha2;
  double alpha3;
};

/// Evaluates the normalized imaginary DOZZ structure constant at a fixed beta.
/// The normalization A = Upsilon(2 beta - 1/beta)^{1/2} / Upsilon(beta)^{3/2}
/// is computed once at construction.
class DozzEvaluator {
 public:
  explicit DozzEvaluator(double beta, QuadratureSpec quad = {}) : params_(beta), quad_(quad) {
    const SignedLog u_shift = log_upsilon(2.0 * beta - 1.0 / beta, params_, quad_);
    const SignedLog u_beta = log_upsilon(beta, params_, quad_);
    if (u_shift.sign <= 0 || u_beta.sign <= 0) {
      throw DomainError("DozzEvaluator: normalization needs Upsilon(beta) > 0 and Upsilon(2 beta - 1/beta) > 0");
    }
    log_a_ = 0.5 * u_shift.log_abs - 1.5 * u_beta.log_abs;
  }

  double beta() const { return params_.beta(); }
  double normalization() const { return std::exp(log_a_); }

  /// The three square roots are taken jointly. Factors with equal arguments
  /// (from equal charges) leave the root as the signed factor itself, which is
  /// the analytic continuation through their zeros; the remaining product must
  /// be positive.
  double operator()(const DozzArgs& args) const {
    const double b = params_.beta();
    const double alphas[3] = {args.alpha1, args.alpha2, args.alpha3};
    const double sum = alphas[0] + alphas[1] + alphas[2];

    SignedLog num = log_upsilon(2.0 * b - 1.0 / b + sum, params_, quad_);
    std::array<double, 6> den_args{};
    for (int i = 0; i < 3; ++i) {
      num = num * log_upsilon(sum - 2.0 * alphas[i] + b, params_, quad_);
      den_args[2 * i] = 2.0 * alphas[i] + b;
      den_args[2 * i + 1] = 2.0 * alphas[i] + 2.0 * b - 1.0 / b;
    }
    std::sort(den_args.begin(), den_args.end());

    SignedLog root{0.0, 1};     // factors whose square root is taken as the factor
    SignedLog radicand{0.0, 1};  // the rest
    for (std::size_t i = 0; i < den_args.size();) {
      const SignedLog u = log_upsilon(den_args[i], params_, quad_);
      if (i + 1 < den_args.size() && std::abs(den_args[i + 1] - den_args[i]) <= 1e-14 * (1.0 + std::abs(den_args[i]))) {
        root = root * u;
        i += 2;
      } else {
        radicand = radicand * u;
        i += 1;
      }
    }
    if (root.is_zero() || radicand.is_zero()) throw DomainError("im_dozz: vanishing denominator");
    if (radicand.sign < 0) throw DomainError("im_dozz: negative value under the square root");
    if (num.is_zero()) return 0.0;
    return num.sign * root.sign * std::exp(log_a_ + num.log_abs - root.log_abs - 0.5 * radicand.log_abs);
  }

 private:
  UpsilonParams params_;
  QuadratureSpec quad_;
  double log_a_ = 0.0;
};

inline double dozz_normalization(double beta, const QuadratureSpec& quad = {}) {
  return DozzEvaluator(beta, quad).normalization();
}

inline double im_dozz(const DozzArgs& args, double beta, const QuadratureSpec& quad = {}) {
  return DozzEvaluator(beta, quad)(args);
}

/// ImDOZZ at the equal charges alpha0(beta), beta = 2/sqrt(kappa(q)).
inline double im_dozz_at_q(double q, const QuadratureSpec& quad = {}) {
  const auto m = ModelParams::from_q(q);
  const double a = alpha0(m.beta);
  return im_dozz({a, a, a}, m.beta, quad);
}

/// Three-point connectivity constant R(q) = C(q) * ImDOZZ(alpha0, alpha0, alpha0).
inline double r_constant(double q, const QuadratureSpec& quad = {}) {
  return c_of_q(q) * im_dozz_at_q(q, quad);
}

}  // namespace potts

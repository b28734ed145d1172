#pragma once

// Deterministic identity suite behind `potts3pt verify`. Every check records
// the measured residual next to the tolerance it is held to.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "potts/constants.hpp"
#include "potts/mc/rng.hpp"
#include "potts/radii.hpp"
#include "potts/reference_tables.hpp"
#include "potts/specfun.hpp"

namespace potts::verify {

struct Check {
  std::string suite;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::vector<Check> checks;

  void add(std::string suite, std::string name, double residual, double tolerance) {
    const bool ok = std::isfinite(residual) && residual <= tolerance;
    checks.push_back({std::move(suite), std::move(name), residual, tolerance, ok});
  }
  /// Records a failure for an exception thrown while computing a check.
  void add_error(std::string suite, std::string name, const std::exception& e) {
    checks.push_back({std::move(suite), std::move(name) + " [" + e.what() + "]",
                      std::numeric_limits<double>::infinity(), 0.0, false});
  }
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  std::vector<Check> failures() const {
    std::vector<Check> out;
    std::copy_if(checks.begin(), checks.end(), std::back_inserter(out), [](const Check& c) { return !c.pass; });
    return out;
  }
};

namespace detail {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Runs `body`, turning an exception into a failed check named `name`.
inline void guarded(Report& rep, const std::string& suite, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    rep.add_error(suite, name, e);
  }
}

// n midpoints of (lo, hi).
inline std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * (i + 0.5) / n;
  return g;
}

inline constexpr std::uint64_t kSeed = 20240611;

}  // namespace detail

// ------------------------------------------------------------------ tables

/// Printed Table 1 cells at 5e-7 absolute.
inline void table1_printed(Report& rep) {
  constexpr double tol = 5e-7;
  for (const auto& row : reference::kTable1) {
    const std::string q = detail::fmt("q=%.2f", row.q);
    detail::guarded(rep, "table1-printed", q, [&] {
      rep.add("table1-printed", "kappa " + q, std::abs(kappa_from_q(row.q) - row.kappa), tol);
      rep.add("table1-printed", "C " + q, std::abs(c_of_q(row.q) - row.c), tol);
      rep.add("table1-printed", "ImDOZZ " + q, std::abs(im_dozz_at_q(row.q) - row.im_dozz), tol);
    });
  }
}

/// Exact Table 2 row at 1e-4, and inside R_num +- 3 sigma.
inline void table2_printed(Report& rep) {
  for (const auto& row : reference::kTable2) {
    const std::string q = detail::fmt("q=%.2f", row.q);
    detail::guarded(rep, "table2", q, [&] {
      const double exact = c_of_q(row.q) / std::sqrt(row.q) * im_dozz_at_q(row.q);
      rep.add("table2", "exact row " + q, std::abs(exact - row.exact), 1e-4);
      rep.add("table2", "within 3 sigma " + q, std::abs(exact - row.r_num),
              row.r_num_sigma > 0.0 ? 3.0 * row.r_num_sigma : 1e-12);
    });
  }
}

// -------------------------------------------------------------- constants

inline void constants_suite(Report& rep) {
  const std::string s = "constants";
  detail::guarded(rep, s, "C(3) closed form", [&] {
    const double closed = std::sqrt((5.0 + std::sqrt(5.0)) / 2.0);
    rep.add(s, "C(3) = sqrt((5+sqrt5)/2) relative", detail::rel_diff(c_of_q(3.0), closed), 1e-10);
  });
  detail::guarded(rep, s, "round trip", [&] {
    double worst = 0.0;
    for (double q : detail::grid(1.0, 4.0, 100)) worst = std::max(worst, std::abs(q_from_kappa(kappa_from_q(q)) - q));
    rep.add(s, "q_from_kappa(kappa_from_q(q)) on 100 points", worst, 1e-12);
  });
  detail::guarded(rep, s, "C at kappa = 4", [&] {
    rep.add(s, "C(4) = 2 sqrt 2", std::abs(c_of_q(4.0) - 2.0 * std::numbers::sqrt2), 1e-15);
  });
}

inline void dozz_suite(Report& rep, const QuadratureSpec& quad) {
  const std::string s = "dozz";
  mc::Xoshiro256 rng(detail::kSeed, 1);
  detail::guarded(rep, s, "permutation symmetry", [&] {
    double worst = 0.0;
    for (double q : {1.5, 2.0, 3.0, 3.75}) {
      const DozzEvaluator dozz(ModelParams::from_q(q).beta, quad);
      for (int k = 0; k < 3; ++k) {
        std::array<double, 3> a{-0.3 + 0.6 * rng.uniform(), -0.3 + 0.6 * rng.uniform(), -0.3 + 0.6 * rng.uniform()};
        std::sort(a.begin(), a.end());
        const double ref = dozz({a[0], a[1], a[2]});
        do {
          worst = std::max(worst, detail::rel_diff(dozz({a[0], a[1], a[2]}), ref));
        } while (std::next_permutation(a.begin(), a.end()));
      }
    }
    rep.add(s, "all 6 permutations, 12 charge triples (relative)", worst, 1e-10);
  });
  detail::guarded(rep, s, "normalization", [&] {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double beta = 1.0 + (std::sqrt(1.5) - 1.0) * rng.uniform();
      const double a = -0.45 + 0.9 * rng.uniform();
      worst = std::max(worst, std::abs(im_dozz({a, a, 0.0}, beta, quad) - 1.0));
    }
    rep.add(s, "im_dozz(a, a, 0) = 1 at 50 random (beta, a)", worst, 1e-9);
  });
}

// ----------------------------------------------------------------- upsilon

inline void upsilon_suite(Report& rep, const QuadratureSpec& quad) {
  const std::string s = "upsilon";
  const double tol = 10.0 * quad.rel_tol;
  mc::Xoshiro256 rng(detail::kSeed, 2);
  auto random_beta = [&] { return 1.0 + (std::sqrt(1.5) - 1.0) * rng.uniform(); };

  detail::guarded(rep, s, "reflection", [&] {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const UpsilonParams p(random_beta());
      const double z = p.Q() * rng.uniform();
      worst = std::max(worst, detail::rel_diff(upsilon(p.Q() - z, p, quad), upsilon(z, p, quad)));
    }
    rep.add(s, "Upsilon(z) = Upsilon(Q - z), 200 random points (relative)", worst, tol);
  });

  detail::guarded(rep, s, "duality", [&] {
    double worst_strip = 0.0;
    double worst_off = 0.0;
    for (int k = 0; k < 200; ++k) {
      const UpsilonParams p(random_beta());
      const double z = p.Q() * rng.uniform();
      worst_strip = std::max(worst_strip, detail::rel_diff(upsilon(z, p.dual(), quad), upsilon(z, p, quad)));
    }
    // Off the strip the two sides are continued by different shifts.
    for (int k = 0; k < 40; ++k) {
      const UpsilonParams p(random_beta());
      const double z = -1.5 + (p.Q() + 3.0) * rng.uniform();
      const SignedLog a = log_upsilon(z, p, quad);
      const SignedLog b = log_upsilon(z, p.dual(), quad);
      if (a.is_zero() || b.is_zero() || a.sign != b.sign) {
        worst_off = std::numeric_limits<double>::infinity();
        continue;
      }
      worst_off = std::max(worst_off, std::abs(std::expm1(a.log_abs - b.log_abs)));
    }
    rep.add(s, "beta <-> 1/beta inside the strip, 200 points (relative)", worst_strip, tol);
    rep.add(s, "beta <-> 1/beta on (-1.5, Q + 1.5), 40 points (relative)", worst_off, tol);
  });

  detail::guarded(rep, s, "shift", [&] {
    double worst_beta = 0.0;
    double worst_dual = 0.0;
    // Straight quadrature on both sides, so the edge continuation is not used.
    auto ups = [&](double z, const UpsilonParams& p) { return std::exp(ln_upsilon_strip(z, p, quad)); };
    for (int k = 0; k < 100; ++k) {
      const UpsilonParams p(random_beta());
      const double b = p.beta();
      // Both z and z + beta (resp. z + 1/beta) stay in (0, Q).
      const double z1 = (1.0 / b) * (0.02 + 0.96 * rng.uniform());
      const double lhs1 = ups(z1 + b, p);
      const double rhs1 = gamma_ratio(b * z1) * std::pow(b, 1.0 - 2.0 * b * z1) * ups(z1, p);
      worst_beta = std::max(worst_beta, detail::rel_diff(lhs1, rhs1));
      const double z2 = b * (0.02 + 0.96 * rng.uniform());
      const double lhs2 = ups(z2 + 1.0 / b, p);
      const double rhs2 = gamma_ratio(z2 / b) * std::pow(b, 2.0 * z2 / b - 1.0) * ups(z2, p);
      worst_dual = std::max(worst_dual, detail::rel_diff(lhs2, rhs2));
    }
    rep.add(s, "shift by beta, 100 points (relative)", worst_beta, tol);
    rep.add(s, "shift by 1/beta, 100 points (relative)", worst_dual, tol);
  });

  detail::guarded(rep, s, "centre", [&] {
    double worst = 0.0;
    for (double beta : {1.0, 1.1, std::sqrt(1.5), 1.7}) {
      const UpsilonParams p(beta);
      worst = std::max(worst, std::abs(ln_upsilon_strip(0.5 * p.Q(), p, quad)));
    }
    rep.add(s, "ln Upsilon(Q/2) = 0", worst, quad.abs_tol);
  });

  detail::guarded(rep, s, "refinement", [&] {
    QuadratureSpec fine = quad;
    fine.rel_tol = 0.5 * quad.rel_tol;
    double worst = 0.0;
    for (int k = 0; k < 40; ++k) {
      const UpsilonParams p(random_beta());
      const double z = p.Q() * (0.01 + 0.98 * rng.uniform());
      const double coarse = ln_upsilon_strip(z, p, quad);
      const double refined = ln_upsilon_strip(z, p, fine);
      worst = std::max(worst, std::abs(coarse - refined) / (std::abs(refined) * quad.rel_tol + quad.abs_tol));
    }
    rep.add(s, "halving rel_tol moves ln Upsilon by < rel_tol (in units of rel_tol)", worst, 1.0);
  });
}

// ------------------------------------------------------------------- radii

inline std::vector<double> kappa_grid(int n) { return detail::grid(kKappaMin, kKappaMax, n); }

inline void normalization_suite(Report& rep) {
  const std::string s = "normalization";
  detail::guarded(rep, s, "zeroth moments", [&] {
    double worst = 0.0;
    double worst_rho = 0.0;
    double worst_partition = 0.0;
    for (double k : kappa_grid(20)) {
      worst = std::max({worst, std::abs(moment_r_to_b(k, 0.0).value - 1.0), std::abs(moment_b_to_r(k, 0.0).value - 1.0),
                        std::abs(cle_nonsimple_moment(k, 0.0).value - 1.0)});
      for (double rho : detail::grid(-2.0, k - 4.0, 10)) {
        worst_rho = std::max({worst_rho, std::abs(fixed_point_moment(k, rho, 0.0).value - 1.0),
                              std::abs(general_rho_moment(k, rho, 0.0).value - 1.0)});
        const double simple = bcle_simple_moment(k, rho, 0.0, LoopEvent::true_loop).value +
                              bcle_simple_moment(k, rho, 0.0, LoopEvent::false_loop).value;
        const double nonsimple = bcle_nonsimple_moment(k, rho, 0.0, LoopEvent::true_loop).value +
                                 bcle_nonsimple_moment(k, rho, 0.0, LoopEvent::false_loop).value;
        worst_partition = std::max({worst_partition, std::abs(simple - 1.0), std::abs(nonsimple - 1.0)});
      }
    }
    rep.add(s, "R->B, B->R, CLE moments at lambda = 0 (20 kappa)", worst, 1e-12);
    rep.add(s, "fixed-point and general-rho moments at lambda = 0 (20 kappa x 10 rho)", worst_rho, 1e-12);
    rep.add(s, "true + false loop partitions at lambda = 0", worst_partition, 1e-10);
  });
}

inline void threshold_suite(Report& rep) {
  const std::string s = "thresholds";
  constexpr double eps = 1e-6;
  // 0 if finite-and-positive just above and infinite just below, else 1.
  auto flip = [](const std::function<MomentValue(double)>& m, double thr) {
    const MomentValue above = m(thr + eps);
    const MomentValue below = m(thr - eps);
    return (above.finite && above.value > 0.0 && !below.finite) ? 0.0 : 1.0;
  };
  detail::guarded(rep, s, "flips", [&] {
    double bad_rb = 0.0, bad_br = 0.0, bad_cle = 0.0, bad_bcle = 0.0, g_worst = 0.0, resid = 0.0;
    for (double k : kappa_grid(12)) {
      bad_rb += flip([k](double l) { return moment_r_to_b(k, l); }, r_to_b_threshold(k));
      const double l0 = lambda0(k);
      bad_br += flip([k](double l) { return moment_b_to_r(k, l); }, l0);
      bad_cle += flip([k](double l) { return cle_nonsimple_moment(k, l); }, cle_nonsimple_threshold(k));
      const double rho = potts_rho(k);
      bad_bcle += flip([k, rho](double l) { return bcle_simple_moment(k, rho, l, LoopEvent::true_loop); },
                       bcle_simple_threshold(k));
      bad_bcle += flip([k, rho](double l) { return bcle_nonsimple_moment(k, rho, l, LoopEvent::true_loop); },
                       bcle_nonsimple_threshold(k));
      const auto terms = fixed_point_terms(k, rho, l0);
      g_worst = std::max(g_worst, terms ? std::abs(terms->g - 1.0) : std::numeric_limits<double>::infinity());
      resid = std::max(resid, std::abs(lambda0_residual(k, l0)));
    }
    rep.add(s, "R->B flips at 2/kappa + 3 kappa/32 - 1 (+-1e-6, 12 kappa)", bad_rb, 0.0);
    rep.add(s, "B->R flips at lambda0 (+-1e-6, 12 kappa)", bad_br, 0.0);
    rep.add(s, "CLE_{16/kappa} flips at kappa/8 + 3/(2 kappa) - 1", bad_cle, 0.0);
    rep.add(s, "BCLE simple and non-simple flip at their thresholds", bad_bcle, 0.0);
    rep.add(s, "g(lambda0) = 1", g_worst, 1e-8);
    rep.add(s, "lambda0 solves its defining equation", resid, 1e-10);
  });
}

inline void chain_suite(Report& rep) {
  const std::string s = "chain";
  detail::guarded(rep, s, "fixed point = closed forms", [&] {
    double worst_potts = 0.0;
    double worst_general = 0.0;
    for (double k : {2.8, 3.0, 3.3, 3.8}) {
      for (double l : {-0.01, 0.2, 1.0, 3.0}) {
        const double fp = fixed_point_moment(k, potts_rho(k), l).value;
        worst_potts = std::max({worst_potts, detail::rel_diff(fp, general_rho_moment(k, potts_rho(k), l).value),
                                detail::rel_diff(fp, moment_b_to_r(k, l).value)});
        for (double rho : detail::grid(-2.0, k - 4.0, 5)) {
          const auto a = fixed_point_moment(k, rho, l);
          const auto b = general_rho_moment(k, rho, l);
          if (a.finite != b.finite) {
            worst_general = std::numeric_limits<double>::infinity();
          } else if (a.finite) {
            worst_general = std::max(worst_general, detail::rel_diff(a.value, b.value));
          }
        }
      }
    }
    rep.add(s, "fixed point = general rho = B->R at rho = 3 kappa/2 - 6 (4x4 grid, relative)", worst_potts, 1e-9);
    rep.add(s, "fixed point = general rho over 5 rho values (relative)", worst_general, 1e-9);
  });
}

inline void continuation_suite(Report& rep) {
  const std::string s = "continuation";
  detail::guarded(rep, s, "theta^2 = 0", [&] {
    double worst = 0.0;
    for (double k : kappa_grid(10)) {
      const double lc = (4.0 - k) * (4.0 - k) / (8.0 * k);
      const double d = 1e-12;
      worst = std::max({worst, std::abs(moment_r_to_b(k, lc + d).value - moment_r_to_b(k, lc - d).value),
                        std::abs(moment_b_to_r(k, lc + d).value - moment_b_to_r(k, lc - d).value),
                        std::abs(cle_nonsimple_moment(k, lc + d).value - cle_nonsimple_moment(k, lc - d).value),
                        std::abs(fixed_point_moment(k, potts_rho(k), lc + d).value -
                                 fixed_point_moment(k, potts_rho(k), lc - d).value)});
    }
    rep.add(s, "moments continuous across theta^2 = 0", worst, 1e-8);
  });
}

inline void monotonicity_suite(Report& rep) {
  const std::string s = "monotonicity";
  detail::guarded(rep, s, "decreasing", [&] {
    double violations = 0.0;
    for (double k : kappa_grid(8)) {
      const std::array<std::function<MomentValue(double)>, 4> laws{
          [k](double l) { return moment_r_to_b(k, l); },
          [k](double l) { return moment_b_to_r(k, l); },
          [k](double l) { return cle_nonsimple_moment(k, l); },
          [k](double l) { return fixed_point_moment(k, potts_rho(k), l); },
      };
      for (const auto& m : laws) {
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 200; ++i) {
          const double l = -0.2 + 5.2 * i / 200.0;
          const MomentValue v = m(l);
          if (!v.finite) continue;
          if (!(v.value < prev)) violations += 1.0;
          prev = v.value;
        }
      }
    }
    rep.add(s, "finite moments strictly decrease in lambda on [-0.2, 5]", violations, 0.0);
  });
}

inline void log_moment_suite(Report& rep) {
  const std::string s = "log-moments";
  constexpr double h = 1e-6;
  detail::guarded(rep, s, "finite differences", [&] {
    for (double k : {2.8, 3.0, 10.0 / 3.0, 3.9}) {
      const double fd_rb = (moment_r_to_b(k, h).value - moment_r_to_b(k, -h).value) / (2.0 * h);
      const double fd_br = (moment_b_to_r(k, h).value - moment_b_to_r(k, -h).value) / (2.0 * h);
      const std::string tag = detail::fmt("kappa=%.6g", k);
      rep.add(s, "E log R_RB vs central difference " + tag, detail::rel_diff(log_moment_r_to_b(k), fd_rb), 1e-4);
      rep.add(s, "E log R_BR vs central difference " + tag, detail::rel_diff(log_moment_b_to_r(k), fd_br), 1e-4);
    }
  });
  detail::guarded(rep, s, "C(kappa)", [&] {
    double worst_methods = 0.0;
    double worst_q = 0.0;
    for (double k : kappa_grid(50)) {
      const double logs = c_kappa(k, CKappaMethod::from_logs);
      worst_methods = std::max(worst_methods, detail::rel_diff(logs, c_kappa(k, CKappaMethod::closed_form)));
      worst_q = std::max(worst_q, detail::rel_diff(logs, c_of_q(q_from_kappa(k))));
    }
    rep.add(s, "C(kappa) from logs = closed form (50 kappa, relative)", worst_methods, 1e-9);
    rep.add(s, "C(kappa) from logs = c_of_q(q_from_kappa(kappa)) (relative)", worst_q, 1e-9);
  });
}

/// Every deterministic check. `include_printed_table1` adds the golden
/// comparison against the printed Table 1 cells.
inline Report run_all(const QuadratureSpec& quad = {}, bool include_printed_table1 = true) {
  Report rep;
  if (include_printed_table1) table1_printed(rep);
  table2_printed(rep);
  constants_suite(rep);
  dozz_suite(rep, quad);
  upsilon_suite(rep, quad);
  normalization_suite(rep);
  threshold_suite(rep);
  chain_suite(rep);
  continuation_suite(rep);
  monotonicity_suite(rep);
  log_moment_suite(rep);
  return rep;
}

}  // namespace potts::verify

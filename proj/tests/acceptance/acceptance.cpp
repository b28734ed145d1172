// One PASS/FAIL line per acceptance criterion.
//   acceptance            run every criterion
//   acceptance --list     print the criterion names
//   acceptance --only N   run criterion N; exit status 0 iff it passes

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "potts/potts.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

// ---------------------------------------------------------------- tables

Outcome table1_printed() {
  constexpr double tol = 5e-7;
  constexpr double max_seconds = 10.0;
  const auto t0 = Clock::now();
  int bad = 0;
  double worst = 0.0;
  std::string cells;
  for (const auto& row : potts::reference::kTable1) {
    const double got[3] = {potts::kappa_from_q(row.q), potts::c_of_q(row.q), potts::im_dozz_at_q(row.q)};
    const double want[3] = {row.kappa, row.c, row.im_dozz};
    const char* names[3] = {"kappa", "C", "ImDOZZ"};
    for (int i = 0; i < 3; ++i) {
      const double d = std::abs(got[i] - want[i]);
      worst = std::max(worst, d);
      if (d > tol) {
        ++bad;
        cells += fmt(" %s(q=%.2f):%.2e", names[i], row.q, d);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < max_seconds,
          fmt("39 cells, %d beyond %.0e (worst %.2e), %.2f s;", bad, tol, worst, secs) + cells};
}

Outcome table2_exact_row() {
  constexpr double tol = 1e-4;
  constexpr double sigmas = 3.0;
  constexpr double max_seconds = 10.0;
  const auto t0 = Clock::now();
  int bad = 0;
  double worst = 0.0, worst_sigma = 0.0;
  for (const auto& row : potts::reference::kTable2) {
    const double x = potts::c_of_q(row.q) / std::sqrt(row.q) * potts::im_dozz_at_q(row.q);
    const double d = std::abs(x - row.exact);
    worst = std::max(worst, d);
    if (d > tol) ++bad;
    if (row.r_num_sigma > 0.0) {
      const double z = std::abs(x - row.r_num) / row.r_num_sigma;
      worst_sigma = std::max(worst_sigma, z);
      if (z > sigmas) ++bad;
    } else if (std::abs(x - row.r_num) > 1e-12) {
      ++bad;
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < max_seconds,
          fmt("13 rows, worst |exact - printed| %.2e (tol %.0e), worst deviation from simulation %.2f sigma, %.2f s",
              worst, tol, worst_sigma, secs)};
}

Outcome c_q3_closed_form() {
  constexpr double tol = 1e-10;
  const double closed = std::sqrt((5.0 + std::sqrt(5.0)) / 2.0);
  const double rel = std::abs(potts::c_of_q(3.0) - closed) / closed;
  return {rel <= tol, fmt("relative %.2e (tol %.0e)", rel, tol)};
}

Outcome ckappa_identity() {
  constexpr double tol = 1e-9;
  double worst = 0.0, worst_q = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double k = potts::kKappaMin + (potts::kKappaMax - potts::kKappaMin) * i / 51.0;
    const double logs = potts::c_kappa(k, potts::CKappaMethod::from_logs);
    const double closed = potts::c_kappa(k, potts::CKappaMethod::closed_form);
    worst = std::max(worst, std::abs(logs - closed) / closed);
    worst_q = std::max(worst_q, std::abs(logs - potts::c_of_q(potts::q_from_kappa(k))) / closed);
  }
  return {worst <= tol && worst_q <= tol,
          fmt("50 kappa: from_logs vs closed_form %.2e, vs c_of_q(q_from_kappa) %.2e (tol %.0e)", worst, worst_q, tol)};
}

// ------------------------------------------------------------ moment laws

std::vector<double> open_kappa_grid(int n) {
  std::vector<double> g;
  for (int i = 1; i <= n; ++i) g.push_back(potts::kKappaMin + (potts::kKappaMax - potts::kKappaMin) * i / (n + 1.0));
  return g;
}

Outcome moment_normalization_thresholds() {
  constexpr double norm_tol = 1e-12;
  constexpr double eps = 1e-6;
  constexpr double g_tol = 1e-8;
  double norm = 0.0, g_worst = 0.0;
  int flips = 0;
  const auto ks = open_kappa_grid(20);
  for (double k : ks) {
    norm = std::max({norm, std::abs(potts::moment_r_to_b(k, 0.0).value - 1.0),
                     std::abs(potts::moment_b_to_r(k, 0.0).value - 1.0)});
    const double t_rb = potts::r_to_b_threshold(k);
    const double l0 = potts::lambda0(k);
    const auto a = potts::moment_r_to_b(k, t_rb + eps), b = potts::moment_r_to_b(k, t_rb - eps);
    const auto c = potts::moment_b_to_r(k, l0 + eps), d = potts::moment_b_to_r(k, l0 - eps);
    flips += (a.finite && a.value > 0.0 && !b.finite) ? 0 : 1;
    flips += (c.finite && c.value > 0.0 && !d.finite) ? 0 : 1;
    const auto t = potts::fixed_point_terms(k, potts::potts_rho(k), l0);
    g_worst = std::max(g_worst, t ? std::abs(t->g - 1.0) : INFINITY);
  }
  return {norm <= norm_tol && flips == 0 && g_worst <= g_tol,
          fmt("%zu kappa: |E[R^0] - 1| %.2e (tol %.0e), %d misplaced flips at +-%.0e, |g(lambda0) - 1| %.2e (tol %.0e)",
              ks.size(), norm, norm_tol, flips, eps, g_worst, g_tol)};
}

Outcome fixed_point_chain() {
  constexpr double chain_tol = 1e-9;
  constexpr double partition_tol = 1e-10;
  double chain = 0.0, part = 0.0;
  for (double k : {2.8, 3.0, 3.3, 3.8}) {
    const double rho = potts::potts_rho(k);
    for (double l : {-0.01, 0.2, 1.0, 3.0}) {
      const auto fp = potts::fixed_point_moment(k, rho, l);
      const auto gr = potts::general_rho_moment(k, rho, l);
      const auto br = potts::moment_b_to_r(k, l);
      if (!(fp.finite && gr.finite && br.finite)) {
        chain = INFINITY;
        continue;
      }
      chain = std::max({chain, std::abs(fp.value - br.value) / br.value, std::abs(gr.value - br.value) / br.value});
    }
    for (int i = 1; i <= 9; ++i) {
      const double r = -2.0 + (k - 2.0) * i / 10.0;
      using potts::LoopEvent;
      part = std::max({part,
                       std::abs(potts::bcle_simple_moment(k, r, 0.0, LoopEvent::true_loop).value +
                                potts::bcle_simple_moment(k, r, 0.0, LoopEvent::false_loop).value - 1.0),
                       std::abs(potts::bcle_nonsimple_moment(k, r, 0.0, LoopEvent::true_loop).value +
                                potts::bcle_nonsimple_moment(k, r, 0.0, LoopEvent::false_loop).value - 1.0)});
    }
  }
  return {chain <= chain_tol && part <= partition_tol,
          fmt("4x4 grid: worst relative %.2e (tol %.0e); partitions at lambda = 0: %.2e (tol %.0e)", chain, chain_tol,
              part, partition_tol)};
}

Outcome log_moment_derivatives() {
  constexpr double h = 1e-6;
  constexpr double tol = 1e-4;
  double worst = 0.0;
  for (double k : {2.8, 3.0, 10.0 / 3.0, 3.9}) {
    const double d_rb = (potts::moment_r_to_b(k, h).value - potts::moment_r_to_b(k, -h).value) / (2.0 * h);
    const double d_br = (potts::moment_b_to_r(k, h).value - potts::moment_b_to_r(k, -h).value) / (2.0 * h);
    worst = std::max({worst, std::abs(d_rb - potts::log_moment_r_to_b(k)) / std::abs(d_rb),
                      std::abs(d_br - potts::log_moment_b_to_r(k)) / std::abs(d_br)});
  }
  return {worst <= tol, fmt("kappa in {2.8, 3, 10/3, 3.9}: worst relative %.2e (tol %.0e, h = %.0e)", worst, tol, h)};
}

// --------------------------------------------------------------- Upsilon

Outcome upsilon_suite() {
  constexpr double oracle_tol = 1e-9;
  potts::verify::Report rep;
  potts::verify::upsilon_suite(rep, {});
  const auto failed = rep.failures();
  double worst_identity = 0.0;
  for (const auto& c : rep.checks) worst_identity = std::max(worst_identity, c.residual / std::max(c.tolerance, 1e-300));

  potts::mc::Xoshiro256 rng(20240611, 7);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double beta = 1.0 + (std::sqrt(1.5) - 1.0) * rng.uniform();
    const double q = beta + 1.0 / beta;
    const double z = q * (0.05 + 0.9 * rng.uniform());
    const double lib = potts::ln_upsilon_strip(z, potts::UpsilonParams(beta));
    const double ref = oracle::ln_upsilon(z, beta);
    worst = std::max(worst, std::abs(std::expm1(lib - ref)));
  }
  std::string names;
  for (const auto& c : failed) names += " [" + c.name + "]";
  return {failed.empty() && worst <= oracle_tol,
          fmt("%zu identity checks, %zu failed, worst residual/tolerance %.2f; oracle at 20 points: relative %.2e (tol "
              "%.0e)",
              rep.checks.size(), failed.size(), worst_identity, worst, oracle_tol) +
              names};
}

// ------------------------------------------------------------ Monte Carlo

Outcome micro_lattice_chi2() {
  constexpr long sweeps = 10000000;
  constexpr int thin = 50;
  constexpr double level = 0.01;
  struct Case {
    double q;
    bool sw;
  };
  const Case cases[] = {{1.5, false}, {2.0, false}, {3.0, false}, {2.0, true}, {3.0, true}};
  const potts::mc::Lattice lat(2, 2, potts::mc::Boundary::periodic);
  bool ok = true;
  std::string detail;
  const auto t0 = Clock::now();
  std::uint64_t stream = 0;
  for (const auto& c : cases) {
    const double p = potts::mc::p_critical(c.q);
    const auto prob = oracle::fk_distribution({2, 2, true}, p, c.q);
    potts::mc::Xoshiro256 rng(20240611, stream++);
    potts::mc::BondConfig bonds(lat);
    potts::mc::SamplerWorkspace ws;
    std::vector<long long> hist(prob.size(), 0);
    for (long s = 1; s <= sweeps; ++s) {
      if (c.sw) {
        potts::mc::swendsen_wang_sweep(bonds, lat, p, c.q, rng, ws);
      } else {
        potts::mc::chayes_machta_sweep(bonds, lat, p, c.q, rng, ws);
      }
      if (s % thin == 0) ++hist[bonds.pack(lat)];
    }
    const auto chi = oracle::chi_square(hist, prob);
    ok = ok && chi.p_value > level;
    detail += fmt(" %s q=%.1f: chi2=%.1f dof=%.0f p=%.3f;", c.sw ? "SW" : "CM", c.q, chi.statistic, chi.dof, chi.p_value);
  }
  return {ok, fmt("2x2 periodic, %ld sweeps each, every %dth recorded, level %.2f, %.0f s;", sweeps, thin, level,
                  seconds_since(t0)) +
                  detail};
}

Outcome desk_scale(double q, double target, double tol) {
  potts::mc::LatticeSim sim;
  sim.L = 128;
  sim.q = q;
  sim.sweeps = 200000;
  sim.thermalization = 2000;
  sim.batch_count = 20;
  sim.seed = 20240611;
  const auto t0 = Clock::now();
  const auto res = potts::mc::connectivity_ratio(sim, potts::mc::equilateral_triangle(sim.L, 16));
  const double d = std::abs(res.ratio_spin.mean - target);
  return {d <= tol, fmt("L=%d side 16, %ld sweeps: R/sqrt(q) = %.4f +- %.4f, target %.4f, |diff| %.4f (tol %.2f), "
                        "tau_int %.1f, %.0f s",
                        sim.L, sim.sweeps, res.ratio_spin.mean, res.ratio_spin.std_error, target, d, tol, res.tau_int,
                        seconds_since(t0))};
}

Outcome desk_scale_q2() { return desk_scale(2.0, 0.9735, 0.02); }
Outcome desk_scale_q3() { return desk_scale(3.0, 1.0183, 0.03); }

// ------------------------------------------------------------ determinism

std::string simulation_bytes(std::uint64_t seed) {
  potts::mc::LatticeSim sim;
  sim.L = 32;
  sim.q = 3.0;
  sim.sweeps = 2000;
  sim.thermalization = 100;
  sim.batch_count = 10;
  sim.chains = 2;
  sim.seed = seed;
  const auto res = potts::mc::connectivity_ratio(sim, potts::mc::equilateral_triangle(sim.L, 6), 2);
  std::ostringstream os;
  os << std::hexfloat;
  for (const auto& b : res.batches) os << b.index << ' ' << b.p3 << ' ' << b.p2_12 << ' ' << b.p2_23 << ' ' << b.p2_13 << '\n';
  os << res.ratio.mean << ' ' << res.ratio.std_error << ' ' << res.tau_int << '\n';
  return os.str();
}

std::string constants_bytes() {
  std::ostringstream os;
  os << std::hexfloat;
  for (const auto& row : potts::reference::kTable1) os << potts::r_constant(row.q) << ' ' << potts::lambda0(potts::kappa_from_q(std::clamp(row.q, 1.01, 3.99))) << '\n';
  return os.str();
}

Outcome determinism() {
  const bool sim_same = simulation_bytes(99) == simulation_bytes(99);
  const bool sim_differs = simulation_bytes(99) != simulation_bytes(100);
  const bool const_same = constants_bytes() == constants_bytes();
  return {sim_same && sim_differs && const_same,
          fmt("simulation repeat identical: %s, other seed differs: %s, constants repeat identical: %s",
              sim_same ? "yes" : "no", sim_differs ? "yes" : "no", const_same ? "yes" : "no")};
}

struct Criterion {
  const char* name;
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"table1_printed", "Table 1 values to 5e-7 in under 10 s", table1_printed},
    {"table2_exact_row", "Table 2 exact row to 1e-4 and within 3 sigma of simulation", table2_exact_row},
    {"c_q3_closed_form", "C(3) closed form to 1e-10", c_q3_closed_form},
    {"ckappa_identity", "loop-measure ratio identity to 1e-9", ckappa_identity},
    {"moment_normalization_thresholds", "moment normalization and finiteness thresholds",
     moment_normalization_thresholds},
    {"fixed_point_chain", "fixed point, general rho and B->R laws agree", fixed_point_chain},
    {"log_moment_derivatives", "log-moments equal derivatives at 0", log_moment_derivatives},
    {"upsilon_suite", "Upsilon identities and oracle", upsilon_suite},
    {"micro_lattice_chi2", "exact FK distribution on 2x2", micro_lattice_chi2},
    {"desk_scale_q2", "q = 2 spin-cluster ratio near 0.9735", desk_scale_q2},
    {"desk_scale_q3", "q = 3 spin-cluster ratio near 1.0183", desk_scale_q3},
    {"determinism", "identical seeds give identical bytes", determinism},
};

bool run(const Criterion& c) {
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s %s: %s. %s\n", o.pass ? "PASS" : "FAIL", c.name, c.title, o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 2 && std::strcmp(argv[1], "--list") == 0) {
    for (const auto& c : kCriteria) std::printf("%s\n", c.name);
    return 0;
  }
  if (argc == 3 && std::strcmp(argv[1], "--only") == 0) {
    for (const auto& c : kCriteria) {
      if (argv[2] == std::string(c.name)) return run(c) ? 0 : 1;
    }
    std::fprintf(stderr, "unknown criterion %s\n", argv[2]);
    return 2;
  }
  if (argc != 1) {
    std::fprintf(stderr, "usage: acceptance [--list | --only NAME]\n");
    return 2;
  }
  bool all = true;
  for (const auto& c : kCriteria) all = run(c) && all;
  return all ? 0 : 1;
}

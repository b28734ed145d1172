// potts3pt: tables, formula evaluation and simulations for the three-point
// connectivity constant of critical Potts spin clusters.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "output.hpp"
#include "potts/potts.hpp"

namespace {

using namespace potts3pt;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;
constexpr int kExitStatistics = 4;

struct Options {
  std::string format = "text";
  std::string out;

  std::optional<double> q;
  std::optional<double> kappa;
  std::optional<double> rho;
  std::vector<double> lambda;
  std::vector<double> alphas;

  int L = 128;
  int side = 16;
  long sweeps = 200000;
  long thermalization = 2000;
  int batches = 20;
  std::uint64_t seed = 1;
  std::string boundary = "periodic";
  std::string sampler = "cm";
  int chains = 1;
  int threads = 1;
  std::optional<double> p;
  std::optional<double> r;
  std::string batch_out;
};

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  return Format::text;
}

// The 11 grid values of q strictly inside (1, 4), where kappa is in (8/3, 4).
std::vector<double> interior_q_grid() {
  std::vector<double> g;
  for (const auto& row : potts::reference::kTable1) {
    if (row.q > 1.0 && row.q < 4.0) g.push_back(row.q);
  }
  return g;
}

// kappa values requested through --q / --kappa, or the interior grid.
std::vector<double> resolve_kappas(const Options& o) {
  if (o.q && o.kappa) throw potts::DomainError("give at most one of --q and --kappa");
  if (o.kappa) return {*o.kappa};
  if (o.q) return {potts::kappa_from_q(*o.q)};
  std::vector<double> ks;
  for (double q : interior_q_grid()) ks.push_back(potts::kappa_from_q(q));
  return ks;
}

double single_kappa(const Options& o, double default_q) {
  if (o.q && o.kappa) throw potts::DomainError("give at most one of --q and --kappa");
  if (o.kappa) return *o.kappa;
  return potts::kappa_from_q(o.q.value_or(default_q));
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

Cell moment_cell(const potts::MomentValue& m) { return m.finite ? Cell{m.value} : Cell{Infinite{}}; }

// ----------------------------------------------------------------- commands

Output run_table1() {
  Output out("table1");
  out.provenance.push_back("printed reference values: data/table1.csv");
  out.table.columns = {"q", "kappa", "C", "ImDOZZ", "kappa_printed", "C_printed", "ImDOZZ_printed",
                       "diff_kappa", "diff_C", "diff_ImDOZZ"};
  double worst = 0.0;
  for (const auto& row : potts::reference::kTable1) {
    const double k = potts::kappa_from_q(row.q);
    const double c = potts::c_of_q(row.q);
    const double d = potts::im_dozz_at_q(row.q);
    const double dk = k - row.kappa, dc = c - row.c, dd = d - row.im_dozz;
    worst = std::max({worst, std::abs(dk), std::abs(dc), std::abs(dd)});
    out.table.add({row.q, k, c, d, row.kappa, row.c, row.im_dozz, dk, dc, dd});
  }
  out.residuals["max_abs_diff"] = worst;
  out.residuals["tolerance"] = 5e-7;
  out.residuals["within_tolerance"] = worst <= 5e-7;
  return out;
}

Output run_table2() {
  Output out("table2");
  out.provenance.push_back("printed reference values: data/table2.csv");
  out.table.columns = {"q", "exact", "exact_printed", "diff", "R_num", "R_num_sigma", "deviation_sigma", "within_3sigma"};
  double worst = 0.0;
  bool all_within = true;
  for (const auto& row : potts::reference::kTable2) {
    const double exact = potts::c_of_q(row.q) / std::sqrt(row.q) * potts::im_dozz_at_q(row.q);
    const double diff = exact - row.exact;
    worst = std::max(worst, std::abs(diff));
    Cell dev;
    bool within;
    if (row.r_num_sigma > 0.0) {
      const double sig = (exact - row.r_num) / row.r_num_sigma;
      dev = sig;
      within = std::abs(sig) <= 3.0;
    } else {
      within = std::abs(exact - row.r_num) <= 1e-12;
    }
    all_within = all_within && within;
    out.table.add({row.q, exact, row.exact, diff, row.r_num, row.r_num_sigma, dev, within});
  }
  out.residuals["max_abs_diff"] = worst;
  out.residuals["tolerance"] = 1e-4;
  out.residuals["all_within_3sigma"] = all_within;
  return out;
}

Output run_dozz(const Options& o) {
  Output out("dozz");
  const double k = single_kappa(o, 2.0);
  const auto m = potts::ModelParams::from_kappa(k);
  potts::DozzArgs args{};
  if (o.alphas.empty()) {
    const double a = potts::alpha0(m.beta);
    args = {a, a, a};
  } else if (o.alphas.size() == 3) {
    args = {o.alphas[0], o.alphas[1], o.alphas[2]};
  } else {
    throw potts::DomainError("--alphas takes exactly three values");
  }
  out.config = {{"q", m.q}, {"kappa", k}, {"alphas", {args.alpha1, args.alpha2, args.alpha3}}};
  out.table.columns = {"q", "kappa", "beta", "alpha1", "alpha2", "alpha3", "ImDOZZ"};
  out.table.add({m.q, k, m.beta, args.alpha1, args.alpha2, args.alpha3, potts::im_dozz(args, m.beta)});
  return out;
}

Output run_constant(const Options& o) {
  Output out("constant");
  if (o.kappa) throw potts::DomainError("constant takes --q");
  std::vector<double> qs;
  if (o.q) {
    qs = {*o.q};
  } else {
    for (const auto& row : potts::reference::kTable1) qs.push_back(row.q);
  }
  out.config = {{"q", optional_json(o.q)}};
  out.table.columns = {"q", "kappa", "C", "ImDOZZ", "R", "R_over_sqrt_q"};
  for (double q : qs) {
    const double c = potts::c_of_q(q);
    const double d = potts::im_dozz_at_q(q);
    out.table.add({q, potts::kappa_from_q(q), c, d, c * d, c * d / std::sqrt(q)});
  }
  return out;
}

Output run_moments(const Options& o) {
  Output out("moments");
  const double k = single_kappa(o, 2.0);
  const double rho = o.rho.value_or(potts::potts_rho(k));
  std::vector<double> lambdas = o.lambda;
  if (lambdas.empty()) lambdas = {-0.04, -0.02, 0.0, 0.1, 0.5, 1.0, 2.0};
  out.config = {{"kappa", k}, {"rho", rho}, {"lambda", lambdas}};
  out.table.columns = {"kappa", "rho", "lambda", "theta_squared", "R_to_B", "B_to_R", "CLE_nonsimple",
                       "fixed_point", "general_rho"};
  for (double l : lambdas) {
    const potts::ThetaParams th(k, l);
    out.table.add({k, rho, l, th.theta_squared(), moment_cell(potts::moment_r_to_b(k, l)),
                   moment_cell(potts::moment_b_to_r(k, l)), moment_cell(potts::cle_nonsimple_moment(k, l)),
                   moment_cell(potts::fixed_point_moment(k, rho, l)), moment_cell(potts::general_rho_moment(k, rho, l))});
  }
  out.residuals["lambda0"] = potts::lambda0(k);
  out.residuals["r_to_b_threshold"] = potts::r_to_b_threshold(k);
  out.residuals["general_rho_threshold"] = potts::general_rho_threshold(k, rho);
  return out;
}

Output run_lambda0(const Options& o) {
  Output out("lambda0");
  out.config = {{"q", optional_json(o.q)}, {"kappa", optional_json(o.kappa)}};
  out.table.columns = {"kappa", "q", "lambda0", "residual", "r_to_b_threshold", "cle_nonsimple_threshold"};
  for (double k : resolve_kappas(o)) {
    const double l0 = potts::lambda0(k);
    out.table.add({k, potts::q_from_kappa(k), l0, potts::lambda0_residual(k, l0), potts::r_to_b_threshold(k),
                   potts::cle_nonsimple_threshold(k)});
  }
  return out;
}

Output run_logs(const Options& o) {
  Output out("logs");
  out.config = {{"q", optional_json(o.q)}, {"kappa", optional_json(o.kappa)}};
  out.table.columns = {"kappa", "q", "E_log_R_RB", "E_log_R_BR"};
  for (double k : resolve_kappas(o)) {
    out.table.add({k, potts::q_from_kappa(k), potts::log_moment_r_to_b(k), potts::log_moment_b_to_r(k)});
  }
  return out;
}

Output run_ckappa(const Options& o) {
  Output out("ckappa");
  out.config = {{"q", optional_json(o.q)}, {"kappa", optional_json(o.kappa)}};
  out.table.columns = {"kappa", "q", "from_logs", "closed_form", "rel_diff"};
  double worst = 0.0;
  for (double k : resolve_kappas(o)) {
    const double a = potts::c_kappa(k, potts::CKappaMethod::from_logs);
    const double b = potts::c_kappa(k, potts::CKappaMethod::closed_form);
    const double rel = std::abs(a - b) / std::abs(b);
    worst = std::max(worst, rel);
    out.table.add({k, potts::q_from_kappa(k), a, b, rel});
  }
  out.residuals["max_rel_diff"] = worst;
  return out;
}

Output run_simulate(const Options& o) {
  namespace mc = potts::mc;
  if (o.kappa) throw potts::DomainError("simulate takes --q");
  mc::LatticeSim sim;
  sim.L = o.L;
  sim.q = o.q.value_or(2.0);
  sim.p = o.p;
  sim.r = o.r;
  sim.sweeps = o.sweeps;
  sim.thermalization = o.thermalization;
  sim.seed = o.seed;
  sim.batch_count = o.batches;
  sim.boundary = o.boundary == "free" ? mc::Boundary::free : mc::Boundary::periodic;
  sim.sampler = o.sampler == "sw" ? mc::SamplerKind::swendsen_wang : mc::SamplerKind::chayes_machta;
  sim.chains = o.chains;
  const auto pts = mc::equilateral_triangle(sim.L, o.side);
  const auto res = mc::connectivity_ratio(sim, pts, o.threads);

  Output out("simulate");
  out.config = {{"q", sim.q},
                {"p", sim.bond_probability()},
                {"r", sim.red_probability()},
                {"L", sim.L},
                {"side", o.side},
                {"points", {{pts[0].x, pts[0].y}, {pts[1].x, pts[1].y}, {pts[2].x, pts[2].y}}},
                {"sweeps", sim.sweeps},
                {"thermalization", sim.thermalization},
                {"batches", sim.batch_count},
                {"seed", sim.seed},
                {"boundary", mc::to_string(sim.boundary)},
                {"sampler", mc::to_string(sim.sampler)},
                {"chains", sim.chains},
                {"rng", "xoshiro256** seeded by splitmix64(seed, chain)"}};

  const bool has_exact = sim.q >= 1.0 && sim.q <= 4.0;
  const double exact = has_exact ? potts::r_constant(sim.q) : std::nan("");
  auto deviation = [](const mc::Estimate& e, double target) -> Cell {
    if (!std::isfinite(target) || e.std_error <= 0.0) return {};
    return (e.mean - target) / e.std_error;
  };
  auto exact_cell = [](double x) -> Cell { return std::isfinite(x) ? Cell{x} : Cell{}; };
  out.table.columns = {"quantity", "mean", "std_error", "exact", "deviation_sigma"};
  out.table.add({std::string("P3"), res.p3.mean, res.p3.std_error, Cell{}, Cell{}});
  out.table.add({std::string("P2_12"), res.p2_12.mean, res.p2_12.std_error, Cell{}, Cell{}});
  out.table.add({std::string("P2_23"), res.p2_23.mean, res.p2_23.std_error, Cell{}, Cell{}});
  out.table.add({std::string("P2_13"), res.p2_13.mean, res.p2_13.std_error, Cell{}, Cell{}});
  out.table.add({std::string("R_red"), res.ratio.mean, res.ratio.std_error, exact_cell(exact),
                 deviation(res.ratio, exact)});
  const double exact_spin = exact / std::sqrt(sim.q);
  out.table.add({std::string("R_spin"), res.ratio_spin.mean, res.ratio_spin.std_error, exact_cell(exact_spin),
                 deviation(res.ratio_spin, exact_spin)});
  out.residuals["batch_length"] = res.batch_length;
  out.residuals["tau_int"] = res.tau_int;
  out.residuals["autocorrelation_warning"] = res.autocorrelation_warning;
  if (res.autocorrelation_warning) {
    std::cerr << "warning: batch length " << res.batch_length << " does not exceed the estimated integrated "
              << "autocorrelation time " << res.tau_int << "\n";
  }

  if (!o.batch_out.empty()) {
    std::ofstream f(o.batch_out);
    if (!f) throw potts::DomainError("cannot open " + o.batch_out);
    f << "# potts3pt simulate batch means\n# config: " << out.config.dump() << "\n";
    f << "batch_index,p3,p2_12,p2_23,p2_13\n";
    char buf[160];
    for (const auto& b : res.batches) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", b.index, b.p3, b.p2_12, b.p2_23, b.p2_13);
      f << buf;
    }
  }
  return out;
}

Output run_verify(bool& all_pass) {
  Output out("verify");
  const auto rep = potts::verify::run_all();
  out.table.columns = {"suite", "check", "residual", "tolerance", "pass"};
  json failures = json::array();
  for (const auto& c : rep.checks) {
    out.table.add({c.suite, c.name, c.residual, c.tolerance, c.pass});
    if (!c.pass) failures.push_back({{"suite", c.suite}, {"check", c.name}, {"residual", std::isfinite(c.residual) ? json(c.residual) : json(nullptr)}, {"tolerance", c.tolerance}});
  }
  all_pass = rep.all_pass();
  out.residuals["checks"] = static_cast<long long>(rep.checks.size());
  out.residuals["failed"] = static_cast<long long>(failures.size());
  out.residuals["failures"] = failures;
  return out;
}

void emit(const Output& out, const Options& o) {
  const std::string text = render(out, parse_format(o.format));
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw potts::DomainError("cannot open " + o.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Three-point connectivity constant of critical Potts spin clusters"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--out", o.out, "Write output to PATH instead of stdout");

  auto add_q = [&](CLI::App* sc) { sc->add_option("--q", o.q, "Cluster weight q"); };
  auto add_kappa = [&](CLI::App* sc) { sc->add_option("--kappa", o.kappa, "SLE parameter kappa"); };

  auto* t1 = app.add_subcommand("table1", "kappa, C(q) and ImDOZZ on the 13-point q grid, with diffs to the printed table");
  auto* t2 = app.add_subcommand("table2", "(C(q)/sqrt q) ImDOZZ against the printed simulation values");
  auto* dz = app.add_subcommand("dozz", "Normalized imaginary DOZZ constant");
  add_q(dz);
  add_kappa(dz);
  dz->add_option("--alphas", o.alphas, "Three charges (default: alpha0 three times)")->delimiter(',')->expected(3);
  auto* cs = app.add_subcommand("constant", "R(q) = C(q) ImDOZZ");
  add_q(cs);
  auto* mo = app.add_subcommand("moments", "Conformal radius moment laws");
  add_q(mo);
  add_kappa(mo);
  mo->add_option("--rho", o.rho, "BCLE rho for the fixed-point and general-rho laws (default 3 kappa/2 - 6)");
  mo->add_option("--lambda", o.lambda, "Moment exponents")->delimiter(',');
  auto* l0 = app.add_subcommand("lambda0", "Negative finiteness threshold of E[R_BR^lambda]");
  add_q(l0);
  add_kappa(l0);
  auto* lg = app.add_subcommand("logs", "Closed-form log-moments");
  add_q(lg);
  add_kappa(lg);
  auto* ck = app.add_subcommand("ckappa", "Loop-measure ratio C(kappa) by both methods");
  add_q(ck);
  add_kappa(ck);
  auto* sm = app.add_subcommand("simulate", "Monte Carlo estimate of the three-point ratio");
  add_q(sm);
  sm->add_option("--L", o.L, "Lattice side");
  sm->add_option("--side", o.side, "Triangle side");
  sm->add_option("--sweeps", o.sweeps, "Measurement sweeps per chain");
  sm->add_option("--thermalization", o.thermalization, "Discarded sweeps per chain");
  sm->add_option("--batches", o.batches, "Batches per chain");
  sm->add_option("--seed", o.seed, "RNG seed");
  sm->add_option("--boundary", o.boundary)->check(CLI::IsMember({"periodic", "free"}));
  sm->add_option("--sampler", o.sampler)->check(CLI::IsMember({"cm", "sw"}));
  sm->add_option("--chains", o.chains, "Independent chains (RNG streams 0..chains-1)");
  sm->add_option("--threads", o.threads, "Worker threads for the chains");
  sm->add_option("--p", o.p, "Bond probability (default sqrt q / (1 + sqrt q))");
  sm->add_option("--r", o.r, "Red probability (default 1/q)");
  sm->add_option("--batch-out", o.batch_out, "Write per-batch means as CSV");
  auto* vf = app.add_subcommand("verify", "Deterministic identity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Output out;
    int code = kExitOk;
    if (*t1) {
      out = run_table1();
    } else if (*t2) {
      out = run_table2();
    } else if (*dz) {
      out = run_dozz(o);
    } else if (*cs) {
      out = run_constant(o);
    } else if (*mo) {
      out = run_moments(o);
    } else if (*l0) {
      out = run_lambda0(o);
    } else if (*lg) {
      out = run_logs(o);
    } else if (*ck) {
      out = run_ckappa(o);
    } else if (*sm) {
      out = run_simulate(o);
    } else if (*vf) {
      bool pass = false;
      out = run_verify(pass);
      if (!pass) code = kExitVerify;
    }
    emit(out, o);
    return code;
  } catch (const potts::InsufficientStatistics& e) {
    std::cerr << "insufficient statistics: " << e.what() << "\n";
    return kExitStatistics;
  } catch (const potts::DomainError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

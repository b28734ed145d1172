#pragma once

// Three-point connectivity of red spin clusters in the fuzzy Potts model on a
// finite box, and the normalized ratio P3 / sqrt(P2 P2 P2), in which the
// one-arm normalization cancels.
//
// With r = 1/q the red ratio estimates R(q). The probability that points share
// a spin cluster of any colour is q times the red one, so the any-colour ratio
// is the red ratio divided by sqrt(q); that is the quantity tabulated against
// simulations of spin clusters.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "potts/error.hpp"
#include "potts/mc/clusters.hpp"
#include "potts/mc/estimate.hpp"
#include "potts/mc/lattice.hpp"
#include "potts/mc/rng.hpp"
#include "potts/mc/samplers.hpp"

namespace potts::mc {

enum class SamplerKind { chayes_machta, swendsen_wang };

inline const char* to_string(SamplerKind s) { return s == SamplerKind::chayes_machta ? "cm" : "sw"; }

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// One Monte Carlo run. p defaults to p_critical(q) and r to 1/q.
struct LatticeSim {
  int L = 128;
  Boundary boundary = Boundary::periodic;
  double q = 2.0;
  std::optional<double> p;
  std::optional<double> r;
  long sweeps = 200000;        // measurement sweeps per chain
  long thermalization = 2000;  // discarded sweeps per chain
  std::uint64_t seed = 1;
  int batch_count = 20;  // per chain
  SamplerKind sampler = SamplerKind::chayes_machta;
  int chains = 1;

  double bond_probability() const { return p ? *p : p_critical(q); }
  double red_probability() const { return r ? *r : 1.0 / q; }
  long batch_length() const { return sweeps / batch_count; }

  void validate() const {
    if (L < 8) throw DomainError("LatticeSim: L must be at least 8");
    if (!(q >= 1.0)) throw DomainError("LatticeSim: q must be at least 1");
    const double pp = bond_probability();
    const double rr = red_probability();
    if (!(pp > 0.0 && pp <= 1.0)) throw DomainError("LatticeSim: p must lie in (0, 1]");
    if (!(rr > 0.0 && rr <= 1.0)) throw DomainError("LatticeSim: r must lie in (0, 1]");
    if (batch_count < 10) throw DomainError("LatticeSim: batch_count must be at least 10");
    if (sweeps <= 0 || sweeps % batch_count != 0) {
      throw DomainError("LatticeSim: sweeps must be a positive multiple of batch_count");
    }
    if (thermalization < 0) throw DomainError("LatticeSim: thermalization must be non-negative");
    if (chains < 1) throw DomainError("LatticeSim: chains must be at least 1");
    if (sampler == SamplerKind::swendsen_wang) require_integer_q(q);
  }
};

/// Euclidean distance between two sites; minimal image on the torus.
inline double lattice_distance(Point a, Point b, int L, Boundary boundary) {
  int dx = std::abs(a.x - b.x);
  int dy = std::abs(a.y - b.y);
  if (boundary == Boundary::periodic) {
    dx = std::min(dx, L - dx);
    dy = std::min(dy, L - dy);
  }
  return std::hypot(static_cast<double>(dx), static_cast<double>(dy));
}

/// The most nearly equilateral lattice triangle with a horizontal base of
/// length `side`, centred in the box.
inline std::array<Point, 3> equilateral_triangle(int L, int side) {
  if (side < 1) throw DomainError("equilateral_triangle: side must be positive");
  const int height = static_cast<int>(std::lround(side * std::sqrt(3.0) / 2.0));
  const int apex_dx = static_cast<int>(std::lround(side / 2.0));
  const int x0 = (L - side) / 2;
  const int y0 = (L - height) / 2;
  return {Point{x0, y0}, Point{x0 + side, y0}, Point{x0 + apex_dx, y0 + height}};
}

/// Points must be inside the box with pairwise distances in [4, L/4].
inline void check_points(const LatticeSim& sim, const std::array<Point, 3>& pts) {
  for (const auto& p : pts) {
    if (p.x < 0 || p.y < 0 || p.x >= sim.L || p.y >= sim.L) throw DomainError("connectivity_ratio: point outside the lattice");
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double d = lattice_distance(pts[i], pts[j], sim.L, sim.boundary);
      if (d < 4.0 || d > sim.L / 4.0) {
        throw DomainError("connectivity_ratio: pairwise distance " + std::to_string(d) + " outside [4, L/4]");
      }
    }
  }
}

/// Indicator averages over one batch of measurement sweeps.
struct BatchRecord {
  int index = 0;  // global: chain * batch_count + batch
  int chain = 0;
  double p3 = 0.0;
  double p2_12 = 0.0;
  double p2_23 = 0.0;
  double p2_13 = 0.0;
};

struct ConnectivityResult {
  Estimate p3;
  Estimate p2_12;
  Estimate p2_23;
  Estimate p2_13;
  Estimate ratio;       // P3 / sqrt(P2_12 P2_23 P2_13), jackknife over batches
  Estimate ratio_spin;  // ratio / sqrt(q)
  std::vector<BatchRecord> batches;
  long batch_length = 0;
  double tau_int = 0.0;  // largest batch-implied autocorrelation time of the four indicators
  bool autocorrelation_warning = false;  // batch_length <= tau_int
};

namespace detail {

/// One chain: thermalize from the all-closed configuration, then measure.
/// Each measurement sweep is one sampler update, one fresh colouring and the
/// evaluation of the four indicators.
inline std::vector<BatchRecord> run_chain(const LatticeSim& sim, const std::array<Point, 3>& pts, int chain) {
  const Lattice lat(sim.L, sim.L, sim.boundary);
  const double p = sim.bond_probability();
  const double r = sim.red_probability();
  Xoshiro256 rng(sim.seed, static_cast<std::uint64_t>(chain));
  BondConfig bonds(lat);
  ClusterLabeler labeler;
  ColoredConfig colored;
  std::vector<std::uint8_t> mark;
  UnionFind red_uf;

  // colored.fk always holds the labels of the current bonds.
  labeler.label(lat, bonds, colored.fk);
  auto update = [&] {
    if (sim.sampler == SamplerKind::chayes_machta) {
      chayes_machta_update(bonds, lat, p, sim.q, colored.fk, rng, mark);
    } else {
      swendsen_wang_update(bonds, lat, p, sim.q, colored.fk, rng, mark);
    }
    labeler.label(lat, bonds, colored.fk);
  };

  for (long s = 0; s < sim.thermalization; ++s) update();

  const Lattice::Site z1 = lat.site(pts[0].x, pts[0].y);
  const Lattice::Site z2 = lat.site(pts[1].x, pts[1].y);
  const Lattice::Site z3 = lat.site(pts[2].x, pts[2].y);
  const long len = sim.batch_length();
  std::vector<BatchRecord> out;
  out.reserve(static_cast<std::size_t>(sim.batch_count));
  for (int b = 0; b < sim.batch_count; ++b) {
    long n3 = 0, n12 = 0, n23 = 0, n13 = 0;
    for (long s = 0; s < len; ++s) {
      update();
      color_clusters(lat, r, rng, colored, red_uf);
      const bool c12 = colored.same_red_cluster(z1, z2);
      const bool c23 = colored.same_red_cluster(z2, z3);
      const bool c13 = colored.same_red_cluster(z1, z3);
      n12 += c12;
      n23 += c23;
      n13 += c13;
      n3 += (c12 && c23);
    }
    const double inv = 1.0 / static_cast<double>(len);
    out.push_back({chain * sim.batch_count + b, chain, n3 * inv, n12 * inv, n23 * inv, n13 * inv});
  }
  return out;
}

}  // namespace detail

/// Estimates P3, the three P2's and their normalized ratio. Chains use RNG
/// streams 0..chains-1 of `sim.seed` and may run on up to `threads` workers;
/// the result depends only on `sim`, not on `threads`.
inline ConnectivityResult connectivity_ratio(const LatticeSim& sim, const std::array<Point, 3>& pts, int threads = 1) {
  sim.validate();
  check_points(sim, pts);

  std::vector<std::vector<BatchRecord>> per_chain(static_cast<std::size_t>(sim.chains));
  const int workers = std::clamp(threads, 1, sim.chains);
  if (workers == 1) {
    for (int c = 0; c < sim.chains; ++c) per_chain[c] = detail::run_chain(sim, pts, c);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int c = next++; c < sim.chains; c = next++) per_chain[c] = detail::run_chain(sim, pts, c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ConnectivityResult res;
  for (auto& chain : per_chain) res.batches.insert(res.batches.end(), chain.begin(), chain.end());
  res.batch_length = sim.batch_length();

  std::vector<double> p3, p12, p23, p13;
  for (const auto& b : res.batches) {
    p3.push_back(b.p3);
    p12.push_back(b.p2_12);
    p23.push_back(b.p2_23);
    p13.push_back(b.p2_13);
    if (b.p2_12 == 0.0 || b.p2_23 == 0.0 || b.p2_13 == 0.0) {
      throw InsufficientStatistics("connectivity_ratio: a batch has a vanishing two-point estimate (batch " +
                                   std::to_string(b.index) + ")");
    }
  }
  res.p3 = estimate_from_batches(p3);
  res.p2_12 = estimate_from_batches(p12);
  res.p2_23 = estimate_from_batches(p23);
  res.p2_13 = estimate_from_batches(p13);
  res.ratio = jackknife_from_batches({p3, p12, p23, p13}, [](std::span<const double> m) {
    return m[0] / std::sqrt(m[1] * m[2] * m[3]);
  });
  const double root_q = std::sqrt(sim.q);
  res.ratio_spin = {res.ratio.mean / root_q, res.ratio.std_error / root_q, res.ratio.batch_count};
  for (const auto* series : {&p3, &p12, &p23, &p13}) {
    res.tau_int = std::max(res.tau_int, tau_int_from_batches(*series, res.batch_length));
  }
  res.autocorrelation_warning = static_cast<double>(res.batch_length) <= res.tau_int;
  return res;
}

}  // namespace potts::mc

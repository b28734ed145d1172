#pragma once

// Markov chain updates preserving the FK(p, q) random-cluster measure
//   phi(omega) ~ (p / (1 - p))^{o(omega)} q^{k(omega)},
// and the red/blue colouring that turns an FK sample into a fuzzy Potts one.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "potts/error.hpp"
#include "potts/mc/clusters.hpp"
#include "potts/mc/lattice.hpp"

namespace potts::mc {

/// Self-dual point sqrt(q) / (1 + sqrt(q)) of the square-lattice FK model.
inline double p_critical(double q) {
  if (!(q > 0.0)) throw DomainError("p_critical: q must be positive");
  const double s = std::sqrt(q);
  return s / (1.0 + s);
}

struct SamplerWorkspace {
  ClusterLabeler labeler;
  FkClusters clusters;
  std::vector<std::uint8_t> mark;  // per-root activity / spin
};

namespace detail {

inline void require_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(who) + ": p must lie in [0, 1]");
}

}  // namespace detail

/// Chayes-Machta update given the cluster labels of the current bonds:
/// activate each cluster with probability 1/q, then resample every edge with
/// both endpoints active as Bernoulli(p). Edges touching an inactive cluster
/// keep their state.
template <class Rng>
void chayes_machta_update(BondConfig& bonds, const Lattice& lat, double p, double q, const FkClusters& clusters,
                          Rng& rng, std::vector<std::uint8_t>& active) {
  if (!(q >= 1.0)) throw DomainError("chayes_machta_sweep: q must be at least 1");
  detail::require_probability(p, "chayes_machta_sweep");
  const std::size_t n = lat.sites();
  const double activate = 1.0 / q;
  active.assign(n, 0);
  for (UnionFind::Index v = 0; v < n; ++v) {
    if (clusters.label[v] == v) active[v] = rng.bernoulli(activate) ? 1 : 0;
  }
  for (std::size_t e = 0; e < lat.edges(); ++e) {
    if (!lat.present(e)) continue;
    if (active[clusters.label[lat.tail(e)]] && active[clusters.label[lat.head(e)]]) {
      bonds.open[e] = rng.bernoulli(p) ? 1 : 0;
    }
  }
}

/// One single-replica Chayes-Machta sweep; valid for every real q >= 1 and
/// plain i.i.d. bond resampling at q = 1.
template <class Rng>
void chayes_machta_sweep(BondConfig& bonds, const Lattice& lat, double p, double q, Rng& rng, SamplerWorkspace& ws) {
  ws.labeler.label(lat, bonds, ws.clusters);
  chayes_machta_update(bonds, lat, p, q, ws.clusters, rng, ws.mark);
}

inline void require_integer_q(double q) {
  if (!(q >= 1.0) || q != std::floor(q) || q > 255.0) {
    throw DomainError("swendsen_wang_sweep: q = " + std::to_string(q) + " is not a positive integer");
  }
}

/// Swendsen-Wang update given the current cluster labels: uniform spin per
/// cluster, then each edge is open with probability p if its endpoints agree
/// and closed otherwise.
template <class Rng>
void swendsen_wang_update(BondConfig& bonds, const Lattice& lat, double p, double q, const FkClusters& clusters,
                          Rng& rng, std::vector<std::uint8_t>& spin) {
  require_integer_q(q);
  detail::require_probability(p, "swendsen_wang_sweep");
  const std::size_t n = lat.sites();
  const auto nq = static_cast<std::uint64_t>(q);
  spin.assign(n, 0);
  for (UnionFind::Index v = 0; v < n; ++v) {
    if (clusters.label[v] == v) spin[v] = static_cast<std::uint8_t>(rng.below(nq));
  }
  for (std::size_t e = 0; e < lat.edges(); ++e) {
    if (!lat.present(e)) continue;
    const bool agree = spin[clusters.label[lat.tail(e)]] == spin[clusters.label[lat.head(e)]];
    bonds.open[e] = (agree && rng.bernoulli(p)) ? 1 : 0;
  }
}

template <class Rng>
void swendsen_wang_sweep(BondConfig& bonds, const Lattice& lat, double p, double q, Rng& rng, SamplerWorkspace& ws) {
  ws.labeler.label(lat, bonds, ws.clusters);
  swendsen_wang_update(bonds, lat, p, q, ws.clusters, rng, ws.mark);
}

/// Fuzzy Potts colouring of an FK configuration. Each FK cluster is red with
/// probability r; red spin clusters are the connected components of the red
/// sites under nearest-neighbour adjacency, which can merge adjacent red FK
/// clusters.
struct ColoredConfig {
  static constexpr std::uint32_t kBlue = std::numeric_limits<std::uint32_t>::max();

  FkClusters fk;
  std::vector<std::uint8_t> red;              // per site
  std::vector<std::uint32_t> red_component;  // root site of the red cluster, kBlue if blue

  bool same_red_cluster(Lattice::Site a, Lattice::Site b) const {
    return red_component[a] != kBlue && red_component[a] == red_component[b];
  }
};

/// Colours the clusters `colored.fk` (already labelled) and builds the red
/// components. Colours are drawn for cluster roots in increasing site order.
template <class Rng>
void color_clusters(const Lattice& lat, double r, Rng& rng, ColoredConfig& colored, UnionFind& uf) {
  const std::size_t n = lat.sites();
  const auto& label = colored.fk.label;
  colored.red.assign(n, 0);
  for (UnionFind::Index v = 0; v < n; ++v) {
    if (label[v] == v) colored.red[v] = rng.bernoulli(r) ? 1 : 0;
  }
  for (UnionFind::Index v = 0; v < n; ++v) colored.red[v] = colored.red[label[v]];

  uf.reset(n);
  for (std::size_t e = 0; e < lat.edges(); ++e) {
    if (!lat.present(e)) continue;
    const auto a = lat.tail(e);
    const auto b = lat.head(e);
    if (colored.red[a] && colored.red[b]) uf.unite(a, b);
  }
  colored.red_component.resize(n);
  for (UnionFind::Index v = 0; v < n; ++v) {
    colored.red_component[v] = colored.red[v] ? uf.find(v) : ColoredConfig::kBlue;
  }
}

template <class Rng>
ColoredConfig color_and_label(const Lattice& lat, const BondConfig& bonds, double r, Rng& rng) {
  ColoredConfig out;
  ClusterLabeler labeler;
  labeler.label(lat, bonds, out.fk);
  UnionFind uf;
  color_clusters(lat, r, rng, out, uf);
  return out;
}

}  // namespace potts::mc

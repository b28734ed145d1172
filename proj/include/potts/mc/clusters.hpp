#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "potts/mc/lattice.hpp"

namespace potts::mc {

/// Disjoint-set forest with union by size and path halving.
class UnionFind {
 public:
  using Index = std::uint32_t;

  explicit UnionFind(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n) {
    parent_.resize(n);
    size_.assign(n, 1);
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index find(Index v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<Index> parent_;
  std::vector<Index> size_;
};

/// Connected components of the open-bond graph. label[v] is the root site of
/// v's cluster, so labels are deterministic functions of the bond set.
struct FkClusters {
  std::vector<UnionFind::Index> label;
  std::size_t count = 0;
};

class ClusterLabeler {
 public:
  void label(const Lattice& lat, const BondConfig& bonds, FkClusters& out) {
    const std::size_t n = lat.sites();
    uf_.reset(n);
    for (std::size_t e = 0; e < lat.edges(); ++e) {
      if (bonds.open[e]) uf_.unite(lat.tail(e), lat.head(e));
    }
    out.label.resize(n);
    out.count = 0;
    for (UnionFind::Index v = 0; v < n; ++v) {
      out.label[v] = uf_.find(v);
      if (out.label[v] == v) ++out.count;
    }
  }

  FkClusters label(const Lattice& lat, const BondConfig& bonds) {
    FkClusters c;
    label(lat, bonds, c);
    return c;
  }

 private:
  UnionFind uf_;
};

}  // namespace potts::mc

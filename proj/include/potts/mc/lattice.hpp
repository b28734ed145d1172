#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "potts/error.hpp"

namespace potts::mc {

enum class Boundary { periodic, free };

inline const char* to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "free"; }

/// Lx x Ly piece of Z^2. Sites are numbered row-major, v = y * Lx + x. Edge
/// 2v is the bond v -> v + x_hat, edge 2v + 1 the bond v -> v + y_hat (so the
/// index runs x-then-y within a site, sites row-major). With free boundary
/// the bonds leaving the box are absent and stay closed.
///
/// On a periodic lattice of width 2 the two bonds joining a pair of sites are
/// distinct edges.
class Lattice {
 public:
  using Site = std::uint32_t;

  Lattice(int lx, int ly, Boundary boundary) : lx_(lx), ly_(ly), boundary_(boundary) {
    if (lx < 2 || ly < 2) throw DomainError("Lattice: sides must be at least 2");
    const std::size_t n = sites();
    tail_.resize(2 * n);
    head_.resize(2 * n);
    present_.assign(2 * n, 1);
    for (int y = 0; y < ly; ++y) {
      for (int x = 0; x < lx; ++x) {
        const Site v = site(x, y);
        tail_[2 * v] = v;
        head_[2 * v] = site((x + 1) % lx, y);
        tail_[2 * v + 1] = v;
        head_[2 * v + 1] = site(x, (y + 1) % ly);
        if (boundary == Boundary::free) {
          if (x + 1 == lx) present_[2 * v] = 0;
          if (y + 1 == ly) present_[2 * v + 1] = 0;
        }
      }
    }
    for (auto p : present_) present_count_ += p;
  }

  int lx() const { return lx_; }
  int ly() const { return ly_; }
  Boundary boundary() const { return boundary_; }
  std::size_t sites() const { return static_cast<std::size_t>(lx_) * static_cast<std::size_t>(ly_); }
  /// Size of the edge index space (2 per site, including absent edges).
  std::size_t edges() const { return 2 * sites(); }
  std::size_t present_edges() const { return present_count_; }

  Site site(int x, int y) const { return static_cast<Site>(y * lx_ + x); }
  /// Site at (x, y) with coordinates taken modulo the box.
  Site wrapped_site(int x, int y) const {
    x %= lx_;
    y %= ly_;
    if (x < 0) x += lx_;
    if (y < 0) y += ly_;
    return site(x, y);
  }
  int x_of(Site v) const { return static_cast<int>(v) % lx_; }
  int y_of(Site v) const { return static_cast<int>(v) / lx_; }

  bool present(std::size_t e) const { return present_[e] != 0; }
  Site tail(std::size_t e) const { return tail_[e]; }
  Site head(std::size_t e) const { return head_[e]; }

 private:
  int lx_;
  int ly_;
  Boundary boundary_;
  std::vector<Site> tail_;
  std::vector<Site> head_;
  std::vector<std::uint8_t> present_;
  std::size_t present_count_ = 0;
};

/// Open/closed state of every edge of a Lattice, indexed as in Lattice.
struct BondConfig {
  std::vector<std::uint8_t> open;

  BondConfig() = default;
  explicit BondConfig(const Lattice& lat) : open(lat.edges(), 0) {}

  std::size_t open_count() const {
    std::size_t n = 0;
    for (auto b : open) n += b;
    return n;
  }
  /// Packs the present edges into an integer, lowest edge index in bit 0.
  /// Only meaningful for lattices with at most 64 present edges.
  std::uint64_t pack(const Lattice& lat) const {
    std::uint64_t code = 0;
    int bit = 0;
    for (std::size_t e = 0; e < lat.edges(); ++e) {
      if (!lat.present(e)) continue;
      if (open[e]) code |= (std::uint64_t{1} << bit);
      ++bit;
    }
    return code;
  }
  static BondConfig unpack(const Lattice& lat, std::uint64_t code) {
    BondConfig b(lat);
    int bit = 0;
    for (std::size_t e = 0; e < lat.edges(); ++e) {
      if (!lat.present(e)) continue;
      b.open[e] = static_cast<std::uint8_t>((code >> bit) & 1U);
      ++bit;
    }
    return b;
  }

  friend bool operator==(const BondConfig&, const BondConfig&) = default;
};

}  // namespace potts::mc

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "potts/error.hpp"

namespace potts {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

/// Globally adaptive Gauss-Kronrod (15/31) integration over the consecutive
/// intervals defined by `breakpoints`. The interval with the largest error
/// estimate is bisected until the summed estimate drops below
/// max(abs_tol, rel_tol * |I|). Throws ConvergenceError once more than
/// `max_subdivisions` intervals would be needed.
template <class F>
QuadResult adaptive_gauss_kronrod(F&& f, std::span<const double> breakpoints, double abs_tol,
                                  double rel_tol, int max_subdivisions) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Piece {
    double lo, hi, value, error;
  };
  auto eval = [&](double lo, double hi) {
    double err = 0.0;
    const double v = Rule::integrate(f, lo, hi, 0, 1e-300, &err);
    return Piece{lo, hi, v, std::abs(err)};
  };
  auto by_error = [](const Piece& x, const Piece& y) { return x.error < y.error; };

  if (breakpoints.size() < 2) throw DomainError("adaptive_gauss_kronrod: need at least two breakpoints");
  std::vector<Piece> heap;
  heap.reserve(static_cast<std::size_t>(max_subdivisions) + breakpoints.size());
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) throw DomainError("adaptive_gauss_kronrod: breakpoints not increasing");
    heap.push_back(eval(breakpoints[i], breakpoints[i + 1]));
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  auto totals = [&heap] {
    QuadResult r;
    for (const auto& p : heap) {
      r.value += p.value;
      r.error += p.error;
    }
    r.subdivisions = static_cast<int>(heap.size());
    return r;
  };

  QuadResult r = totals();
  while (r.error > std::max(abs_tol, rel_tol * std::abs(r.value))) {
    if (r.subdivisions >= max_subdivisions) {
      throw ConvergenceError("adaptive_gauss_kronrod: no convergence within " + std::to_string(max_subdivisions) +
                             " subdivisions (error estimate " + std::to_string(r.error) + ")");
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Piece worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) {
      throw ConvergenceError("adaptive_gauss_kronrod: interval exhausted at t = " + std::to_string(mid));
    }
    heap.push_back(eval(worst.lo, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(eval(mid, worst.hi));
    std::push_heap(heap.begin(), heap.end(), by_error);
    r = totals();
  }
  return r;
}

}  // namespace potts

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "potts/error.hpp"

namespace potts::mc {

/// Mean of a stochastic observable with a batch-means error bar:
/// std_error = (sample standard deviation of the batch means) / sqrt(batch_count).
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  int batch_count = 0;
};

inline Estimate estimate_from_batches(std::span<const double> batch_means) {
  const auto n = batch_means.size();
  if (n < 2) throw InsufficientStatistics("estimate_from_batches: need at least two batches");
  double mean = 0.0;
  for (double b : batch_means) mean += b;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double b : batch_means) ss += (b - mean) * (b - mean);
  const double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n)), static_cast<int>(n)};
}

/// Jackknife over batches for a smooth function of several batch-mean series
/// (all of the same length). The point estimate uses the full means.
inline Estimate jackknife_from_batches(const std::vector<std::vector<double>>& series,
                                       const std::function<double(std::span<const double>)>& fn) {
  const std::size_t k = series.size();
  if (k == 0) throw DomainError("jackknife_from_batches: no series");
  const std::size_t n = series.front().size();
  if (n < 2) throw InsufficientStatistics("jackknife_from_batches: need at least two batches");
  std::vector<double> sums(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    for (double b : series[j]) sums[j] += b;
  }
  std::vector<double> args(k);
  for (std::size_t j = 0; j < k; ++j) args[j] = sums[j] / static_cast<double>(n);
  const double full = fn(args);

  std::vector<double> loo(n);
  double loo_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) args[j] = (sums[j] - series[j][i]) / static_cast<double>(n - 1);
    loo[i] = fn(args);
    loo_mean += loo[i];
  }
  loo_mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
  const double var = ss * static_cast<double>(n - 1) / static_cast<double>(n);
  return {full, std::sqrt(var), static_cast<int>(n)};
}

/// Integrated autocorrelation time implied by the spread of batch means of a
/// 0/1 indicator with batch length `batch_length`:
///   2 tau = batch_length * var(batch means) / (p (1 - p)).
/// Returns 0.5 for an observable with no variance.
inline double tau_int_from_batches(std::span<const double> batch_means, long batch_length) {
  const Estimate e = estimate_from_batches(batch_means);
  const double var_single = e.mean * (1.0 - e.mean);
  if (var_single <= 0.0) return 0.5;
  const double var_batch = e.std_error * e.std_error * static_cast<double>(e.batch_count);
  return 0.5 * static_cast<double>(batch_length) * var_batch / var_single;
}

}  // namespace potts::mc

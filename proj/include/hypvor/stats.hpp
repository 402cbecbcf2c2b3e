#pragma once

#include <hypvor/rng.hpp>

#include <cstddef>
#include <functional>
#include <vector>

namespace hypvor {

/// Monte-Carlo statistic: sample mean and its standard error.
struct MCEstimate {
  double mean = 0.0;
  double se = 0.0;  // standard error
  std::size_t n = 0;
  std::size_t excluded = 0;
  Seed seed;

  /// |mean - target| <= k * se.
  bool within(double target, double k = 3.0) const;
  bool valid() const;
};

/// Mean and standard error of a sample, summed in index order.
MCEstimate estimate(const std::vector<double>& xs, const Seed& seed = {}, std::size_t excluded = 0);

double sample_variance(const std::vector<double>& xs);

/// Standard error of the sample variance, from the fourth central moment.
double variance_stderr(const std::vector<double>& xs);

/// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
/// processed exactly once; results must be written to per-index slots.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

/// Worker count for a requested value; 0 means the hardware concurrency.
unsigned resolve_workers(unsigned requested);

}  // namespace hypvor

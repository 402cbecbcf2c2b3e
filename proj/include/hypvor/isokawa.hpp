#pragma once

// Typical-cell reference values and the Monte-Carlo harness around them.

#include <hypvor/rng.hpp>
#include <hypvor/stats.hpp>
#include <hypvor/voronoi.hpp>

#include <cstddef>
#include <vector>

namespace hypvor {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // quadrature error on [0, 50]
  double tail_bound = 0.0;      // bound on the omitted part beyond u = 50
};

/// Mean perimeter of the typical cell at intensity lambda:
/// (8 / sqrt(pi lambda)) * int_0^inf e^-u sqrt(u + u^2 / (4 pi lambda)) du.
QuadratureResult isokawa_perimeter_detail(double lambda);
double isokawa_perimeter(double lambda);

struct RatioRow {
  double lambda = 0.0;
  MCEstimate mean_area;
  MCEstimate mean_perimeter;
  double ratio = 0.0;  // mean_perimeter.mean / mean_area.mean
  double reference_perimeter = 0.0;

  /// lambda * mean perimeter / 2: boundary length per unit area.
  double density() const { return 0.5 * lambda * mean_perimeter.mean; }
};

struct ExperimentOptions {
  unsigned workers = 1;
  TypicalCellOptions cell;
};

RatioRow typical_cell_experiment(double lambda, std::size_t replicas, const Seed& seed,
                                 const ExperimentOptions& opt = {});

/// One row per lambda (descending); row k uses seed.derive(k).
std::vector<RatioRow> density_experiment(const std::vector<double>& lambdas, std::size_t replicas, const Seed& seed,
                                         const ExperimentOptions& opt = {});

}  // namespace hypvor

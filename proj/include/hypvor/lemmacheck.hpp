#pragma once

// Numerical checks of the ring, sine-kernel and thickening estimates.

#include <hypvor/hypmath.hpp>
#include <hypvor/rng.hpp>
#include <hypvor/stats.hpp>

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hypvor {

/// Probability measure on [0, 2pi]: weighted atoms, or a density.
struct AngleMeasure {
  std::vector<double> angles;
  std::vector<double> weights;
  std::function<double(double)> density;  // used when there are no atoms

  static AngleMeasure uniform();
  static AngleMeasure atomic(std::vector<double> angles, std::vector<double> weights);
  static AngleMeasure from_density(std::function<double(double)> f);

  bool is_atomic() const { return !angles.empty(); }
  /// Total mass is 1 within 1e-12 (atoms) or 1e-8 (density).
  bool valid() const;
  AngleMeasure rotated(double shift) const;
};

/// Double integral of |sin((a - b) / 2)| against nu x nu.
double sine_kernel(const AngleMeasure& nu);

/// Area of {z : a <= d(x,z) <= a+eps} intersected with the same ring about y.
double ring_intersection_area(const HPoint& x, const HPoint& y, double a, double eps);

/// Whether the bisector of y and z meets the closed ball B_eps(O), with
/// d(O,z) >= d(O,y). The ball is probed at its centre and on 8 circles of
/// 64 points each, so this is a sampling approximation.
bool a_eps_membership(const HPoint& z, const HPoint& y, double eps);

struct LemmaReport {
  std::string lemma;
  std::vector<std::pair<std::string, double>> params;
  bool verdict = false;
  double max_slack = 0.0;
  std::size_t samples = 0;
  std::size_t members = 0;
  std::size_t violations = 0;
  Seed seed;
  std::string note;
};

/// Samples z uniformly in the ring r <= d(O,z) <= r + 2 eps around y = [r; 0]
/// and checks every member of A^eps against
/// r' - r <= 2 (1 + delta) |sin((theta' - theta) / 2)| eps.
LemmaReport inclusion_check(double r, double eps, double delta, std::size_t samples, const Seed& seed);

/// Area of the eps-neighbourhood of a union of geodesic segments, by
/// sampling padded Fermi rectangles around each segment.
MCEstimate thickened_area(const std::vector<std::pair<HPoint, HPoint>>& segments, double eps, std::size_t samples,
                          const Seed& seed);

/// Area of the eps-neighbourhood of the cell boundary divided by 2 eps.
MCEstimate thickening_perimeter(const ConvexCell& cell, double eps, std::size_t samples, const Seed& seed);

}  // namespace hypvor

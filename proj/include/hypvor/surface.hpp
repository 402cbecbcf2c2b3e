#pragma once

// The Bolza surface: the regular octagon with interior angles pi/4 and
// opposite sides glued by hyperbolic translations.

#include <hypvor/hypmath.hpp>
#include <hypvor/rng.hpp>
#include <hypvor/stats.hpp>
#include <hypvor/voronoi.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace hypvor {

class CutoffTooSmall : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

struct FuchsianGroup {
  std::vector<Isometry> generators;  // generators[k + 4] = generators[k]^-1
  std::string label;
};

struct SurfaceModel {
  FuchsianGroup group;
  ConvexCell domain;  // side k has its midpoint in direction k*pi/4
  int genus = 2;
  double area = 4.0 * kPi;
  double covering_radius = 0.0;  // circumradius of the domain
  double inradius = 0.0;
  double cutoff = 0.0;  // every element with d(O, gO) <= cutoff is enumerated
  std::vector<Isometry> translates;    // sorted by d(O, gO); identity first
  std::vector<double> translate_reach;  // d(O, gO)
  std::size_t max_word_length = 0;      // longest word used by the enumeration

  double systole() const;
};

struct BolzaOptions {
  double cutoff = 10.0;
  std::size_t word_cap = 64;
};

SurfaceModel bolza(const BolzaOptions& opt = {});

struct SurfacePoint {
  HPoint rep;
};

/// Representative in the fundamental octagon. Points on a side of index
/// 4..7 are moved to the paired side 0..3.
SurfacePoint reduce_to_domain(const HPoint& p, const SurfaceModel& surf);

double quotient_distance(const SurfacePoint& x, const SurfacePoint& y, const SurfaceModel& surf);

/// Dirichlet domain of x: points of H closer to x than to any other lift of x.
struct DirichletDomain {
  ConvexCell cell;
  std::vector<double> wall_offsets;  // d(x, g x) for the translate behind each wall
  std::vector<double> wall_angles;   // direction of g x seen from x
  Isometry to_local;                 // moves x to O
};

DirichletDomain dirichlet_domain(const SurfacePoint& x, const SurfaceModel& surf);

/// Finite union of disjoint closed angle intervals inside [0, 2pi).
struct AngleSet {
  std::vector<std::pair<double, double>> intervals;

  double measure() const;
  bool contains(double theta) const;
};

/// I_r(x): angles theta with [r; theta] (polar about x) in the Dirichlet domain.
AngleSet angular_set(const DirichletDomain& dom, double r);
AngleSet angular_set(const SurfacePoint& x, double r, const SurfaceModel& surf);

/// Voronoi tessellation of a Poisson process on the surface. Cells are the
/// planar cells of the nuclei among all their lifts, so each cell lies in the
/// Dirichlet domain of its nucleus.
Tessellation surface_voronoi(double lambda, const SurfaceModel& surf, const Seed& seed);
Tessellation surface_voronoi(const std::vector<HPoint>& nuclei, double lambda, const SurfaceModel& surf);

struct ColoringOutcome {
  double black_area = 0.0;
  double boundary_length = 0.0;
  double cheeger_value = 0.0;  // |dA| / min(|A|, |S| - |A|); infinite if that is 0
  std::size_t cells = 0;
  Seed seed;
};

/// Scores one coloring (colors[i] true = black) of a surface tessellation.
ColoringOutcome score_coloring(const Tessellation& t, const std::vector<bool>& colors, double total_area);

std::vector<bool> random_coloring(std::size_t cells, Rng& rng);

std::vector<ColoringOutcome> coloring_experiment(double lambda, const SurfaceModel& surf, std::size_t trials,
                                                 const Seed& seed, unsigned workers = 1);

struct VarianceCheck {
  double empirical = 0.0;  // sample variance of the black area
  double se = 0.0;         // its standard error
  double predicted = 0.0;  // (1/4) sum |C_i|^2
  std::size_t colorings = 0;
};

/// Black-area variance over fresh colorings of a fixed tessellation.
VarianceCheck conditional_variance(const Tessellation& t, std::size_t colorings, const Seed& seed);

}  // namespace hypvor

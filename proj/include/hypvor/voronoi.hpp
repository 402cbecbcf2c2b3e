#pragma once

// Voronoi cells by incremental half-plane clipping.
//
// Clipping runs in the projective Klein chart centred at the nucleus. The
// starting region is the square |k1|, |k2| <= 2, which contains the whole
// disk, so cells that are not yet closed off are represented exactly: their
// polygon has vertices on or beyond the ideal boundary. A cell is bounded
// once every vertex is an interior (timelike) point.

#include <hypvor/hypmath.hpp>
#include <hypvor/rng.hpp>
#include <hypvor/sampler.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace hypvor {

/// Neighbor tag for a side of the chart square (no site behind it).
inline constexpr int kChartBox = -2;
/// Neighbor tag for the rim of a window.
inline constexpr int kRim = -1;

class UnboundedCell : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class WindowCap : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Convex region of the projective plane: the polygon lies in the Klein
/// chart, and the hyperbolic region is its intersection with the disk.
struct ProjectivePolygon {
  std::vector<Vec3> vertices;  // homogeneous, x0 > 0; on the sheet when timelike
  std::vector<Vec3> walls;     // {x : <x,u> <= 0}; unit spacelike for geodesic walls
  std::vector<int> neighbors;  // site id, or kChartBox

  std::size_t size() const { return vertices.size(); }
  bool bounded() const;
};

/// Incremental Voronoi cell of one nucleus.
class CellClipper {
 public:
  explicit CellClipper(const HPoint& nucleus);

  /// Cuts by the bisector with site; returns true when the cell changed.
  bool clip(const HPoint& site, int id);

  bool bounded() const { return bounded_; }
  /// Largest distance from the nucleus to a vertex; infinite while unbounded.
  double max_vertex_distance() const;
  /// True when no site farther than next_distance can cut the cell.
  bool certified(double next_distance) const;

  const HPoint& nucleus() const { return nucleus_; }
  /// The polygon in the nucleus frame (nucleus at O).
  const ProjectivePolygon& local() const { return poly_; }
  const Isometry& to_global() const { return to_global_; }
  const Isometry& to_local() const { return to_local_; }
  /// Bounded cell in global coordinates; throws UnboundedCell otherwise.
  ConvexCell cell() const;

 private:
  void refresh();

  HPoint nucleus_;
  bool at_origin_ = false;
  Isometry to_global_, to_local_;
  ProjectivePolygon poly_;
  bool bounded_ = false;
  double max_x0_ = 0.0;
};

/// Voronoi cell of nucleus among others. Sites are processed by increasing
/// distance (ties by index) and the scan stops once the cell is certified.
ConvexCell cell_of(const HPoint& nucleus, const std::vector<HPoint>& others);

struct TypicalCellOptions {
  double window_cap = 25.0;
  double margin = 1.0;  // certification: 2 * max vertex distance < R - margin
  SamplerOptions sampler;
};

struct TypicalCellResult {
  ConvexCell cell;
  double window_radius = 0.0;
  std::size_t points = 0;
};

/// Starting window radius: ball about O holding ~100 expected points, at least 3.
double typical_cell_initial_radius(double lambda);

/// Cell of O added to a Poisson process of intensity lambda (Palm cell).
TypicalCellResult typical_cell(double lambda, const Seed& seed, const TypicalCellOptions& opt = {});

/// One piece of the boundary of a cell clipped to a ball: a geodesic side
/// (neighbor >= 0 or kChartBox) or an arc of the rim (neighbor == kRim).
struct BoundaryPiece {
  int neighbor = kRim;
  HPoint start, end;
  double length = 0.0;
  double arc_angle = 0.0;  // rim arcs: angle swept about the ball centre
};

/// Cell polygon intersected with a closed ball, as a counterclockwise
/// boundary loop. Pieces are in the frame where the ball is centred at O.
struct ClippedRegion {
  std::vector<BoundaryPiece> pieces;
  bool covers_ball = false;  // whole ball inside the polygon (no pieces)
  bool empty = false;
  double area = 0.0;
};

/// Clips poly to the ball of the given radius centred at to_ball^-1(O); the
/// result is expressed after applying to_ball.
ClippedRegion clip_to_ball(const ProjectivePolygon& poly, const Isometry& to_ball, double radius);

/// Window of a tessellation: a disk about O or the surface.
struct TessWindow {
  enum class Kind { disk, surface };
  Kind kind = Kind::disk;
  double radius = 0.0;
  double area = 0.0;
};

struct TessSide {
  int neighbor = kRim;
  double length = 0.0;  // length inside the window
};

struct TessCell {
  HPoint nucleus;
  double area = 0.0;          // area inside the window
  std::vector<TessSide> sides;
  std::vector<BoundaryPiece> boundary;  // global coordinates, window-clipped
  std::optional<ConvexCell> polygon;    // set when the full cell is bounded
};

struct Tessellation {
  std::vector<HPoint> nuclei;
  std::vector<TessCell> cells;
  TessWindow window;
  double boundary_length = 0.0;  // interior sides, each counted once

  /// Index of the nucleus nearest to x; ties go to the smaller index.
  std::size_t locate(const HPoint& x) const;
  /// Sum over interior sides of their length inside the ball about O.
  double boundary_length_within(double radius) const;
};

struct TessellateOptions {
  unsigned workers = 1;
};

/// Voronoi tessellation of a disk-window cloud, cells clipped to the disk.
Tessellation tessellate_window(const PointCloud& cloud, const TessellateOptions& opt = {});

}  // namespace hypvor

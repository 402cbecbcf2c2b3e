#pragma once

// Hyperbolic plane primitives in the hyperboloid (Minkowski) model.
//
// Points live on the upper sheet {x : <x,x> = -1, x0 > 0} with
// <a,b> = -a0 b0 + a1 b1 + a2 b2. Geodesics are intersections of the sheet
// with planes through the origin, so half-planes are {x : <x,u> <= 0} for a
// unit spacelike normal u. Disk coordinates exist only as a derived view.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypvor {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Numerical tolerances shared by the geometry kernels.
struct Tolerances {
  double on_hyperboloid = 1e-9;  // |<p,p> + 1|
  double on_wall = 1e-7;         // |<v,u>| for a cell vertex on its wall
  double bisector = 1e-8;        // equidistance residual on a bisector
  double isometry = 1e-9;        // |m^T J m - J|
  double degenerate = 1e-12;     // coincident points / zero-area polygons
  double clip = 1e-11;           // inside test when clipping a polygon
};

const Tolerances& default_tolerances();

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateInput : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Minkowski 3-vector. Used both for points (timelike) and wall normals
/// (spacelike); the role is carried by the wrapping type.
struct Vec3 {
  double x0 = 0.0, x1 = 0.0, x2 = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x0 + o.x0, x1 + o.x1, x2 + o.x2}; }
  Vec3 operator-(const Vec3& o) const { return {x0 - o.x0, x1 - o.x1, x2 - o.x2}; }
  Vec3 operator*(double s) const { return {x0 * s, x1 * s, x2 * s}; }
  Vec3 operator-() const { return {-x0, -x1, -x2}; }
  bool operator==(const Vec3&) const = default;
};

inline double minkowski(const Vec3& a, const Vec3& b) {
  return -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2;
}

/// The vector orthogonal (in the Minkowski sense) to both a and b.
inline Vec3 minkowski_cross(const Vec3& a, const Vec3& b) {
  // J (a x b): <J c, v> = c . v
  return {-(a.x1 * b.x2 - a.x2 * b.x1), a.x2 * b.x0 - a.x0 * b.x2, a.x0 * b.x1 - a.x1 * b.x0};
}

/// A point of the hyperbolic plane.
struct HPoint {
  Vec3 v{1.0, 0.0, 0.0};

  HPoint() = default;
  /// Wraps raw coordinates without normalization.
  static HPoint raw(double x0, double x1, double x2) {
    HPoint p;
    p.v = {x0, x1, x2};
    return p;
  }
  /// Rescales a future-pointing timelike vector onto the sheet.
  static HPoint normalized(const Vec3& w);

  double x0() const { return v.x0; }
  double x1() const { return v.x1; }
  double x2() const { return v.x2; }
};

/// Origin of the disk / hyperboloid.
inline HPoint origin() { return HPoint{}; }

struct PolarCoord {
  double r = 0.0;
  double theta = 0.0;
};

struct DiskPoint {
  double u = 0.0, v = 0.0;
};

HPoint from_polar(double r, double theta);
PolarCoord to_polar(const HPoint& p);
DiskPoint to_disk(const HPoint& p);
HPoint from_disk(const DiskPoint& z);

bool on_hyperboloid(const HPoint& p, double tol = default_tolerances().on_hyperboloid);

double dist(const HPoint& p, const HPoint& q);

/// Side length of the triangle with two sides d, r enclosing angle theta.
double law_of_cosines(double d, double r, double theta);

double ball_area(double r);
double ball_circumference(double r);
/// Inverse of ball_area.
double ball_radius_for_area(double area);

/// The closed half-plane {x : <x,u> <= 0} bounded by a geodesic.
struct HalfSpace {
  Vec3 u{0.0, 1.0, 0.0};

  /// Value of <p,u>; equals sinh of the signed distance from p to the wall.
  double eval(const HPoint& p) const { return minkowski(p.v, u); }
  bool contains(const HPoint& p, double tol = 0.0) const { return eval(p) <= tol; }
  HalfSpace complement() const { return HalfSpace{-u}; }
  double signed_distance(const HPoint& p) const { return std::asinh(eval(p)); }
};

/// Half-plane of points closer to p than to q.
HalfSpace bisector(const HPoint& p, const HPoint& q);

/// Geodesic through p in direction of the unit tangent t at p.
HPoint geodesic_point(const HPoint& p, const Vec3& unit_tangent, double t);
/// Unit tangent at p pointing toward q.
Vec3 unit_tangent(const HPoint& p, const HPoint& q);
HPoint midpoint(const HPoint& p, const HPoint& q);
/// Intersection point of two geodesic walls; throws if they do not meet.
HPoint wall_intersection(const HalfSpace& a, const HalfSpace& b);

/// Orientation-of-time preserving isometry in O(2,1), stored as a matrix
/// acting on column vectors.
struct Isometry {
  std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  static Isometry identity() { return {}; }
  static Isometry rotation(double alpha);
  /// Translation by t along the geodesic through O with direction phi.
  static Isometry translation(double t, double phi = 0.0);
  /// Reflection in the boundary geodesic of h.
  static Isometry reflection(const HalfSpace& h);
  /// The translation along the geodesic O -> p taking O to p.
  static Isometry moving_origin_to(const HPoint& p);

  Vec3 act(const Vec3& w) const;
  double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
  bool is_valid(double tol = default_tolerances().isometry) const;
};

HPoint apply(const Isometry& g, const HPoint& p);
HalfSpace apply(const Isometry& g, const HalfSpace& h);
Isometry compose(const Isometry& g, const Isometry& h);  // g after h
Isometry inverse(const Isometry& g);
/// Translation length; 0 for elliptic or parabolic elements.
double translation_length(const Isometry& g);
double matrix_distance(const Isometry& a, const Isometry& b);

/// A compact convex polygon with a distinguished interior point.
/// walls[i] carries the edge from vertices[i] to vertices[i+1];
/// neighbors[i] tags the site that generated walls[i] (-1 for a rim or box).
struct ConvexCell {
  HPoint nucleus;
  std::vector<HPoint> vertices;
  std::vector<HalfSpace> walls;
  std::vector<int> neighbors;

  std::size_t size() const { return vertices.size(); }
  bool contains(const HPoint& p, double tol = 0.0) const;
  double max_vertex_distance() const;
};

/// Builds a cell from counterclockwise vertices; rejects non-convex or
/// zero-area input.
ConvexCell make_polygon(const HPoint& interior, const std::vector<HPoint>& vertices);

/// Regular n-gon centred at O with the given interior angle; the first vertex
/// sits at angle phase.
ConvexCell regular_polygon(int n, double interior_angle, double phase = 0.0);

/// Triangle with prescribed interior angles; throws DegenerateInput when the
/// angle sum is not below pi.
ConvexCell triangle_from_angles(double alpha, double beta, double gamma);

std::vector<double> interior_angles(const ConvexCell& c);
double polygon_area(const ConvexCell& c);
double polygon_perimeter(const ConvexCell& c);
/// Checks the structural invariants (walls through vertices, nucleus inside,
/// counterclockwise order). Returns an empty string when they hold.
std::string check_cell(const ConvexCell& c, const Tolerances& tol = default_tolerances());

/// Length of the part of the geodesic segment [a,b] inside the closed ball
/// of radius radius about center.
double segment_length_in_ball(const HPoint& a, const HPoint& b, const HPoint& center, double radius);

/// Distance from p to the geodesic segment [a,b].
double distance_to_segment(const HPoint& p, const HPoint& a, const HPoint& b);

}  // namespace hypvor

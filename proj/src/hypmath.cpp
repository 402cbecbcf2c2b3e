#include <hypvor/hypmath.hpp>

#include <algorithm>
#include <sstream>

namespace hypvor {

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

HPoint HPoint::normalized(const Vec3& w) {
  double n2 = -minkowski(w, w);
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw GeometryError("HPoint::normalized: vector is not timelike");
  }
  double s = 1.0 / std::sqrt(n2);
  if (w.x0 < 0.0) s = -s;
  HPoint p;
  p.v.x1 = w.x1 * s;
  p.v.x2 = w.x2 * s;
  p.v.x0 = std::sqrt(1.0 + p.v.x1 * p.v.x1 + p.v.x2 * p.v.x2);
  return p;
}

HPoint from_polar(double r, double theta) {
  double sh = std::sinh(r);
  return HPoint::raw(std::cosh(r), sh * std::cos(theta), sh * std::sin(theta));
}

PolarCoord to_polar(const HPoint& p) {
  double rho = std::hypot(p.x1(), p.x2());
  double theta = std::atan2(p.x2(), p.x1());
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta -= kTwoPi;
  return {std::asinh(rho), theta};
}

DiskPoint to_disk(const HPoint& p) {
  double s = 1.0 / (1.0 + p.x0());
  return {p.x1() * s, p.x2() * s};
}

HPoint from_disk(const DiskPoint& z) {
  double s = z.u * z.u + z.v * z.v;
  if (!(s < 1.0)) throw GeometryError("from_disk: point outside the unit disk");
  double k = 1.0 / (1.0 - s);
  return HPoint::raw((1.0 + s) * k, 2.0 * z.u * k, 2.0 * z.v * k);
}

bool on_hyperboloid(const HPoint& p, double tol) {
  return std::abs(minkowski(p.v, p.v) + 1.0) <= tol * std::max(1.0, p.x0() * p.x0()) && p.x0() >= 1.0 - tol;
}

double dist(const HPoint& p, const HPoint& q) {
  double c = -minkowski(p.v, q.v);
  if (c < 2.0) {
    // Short distances: the chord form avoids the arcosh cancellation near 1.
    Vec3 w = p.v - q.v;
    double n2 = std::max(0.0, minkowski(w, w));
    return 2.0 * std::asinh(0.5 * std::sqrt(n2));
  }
  return std::acosh(c);
}

double law_of_cosines(double d, double r, double theta) {
  double s = std::sin(0.5 * theta);
  double h = std::sinh(0.5 * (d - r));
  // (cosh a - 1) / 2 = sinh^2((d-r)/2) + sin^2(theta/2) sinh d sinh r
  double half = h * h + s * s * std::sinh(d) * std::sinh(r);
  return 2.0 * std::asinh(std::sqrt(std::max(0.0, half)));
}

double ball_area(double r) {
  double s = std::sinh(0.5 * r);
  return 4.0 * kPi * s * s;
}

double ball_circumference(double r) { return kTwoPi * std::sinh(r); }

double ball_radius_for_area(double area) {
  return 2.0 * std::asinh(std::sqrt(std::max(0.0, area) / (4.0 * kPi)));
}

HalfSpace bisector(const HPoint& p, const HPoint& q) {
  Vec3 w = q.v - p.v;
  double n2 = minkowski(w, w);
  double eps = default_tolerances().degenerate;
  if (!(n2 > eps * eps)) throw DegenerateInput("bisector: coincident points");
  return HalfSpace{w * (1.0 / std::sqrt(n2))};
}

HPoint geodesic_point(const HPoint& p, const Vec3& t, double s) {
  return HPoint::normalized(p.v * std::cosh(s) + t * std::sinh(s));
}

Vec3 unit_tangent(const HPoint& p, const HPoint& q) {
  Vec3 diff = q.v - p.v;
  double cm1 = 0.5 * minkowski(diff, diff);  // -<p,q> - 1
  Vec3 w = diff - p.v * cm1;
  double n2 = minkowski(w, w);
  if (!(n2 > 0.0)) throw DegenerateInput("unit_tangent: coincident points");
  return w * (1.0 / std::sqrt(n2));
}

HPoint midpoint(const HPoint& p, const HPoint& q) { return HPoint::normalized(p.v + q.v); }

HPoint wall_intersection(const HalfSpace& a, const HalfSpace& b) {
  Vec3 w = minkowski_cross(a.u, b.u);
  double n2 = -minkowski(w, w);
  if (!(n2 > 0.0)) throw GeometryError("wall_intersection: walls do not meet");
  return HPoint::normalized(w.x0 < 0.0 ? -w : w);
}

Isometry Isometry::rotation(double alpha) {
  Isometry g;
  double c = std::cos(alpha), s = std::sin(alpha);
  g.m = {{{1, 0, 0}, {0, c, -s}, {0, s, c}}};
  return g;
}

Isometry Isometry::translation(double t, double phi) {
  return moving_origin_to(from_polar(t, phi));
}

Isometry Isometry::reflection(const HalfSpace& h) {
  const Vec3& u = h.u;
  std::array<double, 3> uv{u.x0, u.x1, u.x2};
  std::array<double, 3> ju{-u.x0, u.x1, u.x2};
  Isometry g;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) g.m[i][k] = (i == k ? 1.0 : 0.0) - 2.0 * uv[i] * ju[k];
  return g;
}

Isometry Isometry::moving_origin_to(const HPoint& p) {
  double x0 = p.x0(), x1 = p.x1(), x2 = p.x2();
  double k = 1.0 / (1.0 + x0);
  Isometry g;
  g.m = {{{x0, x1, x2}, {x1, 1.0 + x1 * x1 * k, x1 * x2 * k}, {x2, x1 * x2 * k, 1.0 + x2 * x2 * k}}};
  return g;
}

Vec3 Isometry::act(const Vec3& w) const {
  return {m[0][0] * w.x0 + m[0][1] * w.x1 + m[0][2] * w.x2,
          m[1][0] * w.x0 + m[1][1] * w.x1 + m[1][2] * w.x2,
          m[2][0] * w.x0 + m[2][1] * w.x1 + m[2][2] * w.x2};
}

bool Isometry::is_valid(double tol) const {
  static constexpr std::array<double, 3> j{-1.0, 1.0, 1.0};
  double scale = 1.0;
  for (const auto& row : m)
    for (double x : row) scale = std::max(scale, x * x);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m[k][a] * j[k] * m[k][b];
      double want = a == b ? j[a] : 0.0;
      if (std::abs(s - want) > tol * scale) return false;
    }
  }
  return m[0][0] > 0.0;
}

HPoint apply(const Isometry& g, const HPoint& p) {
  // Far from O the quadratic form cancels badly, so the image is projected
  // back onto the sheet through its spatial part.
  Vec3 w = g.act(p.v);
  if (!(w.x0 > 0.0) || !std::isfinite(w.x0)) throw GeometryError("apply: image is not a point of the plane");
  return HPoint::raw(std::sqrt(1.0 + w.x1 * w.x1 + w.x2 * w.x2), w.x1, w.x2);
}

HalfSpace apply(const Isometry& g, const HalfSpace& h) {
  Vec3 w = g.act(h.u);
  return HalfSpace{w * (1.0 / std::sqrt(minkowski(w, w)))};
}

Isometry compose(const Isometry& g, const Isometry& h) {
  Isometry r;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r.m[i][k] = g.m[i][0] * h.m[0][k] + g.m[i][1] * h.m[1][k] + g.m[i][2] * h.m[2][k];
  return r;
}

Isometry inverse(const Isometry& g) {
  static constexpr std::array<double, 3> j{-1.0, 1.0, 1.0};
  Isometry r;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r.m[i][k] = j[i] * g.m[k][i] * j[k];
  return r;
}

double translation_length(const Isometry& g) {
  const auto& m = g.m;
  double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  // Eigenvalues are (e^l, e^-l, +1) for a translation and (e^l, e^-l, -1)
  // for a glide reflection.
  double c = det > 0.0 ? 0.5 * (g.trace() - 1.0) : 0.5 * (g.trace() + 1.0);
  return c > 1.0 ? std::acosh(c) : 0.0;
}

double matrix_distance(const Isometry& a, const Isometry& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(a.m[i][k] - b.m[i][k]));
  return d;
}

bool ConvexCell::contains(const HPoint& p, double tol) const {
  for (const auto& w : walls)
    if (w.eval(p) > tol) return false;
  return true;
}

double ConvexCell::max_vertex_distance() const {
  double r = 0.0;
  for (const auto& v : vertices) r = std::max(r, dist(nucleus, v));
  return r;
}

namespace {

double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
  return a.x0 * (b.x1 * c.x2 - b.x2 * c.x1) - a.x1 * (b.x0 * c.x2 - b.x2 * c.x0) + a.x2 * (b.x0 * c.x1 - b.x1 * c.x0);
}

}  // namespace

ConvexCell make_polygon(const HPoint& interior, const std::vector<HPoint>& vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw DegenerateInput("make_polygon: need at least three vertices");
  ConvexCell c;
  c.nucleus = interior;
  c.vertices = vertices;
  c.walls.reserve(n);
  c.neighbors.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const HPoint& a = vertices[i];
    const HPoint& b = vertices[(i + 1) % n];
    const HPoint& next = vertices[(i + 2) % n];
    // Positive determinant means a, b, next turn counterclockwise.
    double det = det3(a.v, b.v, next.v);
    double scale = a.x0() * b.x0() * next.x0();
    if (!(det > default_tolerances().degenerate * scale)) {
      throw DegenerateInput("make_polygon: vertices are not strictly convex and counterclockwise");
    }
    Vec3 w = minkowski_cross(b.v, a.v);
    double n2 = minkowski(w, w);
    if (!(n2 > 0.0)) throw DegenerateInput("make_polygon: repeated vertex");
    c.walls.push_back(HalfSpace{w * (1.0 / std::sqrt(n2))});
  }
  for (const auto& w : c.walls) {
    if (!(w.eval(interior) < 0.0)) throw DegenerateInput("make_polygon: interior point outside polygon");
  }
  return c;
}

ConvexCell regular_polygon(int n, double interior_angle, double phase) {
  if (n < 3) throw DegenerateInput("regular_polygon: n < 3");
  double c = 1.0 / (std::tan(kPi / n) * std::tan(0.5 * interior_angle));
  if (!(c > 1.0)) throw DegenerateInput("regular_polygon: angle too large for a hyperbolic polygon");
  double r = std::acosh(c);
  std::vector<HPoint> v;
  for (int k = 0; k < n; ++k) v.push_back(from_polar(r, phase + kTwoPi * k / n));
  return make_polygon(origin(), v);
}

ConvexCell triangle_from_angles(double alpha, double beta, double gamma) {
  if (!(alpha > 0 && beta > 0 && gamma > 0) || !(alpha + beta + gamma < kPi - default_tolerances().degenerate)) {
    throw DegenerateInput("triangle_from_angles: angle sum must be below pi");
  }
  double cc = (std::cos(alpha) * std::cos(beta) + std::cos(gamma)) / (std::sin(alpha) * std::sin(beta));
  double cb = (std::cos(alpha) * std::cos(gamma) + std::cos(beta)) / (std::sin(alpha) * std::sin(gamma));
  HPoint a = origin();
  HPoint b = from_polar(std::acosh(cc), 0.0);
  HPoint c = from_polar(std::acosh(cb), alpha);
  HPoint inside = HPoint::normalized(a.v + b.v + c.v);
  return make_polygon(inside, {a, b, c});
}

std::vector<double> interior_angles(const ConvexCell& c) {
  const std::size_t n = c.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const HPoint& v = c.vertices[i];
    Vec3 t1 = unit_tangent(v, c.vertices[(i + n - 1) % n]);
    Vec3 t2 = unit_tangent(v, c.vertices[(i + 1) % n]);
    double cosv = minkowski(t1, t2);
    double sinv = std::abs(minkowski(minkowski_cross(t1, t2), v.v));
    out[i] = std::atan2(sinv, cosv);
  }
  return out;
}

double polygon_area(const ConvexCell& c) {
  if (c.size() < 3) throw DegenerateInput("polygon_area: fewer than three vertices");
  double sum = 0.0;
  for (double a : interior_angles(c)) sum += a;
  double area = (static_cast<double>(c.size()) - 2.0) * kPi - sum;
  if (!(area > default_tolerances().degenerate)) throw DegenerateInput("polygon_area: degenerate polygon");
  return area;
}

double polygon_perimeter(const ConvexCell& c) {
  double p = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) p += dist(c.vertices[i], c.vertices[(i + 1) % c.size()]);
  return p;
}

std::string check_cell(const ConvexCell& c, const Tolerances& tol) {
  std::ostringstream err;
  const std::size_t n = c.size();
  if (n < 3) return "fewer than three vertices";
  if (c.walls.size() != n) return "wall count differs from vertex count";
  for (std::size_t i = 0; i < n; ++i) {
    if (!(c.walls[i].eval(c.nucleus) < 0.0)) {
      err << "nucleus not strictly inside wall " << i;
      return err.str();
    }
    const HPoint& v = c.vertices[i];
    double a = c.walls[(i + n - 1) % n].eval(v);
    double b = c.walls[i].eval(v);
    if (std::abs(a) > tol.on_wall || std::abs(b) > tol.on_wall) {
      err << "vertex " << i << " off its walls (" << a << ", " << b << ")";
      return err.str();
    }
    double det = det3(v.v, c.vertices[(i + 1) % n].v, c.vertices[(i + 2) % n].v);
    if (!(det > 0.0)) {
      err << "vertices " << i << ".." << i + 2 << " not counterclockwise";
      return err.str();
    }
  }
  return {};
}

double segment_length_in_ball(const HPoint& a, const HPoint& b, const HPoint& center, double radius) {
  double len = dist(a, b);
  if (len <= 0.0) return 0.0;
  Isometry to_center = inverse(Isometry::moving_origin_to(center));
  HPoint la = apply(to_center, a);
  HPoint lb = apply(to_center, b);
  Vec3 t = unit_tangent(la, lb);
  // x0 along the geodesic: A cosh s + B sinh s, convex in s.
  double A = la.x0(), B = t.x0, C = std::cosh(radius);
  double disc = C * C - (A * A - B * B);
  if (disc <= 0.0) return 0.0;
  double sq = std::sqrt(disc);
  double lo = std::log((C - sq) / (A + B));
  double hi = std::log((C + sq) / (A + B));
  lo = std::max(lo, 0.0);
  hi = std::min(hi, len);
  return std::max(0.0, hi - lo);
}

double distance_to_segment(const HPoint& p, const HPoint& a, const HPoint& b) {
  double len = dist(a, b);
  if (len <= default_tolerances().degenerate) return dist(p, a);
  Vec3 w = minkowski_cross(a.v, b.v);
  Vec3 u = w * (1.0 / std::sqrt(minkowski(w, w)));
  double s = minkowski(p.v, u);
  HPoint foot = HPoint::normalized(p.v - u * s);
  Vec3 t = unit_tangent(a, b);
  double along = std::asinh(minkowski(foot.v, t));
  if (along >= 0.0 && along <= len) return std::abs(std::asinh(s));
  return std::min(dist(p, a), dist(p, b));
}

}  // namespace hypvor

#include <hypvor/voronoi.hpp>

#include <hypvor/spatial_index.hpp>
#include <hypvor/stats.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace hypvor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool interior(const Vec3& v) { return minkowski(v, v) < -0.5; }

// Puts a homogeneous vertex in canonical form: on the sheet when it is an
// interior point, otherwise scaled to x0 = 1 (Klein coordinates).
Vec3 canonical_vertex(Vec3 w) {
  if (w.x0 < 0.0) w = -w;
  double q = -minkowski(w, w);
  if (q > 1e-20 * w.x0 * w.x0) return HPoint::normalized(w).v;
  if (w.x0 > 0.0) return w * (1.0 / w.x0);
  return w;
}

Vec3 unit_spacelike(const Vec3& u) {
  double n2 = minkowski(u, u);
  if (!(n2 > 0.0)) return u;
  return u * (1.0 / std::sqrt(n2));
}

bool same_vertex(const Vec3& a, const Vec3& b) {
  if (interior(a) && interior(b)) {
    Vec3 d = a - b;
    return minkowski(d, d) < 1e-22;
  }
  if (interior(a) != interior(b)) return false;
  double dk1 = a.x1 / a.x0 - b.x1 / b.x0, dk2 = a.x2 / a.x0 - b.x2 / b.x0;
  return dk1 * dk1 + dk2 * dk2 < 1e-28;
}

double wrap_positive(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

}  // namespace

bool ProjectivePolygon::bounded() const {
  return std::all_of(vertices.begin(), vertices.end(), [](const Vec3& v) { return interior(v); });
}

// ---------------------------------------------------------------------------
// CellClipper

CellClipper::CellClipper(const HPoint& nucleus)
    : nucleus_(nucleus), at_origin_(nucleus.x1() == 0.0 && nucleus.x2() == 0.0) {
  to_global_ = Isometry::moving_origin_to(nucleus);
  to_local_ = inverse(to_global_);
  // Chart square |k1|, |k2| <= 2, counterclockwise.
  poly_.vertices = {{1, 2, -2}, {1, 2, 2}, {1, -2, 2}, {1, -2, -2}};
  poly_.walls = {{2, 1, 0}, {2, 0, 1}, {2, -1, 0}, {2, 0, -1}};
  poly_.neighbors = {kChartBox, kChartBox, kChartBox, kChartBox};
  refresh();
}

void CellClipper::refresh() {
  bounded_ = poly_.bounded();
  max_x0_ = 0.0;
  if (bounded_)
    for (const auto& v : poly_.vertices) max_x0_ = std::max(max_x0_, v.x0);
}

double CellClipper::max_vertex_distance() const {
  return bounded_ ? std::acosh(std::max(1.0, max_x0_)) : kInf;
}

bool CellClipper::certified(double next_distance) const {
  return bounded_ && next_distance > 2.0 * max_vertex_distance();
}

bool CellClipper::clip(const HPoint& site, int id) {
  HPoint p = at_origin_ ? site : apply(to_local_, site);
  // cosh(2d) = 2 cosh(d)^2 - 1 bounds the sites that can still cut.
  if (bounded_ && p.x0() > 2.0 * max_x0_ * max_x0_ - 1.0) return false;

  double rho2 = p.x1() * p.x1() + p.x2() * p.x2();  // sinh^2 r
  if (rho2 < 1e-20) throw DegenerateInput("clip: site coincides with the nucleus");
  double cm1 = rho2 / (p.x0() + 1.0);  // cosh r - 1
  double norm = std::sqrt(2.0 * cm1);
  Vec3 u{cm1 / norm, p.x1() / norm, p.x2() / norm};

  const auto& verts = poly_.vertices;
  std::size_t n = verts.size();
  const double eps = default_tolerances().clip;
  std::vector<double> s(n);
  bool any_out = false;
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = minkowski(verts[i], u);
    any_out = any_out || s[i] > eps;
  }
  if (!any_out) return false;

  struct Entry {
    Vec3 v, wall;
    int id;
  };
  std::vector<Entry> out;
  out.reserve(n + 2);
  auto push = [&](const Vec3& v, const Vec3& wall, int nb) {
    if (!out.empty() && same_vertex(out.back().v, v)) {
      out.back().wall = wall;
      out.back().id = nb;
      return;
    }
    out.push_back({v, wall, nb});
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (i + 1) % n;
    bool in_i = s[i] <= eps, in_j = s[j] <= eps;
    const Vec3& wall = poly_.walls[i];
    int nb = poly_.neighbors[i];
    if (in_i) {
      push(verts[i], wall, nb);
      if (!in_j) push(canonical_vertex(minkowski_cross(wall, u)), u, id);
    } else if (in_j) {
      push(canonical_vertex(minkowski_cross(wall, u)), wall, nb);
    }
  }
  while (out.size() > 1 && same_vertex(out.back().v, out.front().v)) out.pop_back();
  if (out.size() < 3) throw GeometryError("clip: cell collapsed");

  poly_.vertices.clear();
  poly_.walls.clear();
  poly_.neighbors.clear();
  for (const auto& e : out) {
    poly_.vertices.push_back(e.v);
    poly_.walls.push_back(e.wall);
    poly_.neighbors.push_back(e.id);
  }
  refresh();
  return true;
}

ConvexCell CellClipper::cell() const {
  if (!bounded_) throw UnboundedCell("cell is not bounded by the given sites");
  ConvexCell c;
  c.nucleus = nucleus_;
  for (std::size_t i = 0; i < poly_.size(); ++i) {
    c.vertices.push_back(at_origin_ ? HPoint::normalized(poly_.vertices[i]) : apply(to_global_, HPoint::normalized(poly_.vertices[i])));
    c.walls.push_back(HalfSpace{unit_spacelike(at_origin_ ? poly_.walls[i] : to_global_.act(poly_.walls[i]))});
    c.neighbors.push_back(poly_.neighbors[i]);
  }
  return c;
}

ConvexCell cell_of(const HPoint& nucleus, const std::vector<HPoint>& others) {
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(others.size());
  for (std::size_t i = 0; i < others.size(); ++i) {
    double d = dist(nucleus, others[i]);
    if (d <= 1e-10) throw DegenerateInput("cell_of: nucleus coincides with another site");
    order.emplace_back(d, i);
  }
  std::sort(order.begin(), order.end());
  CellClipper clipper(nucleus);
  for (const auto& [d, i] : order) {
    if (clipper.certified(d)) break;
    clipper.clip(others[i], static_cast<int>(i));
  }
  return clipper.cell();
}

// ---------------------------------------------------------------------------
// Typical cell

double typical_cell_initial_radius(double lambda) {
  return std::max(3.0, std::acosh(1.0 + 100.0 / (kTwoPi * lambda)));
}

TypicalCellResult typical_cell(double lambda, const Seed& seed, const TypicalCellOptions& opt) {
  if (!(lambda > 0.0)) throw SamplingError("typical_cell: intensity must be positive");
  Rng rng(seed);
  auto check_window = [&](double r) {
    if (lambda * ball_area(r) > opt.sampler.max_expected_count)
      throw WindowCap("typical_cell: expected point count exceeds the cap");
  };
  double radius = std::min(opt.window_cap, typical_cell_initial_radius(lambda));
  check_window(radius);
  std::vector<HPoint> pts;
  append_poisson_annulus(rng, lambda, 0.0, radius, pts, opt.sampler);
  for (;;) {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order.emplace_back(pts[i].x0(), i);
    std::sort(order.begin(), order.end());
    CellClipper clipper(origin());
    for (const auto& [x0, i] : order) {
      if (clipper.certified(std::acosh(x0))) break;
      clipper.clip(pts[i], static_cast<int>(i));
    }
    double maxvd = clipper.max_vertex_distance();
    if (clipper.bounded() && 2.0 * maxvd < radius - opt.margin) {
      return {clipper.cell(), radius, pts.size()};
    }
    if (radius >= opt.window_cap) throw WindowCap("typical_cell: window radius cap reached");
    double grown = clipper.bounded() ? std::max(radius + 1.0, 2.0 * maxvd + opt.margin + 0.25) : radius + 1.5;
    grown = std::min(opt.window_cap, grown);
    check_window(grown);
    append_poisson_annulus(rng, lambda, radius, grown, pts, opt.sampler);
    radius = grown;
  }
}

// ---------------------------------------------------------------------------
// Clipping a cell to a ball

namespace {

// A geodesic in the ball frame, parametrized by arclength t from its foot F,
// the point nearest to O: x(t) = cosh t F + sinh t D.
struct Line {
  double ch_h = 1.0, sh_h = 0.0;  // signed distance h from O to the foot
  double phi = 0.0;               // polar angle of the foot for h > 0
  Vec3 dir;                       // D, unit tangent at the foot

  static Line from_normal(const Vec3& u) {
    Line l;
    l.sh_h = u.x0;
    l.ch_h = std::sqrt(1.0 + u.x0 * u.x0);
    l.phi = std::atan2(u.x2, u.x1);
    l.dir = {0.0, -std::sin(l.phi), std::cos(l.phi)};
    return l;
  }
  HPoint point(double t) const {
    double ch = std::cosh(t), sh = std::sinh(t), c = std::cos(phi), s = std::sin(phi);
    return HPoint::raw(ch_h * ch, sh_h * ch * c - sh * s, sh_h * ch * s + sh * c);
  }
  // Polar angle of x(t); exact on the rim where the coordinates are large.
  double angle(double t) const { return phi + std::atan2(std::sinh(t), sh_h * std::cosh(t)); }
};

struct EdgePiece {
  int neighbor;
  Line line;
  double t_start, t_end;  // in traversal order
  bool start_on_rim, end_on_rim;
};

// Integral of (cosh r - 1) dtheta along the geodesic segment a -> b, which is
// the signed area of the triangle O a b.
double signed_sector(const HPoint& a, const HPoint& b) {
  double det = a.x1() * b.x2() - a.x2() * b.x1();
  double ch_ab = std::max(1.0, -minkowski(a.v, b.v));
  return 2.0 * std::atan(det / (1.0 + a.x0() + b.x0() + ch_ab));
}

}  // namespace

ClippedRegion clip_to_ball(const ProjectivePolygon& poly, const Isometry& to_ball, double radius) {
  ClippedRegion region;
  const double ch_r = std::cosh(radius);
  const std::size_t n = poly.size();
  std::vector<Vec3> verts(n);
  std::vector<bool> inner(n);
  for (std::size_t i = 0; i < n; ++i) {
    inner[i] = interior(poly.vertices[i]);
    verts[i] = inner[i] ? apply(to_ball, HPoint::normalized(poly.vertices[i])).v : to_ball.act(poly.vertices[i]);
  }

  std::vector<EdgePiece> pieces;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& u = poly.walls[i];
    if (poly.neighbors[i] == kChartBox || !(minkowski(u, u) > 0.0)) continue;
    Line line = Line::from_normal(unit_spacelike(to_ball.act(u)));
    if (line.ch_h >= ch_r) continue;
    const double big_t = std::acosh(ch_r / line.ch_h);
    // Along the line, sinh t = <x, D>; a vertex beyond the ideal boundary
    // sits past the end that <w, D> points to.
    auto param = [&](std::size_t k) {
      double beta = minkowski(verts[k], line.dir);
      if (inner[k]) return std::asinh(beta);
      return beta > 0.0 ? kInf : -kInf;
    };
    double ta = param(i), tb = param((i + 1) % n);
    double lo = std::max(std::min(ta, tb), -big_t);
    double hi = std::min(std::max(ta, tb), big_t);
    if (!(hi - lo > 1e-13)) continue;
    bool forward = tb > ta;
    EdgePiece e{poly.neighbors[i], line, forward ? lo : hi, forward ? hi : lo, std::abs(ta) >= big_t,
                std::abs(tb) >= big_t};
    pieces.push_back(e);
  }

  if (pieces.empty()) {
    HPoint o = apply(inverse(to_ball), origin());
    bool inside = true;
    for (std::size_t i = 0; i < n; ++i) inside = inside && minkowski(o.v, poly.walls[i]) <= 0.0;
    region.covers_ball = inside;
    region.empty = !inside;
    region.area = inside ? ball_area(radius) : 0.0;
    return region;
  }

  double sectors = 0.0, sweeps = 0.0;
  const double sh_r = std::sinh(radius);
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const EdgePiece& e = pieces[k];
    const EdgePiece& next = pieces[(k + 1) % pieces.size()];
    BoundaryPiece side;
    side.neighbor = e.neighbor;
    side.start = e.line.point(e.t_start);
    side.end = e.line.point(e.t_end);
    side.length = std::abs(e.t_end - e.t_start);
    sectors += signed_sector(side.start, side.end);
    region.pieces.push_back(side);
    if (!(e.end_on_rim || next.start_on_rim)) continue;
    double sweep = wrap_positive(next.line.angle(next.t_start) - e.line.angle(e.t_end));
    if (kTwoPi - sweep < 1e-12) sweep = 0.0;
    sweeps += sweep;
    BoundaryPiece arc;
    arc.neighbor = kRim;
    arc.start = side.end;
    arc.end = next.line.point(next.t_start);
    arc.arc_angle = sweep;
    arc.length = sh_r * sweep;
    region.pieces.push_back(arc);
  }
  region.area = sectors + (ch_r - 1.0) * sweeps;
  return region;
}

namespace {

// Largest distance from p to a point of a region clipped to the ball of
// radius radius about O.
double farthest_distance(const ClippedRegion& region, const HPoint& p, double radius) {
  PolarCoord pc = to_polar(p);
  if (region.covers_ball) return pc.r + radius;
  double best = 0.0;
  for (const auto& piece : region.pieces) {
    best = std::max(best, dist(p, piece.start));
    best = std::max(best, dist(p, piece.end));
    if (piece.neighbor != kRim || piece.arc_angle <= 0.0) continue;
    // The rim point opposite p is the farthest point of the whole ball.
    double off = wrap_positive(pc.theta + kPi - to_polar(piece.start).theta);
    if (pc.r < 1e-12 || off <= piece.arc_angle) best = std::max(best, pc.r + radius);
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tessellation of a disk window

std::size_t Tessellation::locate(const HPoint& x) const {
  std::size_t best = 0;
  double best_key = kInf;
  for (std::size_t i = 0; i < nuclei.size(); ++i) {
    double key = -minkowski(x.v, nuclei[i].v);
    if (key < best_key) {
      best_key = key;
      best = i;
    }
  }
  return best;
}

double Tessellation::boundary_length_within(double radius) const {
  HPoint o = origin();
  double total = 0.0;
  for (const auto& cell : cells)
    for (const auto& piece : cell.boundary)
      if (piece.neighbor >= 0) total += segment_length_in_ball(piece.start, piece.end, o, radius);
  return 0.5 * total;
}

Tessellation tessellate_window(const PointCloud& cloud, const TessellateOptions& opt) {
  if (cloud.points.empty()) throw GeometryError("tessellate_window: empty point cloud");
  if (cloud.window.kind != Window::Kind::disk) throw GeometryError("tessellate_window: disk window expected");
  const auto& pts = cloud.points;
  const double radius = cloud.window.radius;
  const std::size_t n = pts.size();
  PolarIndex index(pts);
  double rho0 = std::max(1.0, ball_radius_for_area(30.0 / cloud.intensity));

  Tessellation t;
  t.nuclei = pts;
  t.window = {TessWindow::Kind::disk, radius, ball_area(radius)};
  t.cells.resize(n);

  parallel_for(n, resolve_workers(opt.workers), [&](std::size_t i) {
    const HPoint& p = pts[i];
    CellClipper clipper(p);
    double reach = dist(origin(), p) + radius;  // every site is within this distance of p
    double done = -1.0, rho = rho0;
    ClippedRegion region;
    for (;;) {
      std::vector<std::pair<double, std::size_t>> cand;
      for (std::size_t j : index.query(p, rho)) {
        if (j == i) continue;
        double d = dist(p, pts[j]);
        if (d > done) cand.emplace_back(d, j);
      }
      std::sort(cand.begin(), cand.end());
      for (const auto& [d, j] : cand) {
        if (clipper.certified(d)) break;
        clipper.clip(pts[j], static_cast<int>(j));
      }
      region = clip_to_ball(clipper.local(), clipper.to_global(), radius);
      double far = farthest_distance(region, p, radius);
      if (rho >= 2.0 * far || rho >= reach) break;
      done = rho;
      rho = std::min(reach, std::max(1.25 * rho, 2.0 * far + 1e-9));
    }
    TessCell& cell = t.cells[i];
    cell.nucleus = p;
    cell.area = region.area;
    for (const auto& piece : region.pieces) {
      cell.sides.push_back({piece.neighbor, piece.length});
      cell.boundary.push_back(piece);
    }
    if (clipper.bounded()) cell.polygon = clipper.cell();
  });

  double total = 0.0;
  for (const auto& cell : t.cells)
    for (const auto& side : cell.sides)
      if (side.neighbor >= 0) total += side.length;
  t.boundary_length = 0.5 * total;
  return t;
}

}  // namespace hypvor

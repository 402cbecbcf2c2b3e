#include <hypvor/surface.hpp>

#include <hypvor/sampler.hpp>
#include <hypvor/spatial_index.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <unordered_map>

namespace hypvor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double reach_of(const Isometry& g) { return std::acosh(std::max(1.0, g.m[0][0])); }

// Buckets image points gO on a unit grid in (x1, x2). Distinct images are at
// least 2 sinh(systole / 2) > 4 apart in these coordinates.
class ImageSet {
 public:
  bool insert_if_new(const Vec3& p) {
    long ix = std::lround(p.x1), iy = std::lround(p.x2);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = buckets_.find(key(ix + dx, iy + dy));
        if (it == buckets_.end()) continue;
        for (const Vec3& q : it->second)
          if (std::abs(q.x1 - p.x1) < 0.5 && std::abs(q.x2 - p.x2) < 0.5) return false;
      }
    buckets_[key(ix, iy)].push_back(p);
    return true;
  }

 private:
  static std::uint64_t key(long x, long y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint32_t>(y);
  }
  std::unordered_map<std::uint64_t, std::vector<Vec3>> buckets_;
};

}  // namespace

double SurfaceModel::systole() const {
  double best = kInf;
  for (std::size_t i = 1; i < translates.size(); ++i) best = std::min(best, translation_length(translates[i]));
  return best;
}

SurfaceModel bolza(const BolzaOptions& opt) {
  SurfaceModel s;
  s.group.label = "bolza";
  s.inradius = std::acosh(1.0 + std::sqrt(2.0));
  s.covering_radius = std::acosh(3.0 + 2.0 * std::sqrt(2.0));
  s.domain = regular_polygon(8, kPi / 4.0, -kPi / 8.0);
  for (int k = 0; k < 8; ++k) s.group.generators.push_back(Isometry::translation(2.0 * s.inradius, k * kPi / 4.0));
  s.cutoff = opt.cutoff;

  struct Node {
    Isometry g;
    double reach;
    std::size_t length;
  };
  std::vector<Node> found{{Isometry::identity(), 0.0, 0}};
  ImageSet seen;
  seen.insert_if_new(origin().v);
  std::deque<std::size_t> queue{0};
  const double prune = opt.cutoff + s.covering_radius;
  while (!queue.empty()) {
    Node cur = found[queue.front()];
    queue.pop_front();
    if (cur.length >= opt.word_cap) continue;
    for (const auto& gen : s.group.generators) {
      Isometry h = compose(cur.g, gen);
      double reach = reach_of(h);
      if (reach > prune) continue;
      Vec3 image{h.m[0][0], h.m[1][0], h.m[2][0]};
      if (!seen.insert_if_new(image)) continue;
      found.push_back({h, reach, cur.length + 1});
      queue.push_back(found.size() - 1);
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < found.size(); ++i)
    if (found[i].reach <= opt.cutoff) keep.push_back(i);
  auto angle = [&](std::size_t i) { return std::atan2(found[i].g.m[2][0], found[i].g.m[1][0]); };
  std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
    double ra = std::round(found[a].reach * 1e9), rb = std::round(found[b].reach * 1e9);
    if (ra != rb) return ra < rb;
    return angle(a) < angle(b);
  });
  for (std::size_t i : keep) {
    s.translates.push_back(found[i].g);
    s.translate_reach.push_back(found[i].reach);
    s.max_word_length = std::max(s.max_word_length, found[i].length);
  }
  return s;
}

SurfacePoint reduce_to_domain(const HPoint& p, const SurfaceModel& surf) {
  HPoint x = p;
  const auto& walls = surf.domain.walls;
  const auto& gens = surf.group.generators;
  for (int iter = 0; iter < 10000; ++iter) {
    std::size_t worst = 0;
    double worst_val = -kInf;
    for (std::size_t k = 0; k < walls.size(); ++k) {
      double v = walls[k].eval(x);
      if (v > worst_val) {
        worst_val = v;
        worst = k;
      }
    }
    if (worst_val <= 1e-12) break;
    x = apply(gens[(worst + 4) % 8], x);
  }
  for (std::size_t k = 4; k < 8; ++k) {
    if (std::abs(walls[k].eval(x)) <= 1e-12) {
      x = apply(gens[k - 4], x);
      break;
    }
  }
  return {x};
}

double quotient_distance(const SurfacePoint& x, const SurfacePoint& y, const SurfaceModel& surf) {
  double nx = dist(origin(), x.rep), ny = dist(origin(), y.rep);
  double best = dist(x.rep, y.rep);
  for (std::size_t i = 1; i < surf.translates.size(); ++i) {
    if (surf.translate_reach[i] > nx + ny + best) return best;
    best = std::min(best, dist(x.rep, apply(surf.translates[i], y.rep)));
  }
  if (surf.cutoff >= nx + ny + best) return best;
  throw CutoffTooSmall("quotient_distance: translate cutoff too small for these points");
}

DirichletDomain dirichlet_domain(const SurfacePoint& x, const SurfaceModel& surf) {
  const HPoint& xr = x.rep;
  double nx = dist(origin(), xr);
  double bound = std::min(surf.cutoff, 2.0 * nx + 6.0);
  for (;;) {
    std::vector<std::pair<double, std::size_t>> sites;
    for (std::size_t i = 1; i < surf.translates.size() && surf.translate_reach[i] <= bound; ++i)
      sites.emplace_back(dist(xr, apply(surf.translates[i], xr)), i);
    std::sort(sites.begin(), sites.end());
    CellClipper clipper(xr);
    for (const auto& [d, i] : sites) {
      if (clipper.certified(d)) break;
      clipper.clip(apply(surf.translates[i], xr), static_cast<int>(i));
    }
    if (clipper.certified(bound - 2.0 * nx)) {
      DirichletDomain dom;
      dom.cell = clipper.cell();
      dom.to_local = clipper.to_local();
      for (int idx : dom.cell.neighbors) {
        HPoint q = apply(dom.to_local, apply(surf.translates[static_cast<std::size_t>(idx)], xr));
        PolarCoord pc = to_polar(q);
        dom.wall_offsets.push_back(pc.r);
        dom.wall_angles.push_back(pc.theta);
      }
      return dom;
    }
    if (bound >= surf.cutoff) throw CutoffTooSmall("dirichlet_domain: translate cutoff too small");
    bound = std::min(surf.cutoff, bound + 2.0);
  }
}

double AngleSet::measure() const {
  double m = 0.0;
  for (const auto& [a, b] : intervals) m += b - a;
  return m;
}

bool AngleSet::contains(double theta) const {
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  for (const auto& [a, b] : intervals)
    if (theta >= a && theta <= b) return true;
  return false;
}

AngleSet angular_set(const DirichletDomain& dom, double r) {
  AngleSet out;
  if (!(r > 0.0)) {
    out.intervals.push_back({0.0, kTwoPi});
    return out;
  }
  // [r; theta] is closer to x than to the lift at (rho, phi) iff
  // cos(theta - phi) <= tanh(rho / 2) / tanh(r).
  std::vector<std::pair<double, double>> removed;
  double th_r = std::tanh(r);
  for (std::size_t k = 0; k < dom.wall_offsets.size(); ++k) {
    double bound = std::tanh(0.5 * dom.wall_offsets[k]) / th_r;
    if (bound >= 1.0) continue;
    if (bound <= -1.0) return out;
    double half = std::acos(bound);
    double lo = dom.wall_angles[k] - half, hi = dom.wall_angles[k] + half;
    if (lo < 0.0) {
      removed.push_back({lo + kTwoPi, kTwoPi});
      removed.push_back({0.0, hi});
    } else if (hi > kTwoPi) {
      removed.push_back({lo, kTwoPi});
      removed.push_back({0.0, hi - kTwoPi});
    } else {
      removed.push_back({lo, hi});
    }
  }
  std::sort(removed.begin(), removed.end());
  double cursor = 0.0;
  for (const auto& [a, b] : removed) {
    if (a > cursor) out.intervals.push_back({cursor, a});
    cursor = std::max(cursor, b);
  }
  if (cursor < kTwoPi) out.intervals.push_back({cursor, kTwoPi});
  return out;
}

AngleSet angular_set(const SurfacePoint& x, double r, const SurfaceModel& surf) {
  return angular_set(dirichlet_domain(x, surf), r);
}

Tessellation surface_voronoi(double lambda, const SurfaceModel& surf, const Seed& seed) {
  if (!(lambda >= 0.25)) throw SamplingError("surface_voronoi: intensity must be at least 0.25");
  PointCloud cloud = poisson_surface(lambda, surf, seed);
  return surface_voronoi(cloud.points, lambda, surf);
}

Tessellation surface_voronoi(const std::vector<HPoint>& nuclei, double lambda, const SurfaceModel& surf) {
  Tessellation t;
  t.nuclei = nuclei;
  t.window = {TessWindow::Kind::surface, surf.covering_radius, surf.area};
  const std::size_t n = nuclei.size();
  if (n == 0) {
    TessCell whole;
    whole.area = surf.area;
    t.cells.push_back(whole);
    return t;
  }
  const double lift_radius = surf.cutoff - surf.covering_radius;
  std::vector<HPoint> lifted;
  std::vector<int> owner;
  std::vector<std::size_t> via;
  for (std::size_t g = 0; g < surf.translates.size(); ++g) {
    if (surf.translate_reach[g] > surf.cutoff) break;
    for (std::size_t j = 0; j < n; ++j) {
      HPoint q = g == 0 ? nuclei[j] : apply(surf.translates[g], nuclei[j]);
      if (dist(origin(), q) <= lift_radius) {
        lifted.push_back(q);
        owner.push_back(static_cast<int>(j));
        via.push_back(g);
      }
    }
  }
  PolarIndex index(lifted);
  double rho0 = std::max(1.0, ball_radius_for_area(30.0 / std::max(lambda, 1e-9)));
  t.cells.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const HPoint& p = nuclei[i];
    double limit = lift_radius - dist(origin(), p);
    CellClipper clipper(p);
    double done = -1.0, rho = std::min(rho0, limit);
    for (;;) {
      std::vector<std::pair<double, std::size_t>> cand;
      for (std::size_t l : index.query(p, rho)) {
        if (via[l] == 0 && owner[l] == static_cast<int>(i)) continue;
        double d = dist(p, lifted[l]);
        if (d > done) cand.emplace_back(d, l);
      }
      std::sort(cand.begin(), cand.end());
      for (const auto& [d, l] : cand) {
        if (clipper.certified(d)) break;
        clipper.clip(lifted[l], owner[l]);
      }
      if (clipper.certified(rho)) break;
      if (rho >= limit) throw CutoffTooSmall("surface_voronoi: translate cutoff too small for this cell");
      done = rho;
      double want = clipper.bounded() ? 2.0 * clipper.max_vertex_distance() + 1e-9 : 1.5 * rho;
      rho = std::min(limit, std::max(1.25 * rho, want));
    }
    ConvexCell cell = clipper.cell();
    TessCell& out = t.cells[i];
    out.nucleus = p;
    out.area = polygon_area(cell);
    for (std::size_t k = 0; k < cell.size(); ++k) {
      BoundaryPiece piece;
      piece.neighbor = cell.neighbors[k];
      piece.start = cell.vertices[k];
      piece.end = cell.vertices[(k + 1) % cell.size()];
      piece.length = dist(piece.start, piece.end);
      out.sides.push_back({piece.neighbor, piece.length});
      out.boundary.push_back(piece);
      if (piece.neighbor != static_cast<int>(i)) total += piece.length;
    }
    out.polygon = std::move(cell);
  }
  t.boundary_length = 0.5 * total;
  return t;
}

ColoringOutcome score_coloring(const Tessellation& t, const std::vector<bool>& colors, double total_area) {
  ColoringOutcome out;
  out.cells = t.nuclei.size();
  double boundary = 0.0;
  for (std::size_t i = 0; i < t.nuclei.size(); ++i) {
    if (colors[i]) out.black_area += t.cells[i].area;
    for (const auto& side : t.cells[i].sides) {
      if (side.neighbor < 0 || side.neighbor == static_cast<int>(i)) continue;
      if (colors[i] != colors[static_cast<std::size_t>(side.neighbor)]) boundary += side.length;
    }
  }
  out.boundary_length = 0.5 * boundary;
  double smaller = std::min(out.black_area, total_area - out.black_area);
  out.cheeger_value = smaller > 0.0 ? out.boundary_length / smaller : kInf;
  return out;
}

std::vector<bool> random_coloring(std::size_t cells, Rng& rng) {
  std::vector<bool> colors(cells);
  for (std::size_t i = 0; i < cells; ++i) colors[i] = rng.coin();
  return colors;
}

std::vector<ColoringOutcome> coloring_experiment(double lambda, const SurfaceModel& surf, std::size_t trials,
                                                 const Seed& seed, unsigned workers) {
  std::vector<ColoringOutcome> out(trials);
  parallel_for(trials, resolve_workers(workers), [&](std::size_t k) {
    Seed s = seed.with_stream(k);
    Tessellation t = surface_voronoi(lambda, surf, s);
    Rng rng(seed.derive(0x636f6c6f72ULL).with_stream(k));
    out[k] = score_coloring(t, random_coloring(t.nuclei.size(), rng), surf.area);
    out[k].seed = s;
  });
  return out;
}

VarianceCheck conditional_variance(const Tessellation& t, std::size_t colorings, const Seed& seed) {
  VarianceCheck v;
  v.colorings = colorings;
  Rng rng(seed);
  std::vector<double> areas(colorings);
  for (std::size_t k = 0; k < colorings; ++k) {
    double black = 0.0;
    for (const auto& cell : t.cells)
      if (rng.coin()) black += cell.area;
    areas[k] = black;
  }
  v.empirical = sample_variance(areas);
  v.se = variance_stderr(areas);
  for (const auto& cell : t.cells) v.predicted += 0.25 * cell.area * cell.area;
  return v;
}

}  // namespace hypvor

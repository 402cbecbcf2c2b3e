#include <doctest.h>

#include <hypvor/isokawa.hpp>
#include <hypvor/sampler.hpp>
#include <hypvor/voronoi.hpp>

#include <algorithm>
#include <map>

#include "oracles.hpp"

using namespace hypvor;
using doctest::Approx;

namespace {

// Radius of the hexagon vertex at angle pi/6, equidistant from O and [2; 0].
double hexagon_vertex_radius() {
  double lo = 0.0, hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (dist(from_polar(mid, kPi / 6), from_polar(2.0, 0.0)) > mid ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Area of the part of the ball B_R(O) beyond a line at distance h from O,
// by Simpson's rule on sinh(r) * (angle of the arc beyond the line).
double cap_area(double h, double R) {
  const int n = 20000;
  auto f = [&](double r) {
    double c = std::tanh(h) / std::tanh(r);
    return c >= 1.0 ? 0.0 : std::sinh(r) * 2.0 * std::acos(c);
  };
  double step = (R - h) / n, sum = f(h) + f(R);
  for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(h + k * step);
  return sum * step / 3.0;
}

bool same_vertex_set(const ConvexCell& a, const ConvexCell& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& v : a.vertices) {
    bool found = false;
    for (const auto& w : b.vertices) found = found || dist(v, w) < tol;
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("voronoi") {

TEST_CASE("a single other site leaves the cell unbounded") {
  CHECK_THROWS_AS(cell_of(origin(), {from_polar(1.0, 0.3)}), UnboundedCell);
  CellClipper c(origin());
  c.clip(from_polar(1.0, 0.3), 0);
  CHECK_FALSE(c.bounded());
  CHECK_FALSE(c.local().bounded());
}

TEST_CASE("coincident sites are rejected") {
  CHECK_THROWS_AS(cell_of(origin(), {origin()}), DegenerateInput);
}

TEST_CASE("hexagonal ring gives a regular hexagon") {
  std::vector<HPoint> ring;
  for (int k = 0; k < 6; ++k) ring.push_back(from_polar(2.0, k * kPi / 3));
  ConvexCell c = cell_of(origin(), ring);
  REQUIRE(c.size() == 6);
  CHECK(check_cell(c).empty());
  double rho = hexagon_vertex_radius();
  std::vector<double> angles;
  for (const auto& v : c.vertices) {
    PolarCoord pc = to_polar(v);
    CHECK(pc.r == Approx(rho).epsilon(1e-9));
    angles.push_back(pc.theta);
  }
  std::sort(angles.begin(), angles.end());
  for (int k = 0; k < 6; ++k) CHECK(angles[k] == Approx(kPi / 6 + k * kPi / 3).epsilon(1e-9));
  for (double a : interior_angles(c)) CHECK(a == Approx(interior_angles(c)[0]).epsilon(1e-9));
}

TEST_CASE("far sites do not change a certified cell") {
  Rng rng(Seed{31, 0});
  for (int k = 0; k < 20; ++k) {
    ConvexCell c = oracle::random_cell(rng);
    std::vector<HPoint> others;
    // Rebuild the site list: recover it by re-running with an extra far site.
    HPoint nucleus = c.nucleus;
    double far = 2.0 * c.max_vertex_distance() + 0.01;
    Isometry to_n = Isometry::moving_origin_to(nucleus);
    HPoint extra = apply(to_n, from_polar(far, kTwoPi * rng.uniform()));
    // The cell's own walls come from sites at the reflections of the nucleus.
    for (const auto& w : c.walls) others.push_back(apply(Isometry::reflection(w), nucleus));
    ConvexCell base = cell_of(nucleus, others);
    others.push_back(extra);
    ConvexCell grown = cell_of(nucleus, others);
    CHECK(same_vertex_set(base, c, 1e-9));
    CHECK(same_vertex_set(base, grown, 1e-9));
  }
}

TEST_CASE("clipping order does not matter") {
  Rng rng(Seed{32, 0});
  for (int k = 0; k < 50; ++k) {
    HPoint nucleus = oracle::uniform_in_ball(rng, 0.5);
    std::vector<HPoint> others;
    for (int j = 0; j < 40; ++j) others.push_back(oracle::uniform_in_ball(rng, 3.0));
    ConvexCell a = cell_of(nucleus, others);
    std::reverse(others.begin(), others.end());
    ConvexCell b = cell_of(nucleus, others);
    std::rotate(others.begin(), others.begin() + 17, others.end());
    ConvexCell c = cell_of(nucleus, others);
    CHECK(same_vertex_set(a, b, 1e-9));
    CHECK(same_vertex_set(a, c, 1e-9));
    CHECK(check_cell(a).empty());
  }
}

TEST_CASE("cell membership agrees with nearest nucleus") {
  Rng rng(Seed{33, 0});
  std::vector<HPoint> sites;
  for (int j = 0; j < 60; ++j) sites.push_back(oracle::uniform_in_ball(rng, 3.0));
  // Guard ring so that every inner cell is bounded.
  for (int j = 0; j < 64; ++j) sites.push_back(from_polar(5.0, kTwoPi * j / 64));
  for (std::size_t i = 0; i < 60; ++i) {
    std::vector<HPoint> others = sites;
    others.erase(others.begin() + static_cast<long>(i));
    if (to_polar(sites[i]).r > 1.5) continue;
    ConvexCell c = cell_of(sites[i], others);
    for (int k = 0; k < 200; ++k) {
      HPoint x = oracle::uniform_in_ball(rng, 3.0);
      if (c.contains(x)) CHECK(oracle::nearest(sites, x) == i);
    }
  }
}

TEST_CASE("typical cell contains O and uses a certified window") {
  for (std::uint64_t k = 0; k < 200; ++k) {
    TypicalCellResult r = typical_cell(0.5, Seed{34, k});
    CHECK(r.cell.contains(origin(), -1e-12));
    CHECK(to_polar(r.cell.nucleus).r == 0.0);
    CHECK(2.0 * r.cell.max_vertex_distance() < r.window_radius - 1.0);
    CHECK(check_cell(r.cell).empty());
  }
  CHECK(typical_cell_initial_radius(1e-4) > typical_cell_initial_radius(1.0));
  CHECK(typical_cell_initial_radius(100.0) == 3.0);
}

TEST_CASE("typical cell area and perimeter means") {
  RatioRow row = typical_cell_experiment(0.5, 3000, Seed{35, 0});
  CHECK(row.mean_area.within(2.0));
  CHECK(row.mean_perimeter.within(oracle::frozen_perimeter(0.5)));
  RatioRow unit = typical_cell_experiment(1.0, 3000, Seed{36, 0});
  CHECK(unit.mean_perimeter.within(oracle::frozen_perimeter(1.0)));
}

TEST_CASE("window cap is reported") {
  TypicalCellOptions opt;
  opt.window_cap = 2.0;
  CHECK_THROWS_AS(typical_cell(0.01, Seed{37, 0}, opt), WindowCap);
}

TEST_CASE("clip_to_ball against a half-plane") {
  CellClipper c(origin());
  c.clip(from_polar(2.0, 0.7), 0);  // wall at distance 1 from O
  ClippedRegion inside = clip_to_ball(c.local(), Isometry::identity(), 0.9);
  CHECK(inside.covers_ball);
  CHECK(inside.area == Approx(ball_area(0.9)).epsilon(1e-12));
  for (double R : {1.5, 3.0, 8.0}) {
    ClippedRegion reg = clip_to_ball(c.local(), Isometry::identity(), R);
    CHECK(reg.area == Approx(ball_area(R) - cap_area(1.0, R)).epsilon(1e-8));
    double side = 0.0, arc = 0.0;
    for (const auto& p : reg.pieces) (p.neighbor == 0 ? side : arc) += p.neighbor == 0 ? p.length : p.arc_angle;
    CHECK(side == Approx(2.0 * std::acosh(std::cosh(R) / std::cosh(1.0))).epsilon(1e-10));
    CHECK(arc == Approx(kTwoPi - 2.0 * std::acos(std::tanh(1.0) / std::tanh(R))).epsilon(1e-10));
  }
  // A ball beyond the wall is empty.
  ClippedRegion away = clip_to_ball(c.local(), inverse(Isometry::moving_origin_to(from_polar(4.0, 0.7))), 1.0);
  CHECK(away.empty);
  CHECK(away.area == 0.0);
}

TEST_CASE("clip_to_ball of a bounded cell inside a ball keeps the polygon") {
  Rng rng(Seed{38, 0});
  for (int k = 0; k < 20; ++k) {
    HPoint nucleus = oracle::uniform_in_ball(rng, 0.5);
    CellClipper c(nucleus);
    for (int j = 0; j < 30; ++j) c.clip(oracle::uniform_in_ball(rng, 3.0), j);
    if (!c.bounded()) continue;
    ConvexCell cell = c.cell();
    ClippedRegion reg = clip_to_ball(c.local(), c.to_global(), 30.0);
    CHECK(reg.area == Approx(polygon_area(cell)).epsilon(1e-10));
    double len = 0.0;
    for (const auto& p : reg.pieces) len += p.length;
    CHECK(len == Approx(polygon_perimeter(cell)).epsilon(1e-10));
  }
}

TEST_CASE("single point tessellation") {
  PointCloud cloud;
  cloud.points = {from_polar(0.4, 1.0)};
  cloud.intensity = 1.0;
  cloud.window = {Window::Kind::disk, 4.0};
  Tessellation t = tessellate_window(cloud);
  REQUIRE(t.cells.size() == 1);
  CHECK(t.cells[0].area == Approx(ball_area(4.0)).epsilon(1e-12));
  CHECK(t.boundary_length == 0.0);
  CHECK_FALSE(t.cells[0].polygon.has_value());
}

TEST_CASE("tessellation areas partition the window") {
  for (std::uint64_t k = 0; k < 50; ++k) {
    double radius = 3.0 + 0.1 * static_cast<double>(k);
    PointCloud cloud = poisson_disk(1.0, radius, Seed{39, k});
    if (cloud.points.empty()) continue;
    Tessellation t = tessellate_window(cloud);
    double total = 0.0;
    for (const auto& c : t.cells) {
      CHECK(c.area > 0.0);
      total += c.area;
    }
    CHECK(std::abs(total / t.window.area - 1.0) < 1e-6);
  }
}

TEST_CASE("each interior side is shared by exactly two cells") {
  PointCloud cloud = poisson_disk(1.0, 5.0, Seed{40, 0});
  Tessellation t = tessellate_window(cloud);
  std::map<std::pair<int, int>, std::vector<double>> sides;
  for (std::size_t i = 0; i < t.cells.size(); ++i)
    for (const auto& s : t.cells[i].sides)
      if (s.neighbor >= 0) {
        int a = static_cast<int>(i), b = s.neighbor;
        sides[{std::min(a, b), std::max(a, b)}].push_back(s.length);
      }
  double total = 0.0;
  for (const auto& [key, lengths] : sides) {
    REQUIRE(lengths.size() == 2);
    CHECK(lengths[0] == Approx(lengths[1]).epsilon(1e-8));
    total += lengths[0];
  }
  CHECK(t.boundary_length == Approx(total).epsilon(1e-9));
  CHECK(t.boundary_length_within(5.0) == Approx(t.boundary_length).epsilon(1e-9));
}

TEST_CASE("points belong to the cell of their nearest nucleus") {
  PointCloud cloud = poisson_disk(1.0, 5.0, Seed{41, 0});
  Tessellation t = tessellate_window(cloud);
  Rng rng(Seed{41, 1});
  for (int k = 0; k < 1000; ++k) {
    HPoint x = oracle::uniform_in_ball(rng, 5.0);
    std::size_t best = oracle::nearest(t.nuclei, x);
    double dmin = dist(x, t.nuclei[best]);
    // Exactly the cells whose side bisectors all admit x contain it.
    std::size_t owners = 0, owner = 0;
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
      bool inside = true;
      for (const auto& s : t.cells[i].sides)
        if (s.neighbor >= 0) inside = inside && dist(x, t.nuclei[i]) <= dist(x, t.nuclei[static_cast<std::size_t>(s.neighbor)]);
      if (inside) {
        ++owners;
        owner = i;
      }
    }
    CHECK(owners == 1);
    CHECK(std::abs(dist(x, t.nuclei[owner]) - dmin) < 1e-9);
    CHECK(t.locate(x) == best);
  }
}

TEST_CASE("tessellation is independent of the worker count") {
  PointCloud cloud = poisson_disk(1.0, 6.0, Seed{42, 0});
  Tessellation a = tessellate_window(cloud, {1});
  Tessellation b = tessellate_window(cloud, {4});
  REQUIRE(a.cells.size() == b.cells.size());
  CHECK(a.boundary_length == b.boundary_length);
  for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].area == b.cells[i].area);
}

TEST_CASE("interior boundary density matches the perimeter quadrature") {
  // Sub-window R - 3 keeps the rim out of the measurement.
  const double R = 10.0, inner = R - 3.0;
  double sum = 0.0;
  const int clouds = 20;
  for (int k = 0; k < clouds; ++k) {
    Tessellation t = tessellate_window(poisson_disk(1.0, R, Seed{43, static_cast<std::uint64_t>(k)}));
    sum += t.boundary_length_within(inner) / ball_area(inner);
  }
  CHECK(sum / clouds == Approx(0.5 * oracle::frozen_perimeter(1.0)).epsilon(0.05));
}

}  // TEST_SUITE

#pragma once

// Independent reference computations for the tests. Nothing here reuses the
// code path it is used to check.

#include <hypvor/hypmath.hpp>
#include <hypvor/rng.hpp>
#include <hypvor/sampler.hpp>
#include <hypvor/stats.hpp>
#include <hypvor/surface.hpp>
#include <hypvor/voronoi.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using namespace hypvor;

// Mean typical-cell perimeter at intensity lambda, evaluated with
// scipy.integrate.quad (epsabs 1e-13, epsrel 1e-13) on [0, inf).
struct PerimeterValue {
  double lambda;
  double perimeter;
};
inline constexpr PerimeterValue kFrozenPerimeter[] = {
    {1e-4, 12740.377871504454}, {1e-3, 1281.1209287155382}, {0.01, 134.67464647738487},
    {0.1, 18.34113884971543},   {0.5, 6.27825561053205},    {1.0, 4.228225223392246},
    {2.0, 2.9108647139556982},  {1e4, 0.040000238731265854},
};

inline double frozen_perimeter(double lambda) {
  for (const auto& v : kFrozenPerimeter)
    if (v.lambda == lambda) return v.perimeter;
  return std::numeric_limits<double>::quiet_NaN();
}

/// Poincare-disk distance, computed from disk coordinates only.
inline double disk_distance(const DiskPoint& a, const DiskPoint& b) {
  double du = a.u - b.u, dv = a.v - b.v;
  double na = a.u * a.u + a.v * a.v, nb = b.u * b.u + b.v * b.v;
  return std::acosh(1.0 + 2.0 * (du * du + dv * dv) / ((1.0 - na) * (1.0 - nb)));
}

/// Uniform point of the ball of radius r about O.
inline HPoint uniform_in_ball(Rng& rng, double r) {
  double rr = radial_quantile(rng.uniform(), r);
  return from_polar(rr, kTwoPi * rng.uniform());
}

/// Rejection Monte-Carlo area of a compact convex cell: the fraction of a
/// ball around the nucleus that satisfies every wall.
inline MCEstimate mc_cell_area(const ConvexCell& c, std::size_t samples, const Seed& seed) {
  double reach = 0.0;
  for (const auto& v : c.vertices) reach = std::max(reach, dist(c.nucleus, v));
  reach *= 1.0 + 1e-9;
  Isometry to_nucleus = Isometry::moving_origin_to(c.nucleus);
  Rng rng(seed);
  std::vector<double> hits(samples);
  const double ball = 2.0 * kPi * (std::cosh(reach) - 1.0);
  for (std::size_t k = 0; k < samples; ++k) {
    HPoint z = apply(to_nucleus, uniform_in_ball(rng, reach));
    bool inside = true;
    for (const auto& w : c.walls) inside = inside && minkowski(z.v, w.u) <= 0.0;
    hits[k] = inside ? ball : 0.0;
  }
  return estimate(hits, seed);
}

/// Index of the nucleus nearest to x by direct scan of the distances.
inline std::size_t nearest(const std::vector<HPoint>& nuclei, const HPoint& x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < nuclei.size(); ++i)
    if (dist(x, nuclei[i]) < dist(x, nuclei[best])) best = i;
  return best;
}

/// A bounded random Voronoi cell: nucleus near O inside a jittered ring of ten sites and
/// extra random sites.
inline ConvexCell random_cell(Rng& rng, int extra = 5) {
  HPoint nucleus = uniform_in_ball(rng, 0.5);
  std::vector<HPoint> others;
  for (int k = 0; k < 10; ++k) others.push_back(from_polar(1.0 + 0.5 * rng.uniform(), kPi / 5.0 * k + 0.15 * rng.uniform()));
  for (int k = 0; k < extra; ++k) others.push_back(uniform_in_ball(rng, 2.5));
  return cell_of(nucleus, others);
}

/// Measure of {theta : dist(x, [r; theta]_x) on the surface equals r}, i.e.
/// of the circle of radius r about x lying in the Dirichlet domain of x.
/// Transitions found on a uniform scan are refined by bisection, so the
/// result is exact up to features narrower than the scan step.
inline double circle_in_domain_measure(const HPoint& x, double r, const SurfaceModel& surf, int scan = 4096) {
  Isometry to_x = Isometry::moving_origin_to(x);
  SurfacePoint sx = reduce_to_domain(x, surf);
  auto member = [&](double th) {
    HPoint q = apply(to_x, from_polar(r, th));
    return quotient_distance(sx, reduce_to_domain(q, surf), surf) >= r - 1e-9;
  };
  const double step = kTwoPi / scan;
  std::vector<double> cuts;
  bool first = member(0.0), prev = first;
  for (int k = 1; k <= scan; ++k) {
    double th = step * k;
    bool cur = k == scan ? first : member(th);
    if (cur != prev) {
      double lo = th - step, hi = th;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (member(mid) == prev ? lo : hi) = mid;
      }
      cuts.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  if (cuts.empty()) return first ? kTwoPi : 0.0;
  // Walk the cut points; the state starts as `first` at theta = 0.
  double total = 0.0, last = 0.0;
  bool state = first;
  for (double c : cuts) {
    if (state) total += c - last;
    last = c;
    state = !state;
  }
  if (state) total += kTwoPi - last;
  return total;
}

/// Monte-Carlo area of the surface ball B_r(x): the fraction of the planar
/// ball whose points are no closer to another lift of x.
inline MCEstimate mc_surface_ball_area(const HPoint& x, double r, const SurfaceModel& surf, std::size_t samples,
                                       const Seed& seed) {
  Isometry to_x = Isometry::moving_origin_to(x);
  SurfacePoint sx = reduce_to_domain(x, surf);
  Rng rng(seed);
  const double ball = 2.0 * kPi * (std::cosh(r) - 1.0);
  std::vector<double> xs(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    HPoint z = uniform_in_ball(rng, r);
    HPoint q = apply(to_x, z);
    double d_plane = std::acosh(std::max(1.0, z.x0()));
    xs[k] = quotient_distance(sx, reduce_to_domain(q, surf), surf) >= d_plane - 1e-9 ? ball : 0.0;
  }
  return estimate(xs, seed);
}

/// Scratch directory under the build tree, emptied on construction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = std::filesystem::temp_directory_path() / ("hypvor_test_" + name);
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  TempDir(TempDir&& o) noexcept : path_(std::move(o.path_)) { o.path_.clear(); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    if (!path_.empty()) std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace oracle

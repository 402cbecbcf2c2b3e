#include <hypvor/sampler.hpp>

#include <hypvor/surface.hpp>

#include <algorithm>
#include <numeric>

namespace hypvor {

double radial_quantile(double u, double radius) {
  return 2.0 * std::asinh(std::sqrt(u) * std::sinh(0.5 * radius));
}

bool has_near_coincident(const std::vector<HPoint>& pts, double sep) {
  if (pts.size() < 2) return false;
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a].x1() < pts[b].x1(); });
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const HPoint& p = pts[idx[i]];
    // Distance at least |dx1| / x0max, so a window in x1 suffices.
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      const HPoint& q = pts[idx[j]];
      if (q.x1() - p.x1() > sep * std::max(p.x0(), q.x0())) break;
      if (dist(p, q) < sep) return true;
    }
  }
  return false;
}

namespace {

void check_expected(double expected, const SamplerOptions& opt) {
  if (!(expected <= opt.max_expected_count)) {
    throw SamplingError("expected point count " + std::to_string(expected) + " exceeds the configured cap");
  }
}

}  // namespace

void append_poisson_annulus(Rng& rng, double lambda, double r_in, double r_out, std::vector<HPoint>& out,
                            const SamplerOptions& opt) {
  if (!(lambda > 0.0)) throw SamplingError("intensity must be positive");
  if (!(r_out > r_in)) return;
  double a_in = ball_area(r_in);
  double a_out = ball_area(r_out);
  check_expected(lambda * a_out, opt);
  std::int64_t n = rng.poisson(lambda * (a_out - a_in));
  out.reserve(out.size() + static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    double area = a_in + rng.uniform() * (a_out - a_in);
    double r = ball_radius_for_area(area);
    double theta = kTwoPi * rng.uniform();
    out.push_back(from_polar(r, theta));
  }
}

PointCloud poisson_disk(double lambda, double radius, const Seed& seed, const SamplerOptions& opt) {
  if (!(lambda > 0.0)) throw SamplingError("poisson_disk: intensity must be positive");
  if (!(radius > 0.0 && radius <= 25.0)) throw SamplingError("poisson_disk: radius must lie in (0, 25]");
  check_expected(lambda * ball_area(radius), opt);
  Rng rng(seed);
  PointCloud cloud;
  cloud.intensity = lambda;
  cloud.window = {Window::Kind::disk, radius};
  do {
    cloud.points.clear();
    std::int64_t n = rng.poisson(lambda * ball_area(radius));
    cloud.points.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      double r = radial_quantile(rng.uniform(), radius);
      double theta = kTwoPi * rng.uniform();
      cloud.points.push_back(from_polar(r, theta));
    }
  } while (has_near_coincident(cloud.points, opt.min_separation));
  return cloud;
}

PointCloud poisson_surface(double lambda, const SurfaceModel& surf, const Seed& seed, const SamplerOptions& opt) {
  if (!(lambda > 0.0)) throw SamplingError("poisson_surface: intensity must be positive");
  check_expected(lambda * surf.area, opt);
  Rng rng(seed);
  PointCloud cloud;
  cloud.intensity = lambda;
  cloud.window = {Window::Kind::surface_domain, surf.covering_radius};
  do {
    cloud.points.clear();
    cloud.proposals = 0;
    std::int64_t n = rng.poisson(lambda * surf.area);
    for (std::int64_t i = 0; i < n; ++i) {
      for (;;) {
        ++cloud.proposals;
        double r = radial_quantile(rng.uniform(), surf.covering_radius);
        double theta = kTwoPi * rng.uniform();
        HPoint p = from_polar(r, theta);
        if (surf.domain.contains(p)) {
          cloud.points.push_back(p);
          break;
        }
      }
    }
  } while (has_near_coincident(cloud.points, opt.min_separation));
  return cloud;
}

}  // namespace hypvor

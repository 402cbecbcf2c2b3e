#pragma once

#include <hypvor/hypmath.hpp>
#include <hypvor/rng.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hypvor {

struct SurfaceModel;

struct Window {
  enum class Kind { disk, surface_domain };
  Kind kind = Kind::disk;
  double radius = 0.0;  // disk radius, or covering radius of the domain
};

struct PointCloud {
  std::vector<HPoint> points;
  double intensity = 0.0;
  Window window;
  std::size_t proposals = 0;  // candidate draws, for rejection samplers
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SamplerOptions {
  double max_expected_count = 1e7;
  double min_separation = 1e-10;
};

/// Poisson process of intensity lambda on the closed disk of radius R about O.
PointCloud poisson_disk(double lambda, double radius, const Seed& seed, const SamplerOptions& opt = {});

/// Appends a Poisson process on the annulus r_in < r <= r_out, continuing rng.
void append_poisson_annulus(Rng& rng, double lambda, double r_in, double r_out, std::vector<HPoint>& out,
                            const SamplerOptions& opt = {});

/// Poisson process on the surface, represented in its fundamental polygon.
PointCloud poisson_surface(double lambda, const SurfaceModel& surf, const Seed& seed, const SamplerOptions& opt = {});

/// Radius with F(r) = (cosh r - 1)/(cosh R - 1) = u, the area-uniform radial law.
double radial_quantile(double u, double radius);

/// True when two points lie closer than sep (sort-and-sweep).
bool has_near_coincident(const std::vector<HPoint>& pts, double sep);

}  // namespace hypvor

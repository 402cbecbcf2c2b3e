#pragma once

#include <hypvor/hypmath.hpp>

#include <cstddef>
#include <vector>

namespace hypvor {

/// Bucket grid over polar bands about O. Each radial band of width w is cut
/// into angular bins of roughly w hyperbolic arc length at the band's outer
/// radius, so a ball query touches O(area / w^2) bins.
class PolarIndex {
 public:
  explicit PolarIndex(const std::vector<HPoint>& points, double band_width = 1.0);

  /// Indices of points with dist(center, p) <= radius, unordered.
  std::vector<std::size_t> query(const HPoint& center, double radius) const;

  std::size_t size() const { return points_.size(); }
  const std::vector<HPoint>& points() const { return points_; }

 private:
  struct Band {
    double r_lo = 0.0, r_hi = 0.0;
    std::size_t bins = 1;
    std::size_t offset = 0;  // first bin in bin_start_
  };

  std::size_t band_of(double r) const;
  std::size_t bin_of(const Band& b, double theta) const;

  std::vector<HPoint> points_;
  std::vector<PolarCoord> polar_;
  double width_;
  std::vector<Band> bands_;
  std::vector<std::size_t> bin_start_;  // CSR offsets, size total_bins + 1
  std::vector<std::size_t> items_;
};

}  // namespace hypvor

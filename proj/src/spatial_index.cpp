#include <hypvor/spatial_index.hpp>

#include <algorithm>

namespace hypvor {

PolarIndex::PolarIndex(const std::vector<HPoint>& points, double band_width)
    : points_(points), width_(band_width) {
  polar_.reserve(points_.size());
  double r_max = 0.0;
  for (const auto& p : points_) {
    polar_.push_back(to_polar(p));
    r_max = std::max(r_max, polar_.back().r);
  }
  std::size_t nb = static_cast<std::size_t>(r_max / width_) + 1;
  std::size_t total = 0;
  for (std::size_t k = 0; k < nb; ++k) {
    Band b;
    b.r_lo = static_cast<double>(k) * width_;
    b.r_hi = b.r_lo + width_;
    double arc = kTwoPi * std::sinh(b.r_hi);
    b.bins = std::max<std::size_t>(1, static_cast<std::size_t>(arc / width_));
    b.offset = total;
    total += b.bins;
    bands_.push_back(b);
  }
  std::vector<std::size_t> bin_of_point(points_.size());
  std::vector<std::size_t> counts(total + 1, 0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Band& b = bands_[band_of(polar_[i].r)];
    bin_of_point[i] = b.offset + bin_of(b, polar_[i].theta);
    ++counts[bin_of_point[i] + 1];
  }
  for (std::size_t k = 0; k < total; ++k) counts[k + 1] += counts[k];
  bin_start_ = counts;
  items_.resize(points_.size());
  std::vector<std::size_t> fill(bin_start_.begin(), bin_start_.end() - 1);
  for (std::size_t i = 0; i < points_.size(); ++i) items_[fill[bin_of_point[i]]++] = i;
}

std::size_t PolarIndex::band_of(double r) const {
  std::size_t k = static_cast<std::size_t>(std::max(0.0, r) / width_);
  return std::min(k, bands_.size() - 1);
}

std::size_t PolarIndex::bin_of(const Band& b, double theta) const {
  std::size_t k = static_cast<std::size_t>(theta / kTwoPi * static_cast<double>(b.bins));
  return std::min(k, b.bins - 1);
}

std::vector<std::size_t> PolarIndex::query(const HPoint& center, double radius) const {
  std::vector<std::size_t> out;
  if (points_.empty()) return out;
  PolarCoord c = to_polar(center);
  double ch_rq = std::cosh(c.r), sh_rq = std::sinh(c.r), ch_rho = std::cosh(radius);
  double lo = c.r - radius, hi = c.r + radius;
  for (const Band& b : bands_) {
    if (b.r_hi < lo || b.r_lo > hi) continue;
    // Largest angular offset of a point at radius r within the query ball:
    // cos(dtheta) >= (cosh rq cosh r - cosh rho) / (sinh rq sinh r),
    // minimised over r in the band at cosh r = cosh rq / cosh rho.
    double half = kPi;
    if (sh_rq > 1e-12) {
      double r_star = std::acosh(std::max(1.0, ch_rq / ch_rho));
      double r = std::clamp(r_star, std::max(b.r_lo, 1e-12), b.r_hi);
      double f = (ch_rq * std::cosh(r) - ch_rho) / (sh_rq * std::sinh(r));
      if (f > -1.0) half = f >= 1.0 ? 0.0 : std::acos(f);
      half = std::min(kPi, half + 1e-9);
    }
    auto scan = [&](std::size_t k) {
      std::size_t bin = b.offset + k;
      for (std::size_t j = bin_start_[bin]; j < bin_start_[bin + 1]; ++j) {
        std::size_t i = items_[j];
        if (dist(center, points_[i]) <= radius) out.push_back(i);
      }
    };
    if (half >= kPi - 1e-12 || b.bins == 1) {
      for (std::size_t k = 0; k < b.bins; ++k) scan(k);
      continue;
    }
    double bin_w = kTwoPi / static_cast<double>(b.bins);
    long first = static_cast<long>(std::floor((c.theta - half) / bin_w));
    long last = static_cast<long>(std::floor((c.theta + half) / bin_w));
    long nb = static_cast<long>(b.bins);
    if (last - first + 1 >= nb) {
      for (std::size_t k = 0; k < b.bins; ++k) scan(k);
      continue;
    }
    for (long k = first; k <= last; ++k) scan(static_cast<std::size_t>(((k % nb) + nb) % nb));
  }
  return out;
}

}  // namespace hypvor

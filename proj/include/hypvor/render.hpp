#pragma once

// SVG output of tessellations in the Poincare disk.

#include <hypvor/hypmath.hpp>
#include <hypvor/voronoi.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hypvor {

struct RenderSpec {
  int width_px = 800;
  int height_px = 800;
  double stroke_width = 0.6;
  std::array<std::string, 2> palette{"#000000", "#ffffff"};  // black, white
  std::string stroke = "#1f3b73";
  bool show_nuclei = false;
  std::string comment;  // written as an XML comment after the root element

  /// Empty string when the settings are usable.
  std::string validate() const;
};

/// Circle through two disk points orthogonal to the unit circle, or a
/// diameter when the points are collinear with the centre.
struct DiskArc {
  bool straight = false;
  double cx = 0.0, cy = 0.0, radius = 0.0;
};

DiskArc geodesic_arc(const DiskPoint& p, const DiskPoint& q);

/// Renders cell boundaries as geodesic arcs; with colors, fills cells with
/// palette[0] (true) or palette[1] (false).
std::string render_svg(const Tessellation& t, const std::optional<std::vector<bool>>& colors, const RenderSpec& spec);

}  // namespace hypvor

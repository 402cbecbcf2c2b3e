#include <hypvor/render.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hypvor {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

class Canvas {
 public:
  explicit Canvas(const RenderSpec& spec)
      : cx_(0.5 * spec.width_px), cy_(0.5 * spec.height_px),
        scale_(0.49 * std::min(spec.width_px, spec.height_px)) {}

  double x(const DiskPoint& p) const { return cx_ + scale_ * p.u; }
  double y(const DiskPoint& p) const { return cy_ - scale_ * p.v; }
  std::string xy(const DiskPoint& p) const { return fmt(x(p)) + " " + fmt(y(p)); }
  double scale() const { return scale_; }
  double cx() const { return cx_; }
  double cy() const { return cy_; }

  // Path segment drawing the geodesic from p to q (current point is p).
  std::string geodesic_to(const DiskPoint& p, const DiskPoint& q) const {
    DiskArc arc = geodesic_arc(p, q);
    if (arc.straight) return "L " + xy(q) + " ";
    DiskPoint c{arc.cx, arc.cy};
    // Sweep flag 1 draws clockwise on screen, which puts the centre to the
    // right of the direction of travel.
    double dx1 = x(q) - x(p), dy1 = y(q) - y(p);
    double dx2 = x(c) - x(p), dy2 = y(c) - y(p);
    int sweep = dx1 * dy2 - dy1 * dx2 > 0.0 ? 1 : 0;
    std::string r = fmt(arc.radius * scale_);
    return "A " + r + " " + r + " 0 0 " + std::to_string(sweep) + " " + xy(q) + " ";
  }

  // Counterclockwise (in the disk) arc of the circle |z| = rho.
  std::string rim_to(double rho, double sweep_angle, const DiskPoint& q) const {
    std::string r = fmt(rho * scale_);
    int large = sweep_angle > kPi ? 1 : 0;
    return "A " + r + " " + r + " 0 " + std::to_string(large) + " 1 " + xy(q) + " ";
  }

 private:
  double cx_, cy_, scale_;
};

}  // namespace

std::string RenderSpec::validate() const {
  if (width_px < 64 || width_px > 8192 || height_px < 64 || height_px > 8192)
    return "width and height must be within [64, 8192] pixels";
  if (!(stroke_width > 0.0)) return "stroke width must be positive";
  return {};
}

DiskArc geodesic_arc(const DiskPoint& p, const DiskPoint& q) {
  DiskArc arc;
  double det = p.u * q.v - p.v * q.u;
  if (std::abs(det) < 1e-9) {
    arc.straight = true;
    return arc;
  }
  // Orthogonal circles through p satisfy c . p = (|p|^2 + 1) / 2.
  double bp = 0.5 * (p.u * p.u + p.v * p.v + 1.0);
  double bq = 0.5 * (q.u * q.u + q.v * q.v + 1.0);
  arc.cx = (bp * q.v - bq * p.v) / det;
  arc.cy = (p.u * bq - q.u * bp) / det;
  arc.radius = std::sqrt(std::max(0.0, arc.cx * arc.cx + arc.cy * arc.cy - 1.0));
  return arc;
}

std::string render_svg(const Tessellation& t, const std::optional<std::vector<bool>>& colors, const RenderSpec& spec) {
  if (std::string err = spec.validate(); !err.empty()) throw std::invalid_argument("render_svg: " + err);
  if (colors && colors->size() != t.cells.size()) throw std::invalid_argument("render_svg: one color per cell expected");
  Canvas cv(spec);
  const bool disk = t.window.kind == TessWindow::Kind::disk;
  const double rim = disk ? std::tanh(0.5 * t.window.radius) : 1.0;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(spec.width_px) +
         "\" height=\"" + std::to_string(spec.height_px) + "\" viewBox=\"0 0 " + std::to_string(spec.width_px) + " " +
         std::to_string(spec.height_px) + "\">\n";
  if (!spec.comment.empty()) {
    std::string c = spec.comment;
    for (std::size_t pos; (pos = c.find("--")) != std::string::npos;) c.replace(pos, 2, "- -");
    out += "<!-- " + c + " -->\n";
  }
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  if (colors) {
    out += "<g stroke=\"none\">\n";
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
      const auto& cell = t.cells[i];
      const std::string& fill = (*colors)[i] ? spec.palette[0] : spec.palette[1];
      if (cell.boundary.empty()) {
        if (cell.area <= 0.0) continue;
        out += "<circle cx=\"" + fmt(cv.cx()) + "\" cy=\"" + fmt(cv.cy()) + "\" r=\"" + fmt(rim * cv.scale()) +
               "\" fill=\"" + fill + "\"/>\n";
        continue;
      }
      std::string d = "M " + cv.xy(to_disk(cell.boundary.front().start)) + " ";
      for (const auto& piece : cell.boundary) {
        DiskPoint a = to_disk(piece.start), b = to_disk(piece.end);
        d += piece.neighbor == kRim ? cv.rim_to(rim, piece.arc_angle, b) : cv.geodesic_to(a, b);
      }
      d += "Z";
      out += "<path d=\"" + d + "\" fill=\"" + fill + "\"/>\n";
    }
    out += "</g>\n";
  }

  out += "<g fill=\"none\" stroke=\"" + spec.stroke + "\" stroke-width=\"" + fmt(spec.stroke_width) +
         "\" stroke-linecap=\"round\">\n";
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    for (const auto& piece : t.cells[i].boundary) {
      if (piece.neighbor < 0) continue;
      if (disk && piece.neighbor <= static_cast<int>(i)) continue;
      DiskPoint a = to_disk(piece.start), b = to_disk(piece.end);
      out += "<path d=\"M " + cv.xy(a) + " " + cv.geodesic_to(a, b) + "\"/>\n";
    }
  }
  if (disk) {
    out += "<circle cx=\"" + fmt(cv.cx()) + "\" cy=\"" + fmt(cv.cy()) + "\" r=\"" + fmt(rim * cv.scale()) + "\"/>\n";
  }
  out += "</g>\n";

  if (spec.show_nuclei) {
    out += "<g fill=\"" + spec.stroke + "\" stroke=\"none\">\n";
    for (const auto& p : t.nuclei) {
      DiskPoint z = to_disk(p);
      out += "<circle cx=\"" + fmt(cv.x(z)) + "\" cy=\"" + fmt(cv.y(z)) + "\" r=\"" + fmt(1.5 * spec.stroke_width) +
             "\"/>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace hypvor

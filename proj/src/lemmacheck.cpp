#include <hypvor/lemmacheck.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hypvor {

AngleMeasure AngleMeasure::uniform() {
  return from_density([](double) { return 1.0 / kTwoPi; });
}

AngleMeasure AngleMeasure::atomic(std::vector<double> angles, std::vector<double> weights) {
  if (angles.size() != weights.size() || angles.empty())
    throw std::invalid_argument("AngleMeasure: atoms and weights must match");
  AngleMeasure m;
  m.angles = std::move(angles);
  m.weights = std::move(weights);
  return m;
}

AngleMeasure AngleMeasure::from_density(std::function<double(double)> f) {
  AngleMeasure m;
  m.density = std::move(f);
  return m;
}

bool AngleMeasure::valid() const {
  if (is_atomic()) {
    double total = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) return false;
      total += w;
    }
    return std::abs(total - 1.0) <= 1e-12;
  }
  if (!density) return false;
  double total = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(density, 0.0, kTwoPi, 10, 1e-12);
  return std::abs(total - 1.0) <= 1e-8;
}

AngleMeasure AngleMeasure::rotated(double shift) const {
  AngleMeasure m = *this;
  if (is_atomic()) {
    for (double& a : m.angles) a += shift;
  } else {
    auto f = density;
    m.density = [f, shift](double a) {
      double b = std::fmod(a - shift, kTwoPi);
      if (b < 0.0) b += kTwoPi;
      return f(b);
    };
  }
  return m;
}

double sine_kernel(const AngleMeasure& nu) {
  if (nu.is_atomic()) {
    double total = 0.0;
    for (std::size_t i = 0; i < nu.angles.size(); ++i)
      for (std::size_t j = 0; j < nu.angles.size(); ++j)
        total += nu.weights[i] * nu.weights[j] * std::abs(std::sin(0.5 * (nu.angles[i] - nu.angles[j])));
    return total;
  }
  using boost::math::quadrature::gauss_kronrod;
  const auto& f = nu.density;
  auto inner = [&](double a) {
    auto g = [&](double b) { return f(b) * std::abs(std::sin(0.5 * (a - b))); };
    // The integrand has a kink at b = a.
    double left = a > 0.0 ? gauss_kronrod<double, 31>::integrate(g, 0.0, a, 12, 1e-12) : 0.0;
    double right = a < kTwoPi ? gauss_kronrod<double, 31>::integrate(g, a, kTwoPi, 12, 1e-12) : 0.0;
    return f(a) * (left + right);
  };
  return gauss_kronrod<double, 31>::integrate(inner, 0.0, kTwoPi, 12, 1e-10);
}

double ring_intersection_area(const HPoint& x, const HPoint& y, double a, double eps) {
  if (!(a > 0.0 && eps > 0.0)) throw std::invalid_argument("ring_intersection_area: a and eps must be positive");
  double d = dist(x, y);
  if (d <= default_tolerances().degenerate) throw DegenerateInput("ring_intersection_area: x and y coincide");
  if (d > 2.0 * a + 2.0 * eps) return 0.0;
  const double b = a + eps;
  const double ch_a = std::cosh(a), ch_b = std::cosh(b), ch_d = std::cosh(d), sh_d = std::sinh(d);
  // In polar coordinates about x with y at [d; 0], z = [r; theta] lies in the
  // ring about y iff cos(theta) is in [lower(r), upper(r)] (law of cosines).
  auto angular = [&](double r) {
    double sd = sh_d * std::sinh(r), cd = ch_d * std::cosh(r);
    double lo = std::max(-1.0, (cd - ch_b) / sd);
    double hi = std::min(1.0, (cd - ch_a) / sd);
    if (!(lo < hi)) return 0.0;
    return 2.0 * (std::acos(lo) - std::acos(hi));
  };
  // The bounds cross +-1 where cosh(r -+ d) equals cosh a or cosh b.
  std::vector<double> cuts{a, b};
  for (double c : {d + a, d - a, a - d, d + b, d - b, b - d})
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  boost::math::quadrature::tanh_sinh<double> integrator;
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (!(cuts[k + 1] > cuts[k])) continue;
    area += integrator.integrate([&](double r) { return angular(r) * std::sinh(r); }, cuts[k], cuts[k + 1], 1e-12);
  }
  return area;
}

bool a_eps_membership(const HPoint& z, const HPoint& y, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("a_eps_membership: eps must be positive");
  if (dist(origin(), y) <= default_tolerances().degenerate) throw DegenerateInput("a_eps_membership: y at the origin");
  if (dist(origin(), z) < dist(origin(), y)) return false;
  // d(p,z) > d(p,y) iff <p, y - z> > 0.
  Vec3 w = y.v - z.v;
  bool pos = false, neg = false;
  auto probe = [&](const HPoint& p) {
    double v = minkowski(p.v, w);
    pos = pos || v > 0.0;
    neg = neg || v < 0.0;
  };
  probe(origin());
  for (int i = 1; i <= 8 && !(pos && neg); ++i) {
    double r = eps * i / 8.0;
    for (int j = 0; j < 64; ++j) probe(from_polar(r, kTwoPi * j / 64.0));
  }
  return pos && neg;
}

LemmaReport inclusion_check(double r, double eps, double delta, std::size_t samples, const Seed& seed) {
  LemmaReport rep;
  rep.lemma = "inclusion";
  rep.params = {{"r", r}, {"eps", eps}, {"delta", delta}};
  rep.samples = samples;
  rep.seed = seed;
  rep.note = "membership probed on 513 points of B_eps";
  rep.max_slack = -std::numeric_limits<double>::infinity();
  Rng rng(seed);
  HPoint y = from_polar(r, 0.0);
  double ch_lo = std::cosh(r), ch_hi = std::cosh(r + 2.0 * eps);
  for (std::size_t k = 0; k < samples; ++k) {
    double rp = std::acosh(ch_lo + rng.uniform() * (ch_hi - ch_lo));
    double th = kTwoPi * rng.uniform();
    if (!a_eps_membership(from_polar(rp, th), y, eps)) continue;
    ++rep.members;
    double bound = 2.0 * (1.0 + delta) * std::abs(std::sin(0.5 * th)) * eps;
    double slack = (rp - r) - bound;
    rep.max_slack = std::max(rep.max_slack, slack);
    if (slack > 0.0) ++rep.violations;
  }
  if (rep.members == 0) rep.max_slack = 0.0;
  rep.verdict = rep.violations == 0;
  return rep;
}

MCEstimate thickened_area(const std::vector<std::pair<HPoint, HPoint>>& segments, double eps, std::size_t samples,
                          const Seed& seed) {
  if (!(eps > 0.0)) throw std::invalid_argument("thickened_area: eps must be positive");
  if (segments.empty()) throw std::invalid_argument("thickened_area: no segments");
  struct Frame {
    HPoint a, b;
    Vec3 tangent, normal;
    double length, rect_area;
  };
  std::vector<Frame> frames;
  double total_rect = 0.0;
  for (const auto& [a, b] : segments) {
    Frame f{a, b, unit_tangent(a, b), {}, dist(a, b), 0.0};
    Vec3 nrm = minkowski_cross(a.v, f.tangent);
    f.normal = nrm * (1.0 / std::sqrt(minkowski(nrm, nrm)));
    f.rect_area = (f.length + 2.0 * eps) * 2.0 * std::sinh(eps);
    total_rect += f.rect_area;
    frames.push_back(f);
  }
  Rng rng(seed);
  const double sh_eps = std::sinh(eps);
  double mean = 0.0, var = 0.0;
  for (const auto& f : frames) {
    std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(static_cast<double>(samples) * f.rect_area / total_rect)));
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      // Fermi coordinates: arclength s along the segment, signed offset t;
      // the area element is cosh t ds dt.
      double s = -eps + rng.uniform() * (f.length + 2.0 * eps);
      double t = std::asinh(sh_eps * (2.0 * rng.uniform() - 1.0));
      Vec3 on_line = f.a.v * std::cosh(s) + f.tangent * std::sinh(s);
      HPoint z = HPoint::normalized(on_line * std::cosh(t) + f.normal * std::sinh(t));
      if (distance_to_segment(z, f.a, f.b) > eps) continue;
      int cover = 0;
      for (const auto& g : frames) cover += distance_to_segment(z, g.a, g.b) <= eps;
      double v = 1.0 / std::max(1, cover);
      sum += v;
      sum2 += v * v;
    }
    double dn = static_cast<double>(n);
    double m = sum / dn;
    double sv = std::max(0.0, (sum2 - dn * m * m) / (dn - 1.0));
    mean += f.rect_area * m;
    var += f.rect_area * f.rect_area * sv / dn;
  }
  MCEstimate e;
  e.mean = mean;
  e.se = std::sqrt(var);
  e.n = samples;
  e.seed = seed;
  return e;
}

MCEstimate thickening_perimeter(const ConvexCell& cell, double eps, std::size_t samples, const Seed& seed) {
  std::vector<std::pair<HPoint, HPoint>> segs;
  for (std::size_t i = 0; i < cell.size(); ++i) segs.push_back({cell.vertices[i], cell.vertices[(i + 1) % cell.size()]});
  MCEstimate e = thickened_area(segs, eps, samples, seed);
  e.mean /= 2.0 * eps;
  e.se /= 2.0 * eps;
  return e;
}

}  // namespace hypvor

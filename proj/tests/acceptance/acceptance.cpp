// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance --only N   run criterion N (1..11)
//
// Exit status is 0 when every selected criterion passes.

#include <hypvor/graphs.hpp>
#include <hypvor/hypmath.hpp>
#include <hypvor/isokawa.hpp>
#include <hypvor/lemmacheck.hpp>
#include <hypvor/stats.hpp>
#include <hypvor/surface.hpp>
#include <hypvor/voronoi.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"

using namespace hypvor;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

unsigned workers() { return resolve_workers(0); }

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

// Typical-cell rows are shared by criteria 1 and 2 (and 3 and 4) when the
// runner executes them in one process.
const RatioRow& typical_row(double lambda, std::size_t replicas) {
  static std::vector<std::pair<std::pair<double, std::size_t>, RatioRow>> cache;
  for (const auto& [key, row] : cache)
    if (key.first == lambda && key.second == replicas) return row;
  ExperimentOptions opt;
  opt.workers = workers();
  cache.push_back({{lambda, replicas}, typical_cell_experiment(lambda, replicas, Seed{20240601, 0}.derive(static_cast<std::uint64_t>(lambda * 1e6)), opt)});
  return cache.back().second;
}

const SurfaceModel& bolza_surface() {
  static const SurfaceModel s = bolza();
  return s;
}

// 1. Mean typical-cell area equals 1/lambda.
void area_law(Outcome& o) {
  for (double lambda : {0.1, 0.5, 1.0}) {
    const RatioRow& row = typical_row(lambda, 10000);
    double z = (row.mean_area.mean - 1.0 / lambda) / row.mean_area.se;
    o.detail << " lambda " << lambda << ": " << fmt(row.mean_area.mean) << " +- " << fmt(row.mean_area.se)
             << " vs " << fmt(1.0 / lambda) << " (z " << fmt(z, 2) << ", excluded " << row.mean_area.excluded << ");";
    o.require(row.mean_area.within(1.0 / lambda, 3.0), "area at lambda " + fmt(lambda, 2));
    o.require(row.mean_area.valid(), "exclusions at lambda " + fmt(lambda, 2));
  }
}

// 2. Mean typical-cell perimeter equals the quadrature.
void perimeter_law(Outcome& o) {
  for (double lambda : {0.1, 0.5, 1.0}) {
    const RatioRow& row = typical_row(lambda, 10000);
    double ref = oracle::frozen_perimeter(lambda);
    double z = (row.mean_perimeter.mean - ref) / row.mean_perimeter.se;
    o.detail << " lambda " << lambda << ": " << fmt(row.mean_perimeter.mean) << " +- " << fmt(row.mean_perimeter.se)
             << " vs " << fmt(ref) << " (z " << fmt(z, 2) << ");";
    o.require(std::abs(isokawa_perimeter(lambda) / ref - 1.0) < 1e-9, "quadrature vs frozen value");
    o.require(row.mean_perimeter.within(ref, 3.0), "perimeter at lambda " + fmt(lambda, 2));
  }
}

// 3. Perimeter/area ratio near 4/pi at small intensity.
void ratio_limit(Outcome& o) {
  const RatioRow& row = typical_row(0.01, 1000);
  double target = 4.0 / kPi;
  double rel = row.ratio / target - 1.0;
  o.detail << " lambda 0.01: ratio " << fmt(row.ratio) << " vs 4/pi " << fmt(target) << " (relative "
           << fmt(rel, 4) << "); quadrature ratio " << fmt(0.01 * oracle::frozen_perimeter(0.01)) << ";";
  o.require(std::abs(rel) <= 0.05, "ratio outside 5% of 4/pi");
}

// 4. Boundary density near 2/pi at small intensity.
void density_limit(Outcome& o) {
  const RatioRow& row = typical_row(0.01, 1000);
  double target = 2.0 / kPi;
  double rel = row.density() / target - 1.0;
  o.detail << " lambda 0.01: density " << fmt(row.density()) << " vs 2/pi " << fmt(target) << " (relative "
           << fmt(rel, 4) << "); quadrature density " << fmt(0.005 * oracle::frozen_perimeter(0.01)) << ";";
  o.require(std::abs(rel) <= 0.05, "density outside 5% of 2/pi");
}

// 5. Surface boundary density matches the planar prediction.
void surface_locality(Outcome& o) {
  const SurfaceModel& s = bolza_surface();
  const double lambda = 2.0;
  const std::size_t draws = 500;
  std::vector<double> density(draws), area_err(draws);
  parallel_for(draws, workers(), [&](std::size_t k) {
    Tessellation t = surface_voronoi(lambda, s, Seed{20240605, k});
    double total = 0.0;
    for (const auto& c : t.cells) total += c.area;
    area_err[k] = std::abs(total / (4.0 * kPi) - 1.0);
    density[k] = t.boundary_length / (4.0 * kPi);
  });
  MCEstimate d = estimate(density);
  double worst = *std::max_element(area_err.begin(), area_err.end());
  double target = 0.5 * lambda * oracle::frozen_perimeter(lambda);
  double rel = d.mean / target - 1.0;
  o.detail << " density " << fmt(d.mean) << " +- " << fmt(d.se) << " vs " << fmt(target) << " (relative "
           << fmt(rel, 4) << "); worst area-sum error " << worst << ";";
  o.require(std::abs(rel) <= 0.05, "boundary density outside 5%");
  o.require(worst <= 1e-6, "cell areas do not sum to 4 pi");
}

// 6. Coloring statistics on the surface.
void coloring_stats(Outcome& o) {
  const SurfaceModel& s = bolza_surface();
  auto outcomes = coloring_experiment(2.0, s, 1000, Seed{20240606, 0}, workers());
  std::vector<double> black;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : outcomes) {
    black.push_back(c.black_area);
    best = std::min(best, c.cheeger_value);
  }
  MCEstimate m = estimate(black);
  o.detail << " black area " << fmt(m.mean) << " +- " << fmt(m.se) << " vs 2pi " << fmt(kTwoPi)
           << "; best h* " << fmt(best) << ";";
  o.require(m.within(kTwoPi, 3.0), "mean black area");
  const std::size_t fixed = 10;
  std::vector<VarianceCheck> checks(fixed);
  parallel_for(fixed, workers(), [&](std::size_t k) {
    Tessellation t = surface_voronoi(2.0, s, Seed{20240607, k});
    checks[k] = conditional_variance(t, 10000, Seed{20240608, k});
  });
  for (std::size_t k = 0; k < fixed; ++k) {
    const auto& v = checks[k];
    double z = (v.empirical - v.predicted) / v.se;
    o.detail << " var[" << k << "] " << fmt(v.empirical, 4) << " vs " << fmt(v.predicted, 4) << " (z " << fmt(z, 2)
             << ");";
    o.require(std::abs(z) <= 3.0, "conditional variance on tessellation " + std::to_string(k));
  }
}

// 7. Graph warm-up bounds.
void graph_warmup(Outcome& o) {
  RegularGraph g = random_regular(10000, 3, Seed{20240609, 0});
  RegionPartition p = spanning_tree_regions(g, 50, Seed{20240609, 1});
  o.require(check_partition(g, p).empty(), "partition invariants");
  ColoringEstimate region = region_coloring_estimate(g, p, 1000, Seed{20240609, 2});
  double bound = 1.15 * (3.0 - 2.0) / 2.0;
  o.detail << " region h* " << fmt(region.h_star.mean, 5) << " +- " << fmt(region.h_star.se, 5) << " (bound "
           << fmt(bound, 3) << ", " << p.regions() << " regions);";
  o.require(region.h_star.mean <= bound, "region coloring mean h*");

  RegularGraph h = random_regular(1000, 3, Seed{20240609, 3});
  ColoringEstimate half = half_coloring_estimate(h, 1000, Seed{20240609, 4});
  double ratio = half.boundary.mean / 750.0;
  o.detail << " half coloring n 1000: mean |dA| " << fmt(half.boundary.mean, 3) << ", ratio to 750 " << fmt(ratio, 5)
           << ";";
  o.require(ratio >= 0.97 && ratio <= 1.03, "half coloring ratio");
}

// Independent exhaustive Cheeger constant: recount every subset.
double brute_cheeger(const Graph& g) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << g.n); ++mask) {
    std::size_t size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (2 * size > g.n) continue;
    std::size_t cut = 0;
    for (const auto& [a, b] : g.edges) cut += ((mask >> a) & 1u) != ((mask >> b) & 1u);
    best = std::min(best, static_cast<double>(cut) / static_cast<double>(size));
  }
  return best;
}

// 8. The exact oracle never exceeds a randomized bound.
void exact_soundness(Outcome& o) {
  std::vector<std::pair<std::string, Graph>> corpus{{"K4", complete_graph(4)}, {"petersen", petersen_graph()}};
  for (std::size_t n = 3; n <= 14; ++n) corpus.push_back({"C" + std::to_string(n), cycle_graph(n)});
  for (std::uint64_t k = 0; k < 50; ++k) {
    std::size_t n = 4 + 2 * (k % 6);
    corpus.push_back({"cubic" + std::to_string(k), random_regular(n, 3, Seed{20240610, k})});
  }
  std::size_t bounds = 0;
  for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
    const auto& [name, g] = corpus[idx];
    double exact = exact_cheeger(g);
    o.require(std::abs(exact - brute_cheeger(g)) < 1e-12, name + " exact vs exhaustive");
    if (g.n % 2 == 0) {
      for (const auto& t : half_coloring_estimate(g, 200, Seed{20240611, idx}).trials) {
        o.require(exact <= t.h_star, name + " half coloring");
        ++bounds;
      }
    }
    if (g.n >= 4) {
      RegionPartition p = spanning_tree_regions(g, 2, Seed{20240612, idx});
      if (p.regions() >= 2)
        for (const auto& t : region_coloring_estimate(g, p, 200, Seed{20240613, idx}).trials) {
          if (std::isinf(t.h_star)) continue;
          o.require(exact <= t.h_star, name + " region coloring");
          ++bounds;
        }
    }
  }
  double k4 = brute_cheeger(complete_graph(4)), c6 = brute_cheeger(cycle_graph(6)), pet = brute_cheeger(petersen_graph());
  o.detail << " " << corpus.size() << " graphs, " << bounds << " sampled bounds; K4 " << fmt(k4) << ", C6 " << fmt(c6)
           << ", Petersen " << fmt(pet) << ";";
  o.require(std::abs(exact_cheeger(complete_graph(4)) - k4) < 1e-12 && std::abs(k4 - 2.0) < 1e-12, "K4 -> 2");
  o.require(std::abs(exact_cheeger(cycle_graph(6)) - c6) < 1e-12 && std::abs(c6 - 2.0 / 3.0) < 1e-12, "C6 -> 2/3");
  o.require(std::abs(exact_cheeger(petersen_graph()) - pet) < 1e-12 && std::abs(pet - 1.0) < 1e-12,
            "Petersen -> 1");
}

// 9. Lemma suite.
void lemma_suite(Outcome& o) {
  double uni = sine_kernel(AngleMeasure::uniform());
  o.detail << " uniform sine kernel " << fmt(uni, 10) << ";";
  o.require(std::abs(uni - 2.0 / kPi) <= 1e-6, "uniform sine kernel");
  Rng rng(Seed{20240614, 0});
  double worst = -1.0;
  for (int k = 0; k < 1000; ++k) {
    std::size_t n = 1 + rng.below(64);
    std::vector<double> a(n), w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = kTwoPi * rng.uniform();
      w[i] = rng.uniform();
      total += w[i];
    }
    for (double& x : w) x /= total;
    worst = std::max(worst, sine_kernel(AngleMeasure::atomic(a, w)));
  }
  o.detail << " max over random measures " << fmt(worst, 10) << ";";
  o.require(worst <= 2.0 / kPi + 1e-9, "sine kernel above 2/pi");

  HPoint x = origin(), y = from_polar(1.0, 0.0);
  double l2 = std::log(ring_intersection_area(x, y, 2.0, 1e-2));
  double l4 = std::log(ring_intersection_area(x, y, 2.0, 1e-4));
  double slope = (l4 - l2) / (std::log(1e-4) - std::log(1e-2));
  o.detail << " ring slope " << fmt(slope, 4) << ";";
  o.require(slope >= 1.4, "thin-ring slope");

  LemmaReport ok = inclusion_check(5.0, 0.01, 0.1, 100000, Seed{20240615, 0});
  LemmaReport control = inclusion_check(5.0, 0.01, -0.5, 100000, Seed{20240615, 0});
  o.detail << " inclusion: " << ok.members << " members, " << ok.violations << " violations; control: "
           << control.violations << " violations;";
  o.require(ok.verdict && ok.violations == 0, "inclusion at delta 0.1");
  o.require(!control.verdict, "negative control passed");
}

// Dirichlet domain of x as a clipper in the frame of x.
CellClipper dirichlet_clipper(const HPoint& x, const SurfaceModel& s) {
  CellClipper c(x);
  for (std::size_t i = 1; i < s.translates.size(); ++i)
    if (s.translate_reach[i] <= 2.0 * s.covering_radius + 4.0) c.clip(apply(s.translates[i], x), static_cast<int>(i));
  return c;
}

// 10. Geometry kernel.
void geometry_kernel(Outcome& o) {
  Rng rng(Seed{20240616, 0});
  int outside = 0;
  double worst_z = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    ConvexCell c = oracle::random_cell(rng);
    MCEstimate mc = oracle::mc_cell_area(c, 100000, Seed{20240617, k});
    double z = std::abs(mc.mean - polygon_area(c)) / mc.se;
    worst_z = std::max(worst_z, z);
    outside += z > 3.0;
  }
  o.detail << " Gauss-Bonnet vs MC: " << outside << "/100 beyond 3 se (max z " << fmt(worst_z, 2) << ");";
  o.require(outside == 0, "Gauss-Bonnet vs MC");

  double rt_polar = 0.0, rt_angle = 0.0, rt_disk = 0.0, rt_back = 0.0;
  for (int k = 0; k < 100000; ++k) {
    double r = 25.0 * rng.uniform(), th = kTwoPi * rng.uniform();
    HPoint p = from_polar(r, th);
    PolarCoord pc = to_polar(p);
    rt_polar = std::max(rt_polar, std::abs(pc.r - r) / std::max(1.0, r));
    rt_angle = std::max(rt_angle, std::abs(std::remainder(pc.theta - th, kTwoPi)));
    if (r < 12.0) {
      DiskPoint z = to_disk(p);
      rt_disk = std::max(rt_disk, std::abs(2.0 * std::atanh(std::hypot(z.u, z.v)) - r) / std::max(1.0, r));
      HPoint q = from_disk(z);
      double gap = std::max({std::abs(q.x0() - p.x0()), std::abs(q.x1() - p.x1()), std::abs(q.x2() - p.x2())});
      rt_back = std::max(rt_back, gap / std::cosh(r));
    }
  }
  double worst_rt = std::max({rt_polar, rt_angle, rt_disk, rt_back});
  o.detail << " worst round-trip " << worst_rt << " (polar " << rt_polar << ", angle " << rt_angle << ", disk "
           << rt_disk << ", back " << rt_back << ");";
  o.require(worst_rt <= 1e-10, "model round-trips");

  const SurfaceModel& s = bolza_surface();
  double worst_circle = 0.0, worst_ball = 0.0;
  int ball_mc_outside = 0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    HPoint x;
    do {
      x = oracle::uniform_in_ball(rng, s.covering_radius);
    } while (!s.domain.contains(x));
    double r = k == 0 ? 3.0 : 0.5 + 2.5 * rng.uniform();
    if (k == 0) x = origin();
    SurfacePoint sx{x};
    DirichletDomain dom = dirichlet_domain(sx, s);
    // Circle identity against the scanning oracle and the rim arcs of the clipped domain.
    double lib = angular_set(dom, r).measure() * std::sinh(r);
    double scan = oracle::circle_in_domain_measure(x, r, s) * std::sinh(r);
    CellClipper dc = dirichlet_clipper(x, s);
    ClippedRegion reg = clip_to_ball(dc.local(), Isometry::identity(), r);
    double rim = reg.covers_ball ? kTwoPi : 0.0;
    for (const auto& p : reg.pieces)
      if (p.neighbor == kRim) rim += p.arc_angle;
    worst_circle = std::max({worst_circle, std::abs(lib / scan - 1.0), std::abs(lib / (rim * std::sinh(r)) - 1.0)});
    // Ball identity: Simpson integral of the angular set against the clipped area.
    const int n = 4000;
    double h = r / n, sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      double t = i * h;
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += w * angular_set(dom, t).measure() * std::sinh(t);
    }
    double integral = sum * h / 3.0;
    worst_ball = std::max(worst_ball, std::abs(integral / reg.area - 1.0));
    MCEstimate mc = oracle::mc_surface_ball_area(x, r, s, 50000, Seed{20240618, k});
    // A ball inside the domain gives zero sample variance; allow rounding.
    ball_mc_outside += std::abs(mc.mean - integral) > 3.0 * mc.se + 1e-9 * integral;
  }
  o.detail << " circle identity worst " << worst_circle << "; ball identity worst " << worst_ball << ", MC "
           << ball_mc_outside << "/10 beyond 3 se;";
  o.require(worst_circle <= 1e-6, "circle identity");
  o.require(worst_ball <= 1e-4, "ball identity");
  o.require(ball_mc_outside == 0, "ball identity vs MC");
}

int shell(const std::string& cmd) {
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 11. Byte-identical artifacts across reruns and worker counts.
void determinism(Outcome& o) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
      {"typical-cell --lambda 0.5 --replicas 300 --json tc.json", {"typical_cell.csv", "tc.json"}},
      {"density --lambdas 1,0.5 --replicas 200 --json d.json", {"density.csv", "d.json"}},
      {"tessellate --lambda 1 --radius 5 --color --svg t.svg --json t.json", {"tessellation.csv", "t.svg", "t.json"}},
      {"surface --lambda 2 --draws 20 --json s.json", {"surface.csv", "s.json"}},
      {"color --lambda 2 --trials 100 --colorings 500 --json c.json", {"coloring.csv", "c.json"}},
      {"graph --n 2000 --s 50 --trials 100 --json g.json", {"graph.csv", "g.json"}},
      {"lemma --name inclusion --samples 20000", {"lemma.json"}},
      {"render --window surface --lambda 1 --color --svg r.svg", {"r.svg"}},
  };
  std::size_t compared = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& [args, files] = runs[k];
    std::vector<oracle::TempDir> dirs;
    dirs.reserve(3);
    const char* variants[] = {"--workers 1", "--workers 1", "--workers 8"};
    for (int v = 0; v < 3; ++v) {
      dirs.emplace_back("acc11_" + std::to_string(k) + "_" + std::to_string(v));
      std::string cmd = std::string("'") + HYPVOR_CLI_PATH + "' --seed 99 " + variants[v] + " --out-dir '" +
                        dirs.back().path().string() + "' " + args + " > /dev/null";
      o.require(shell(cmd) == 0, "command failed: " + args);
    }
    for (const auto& f : files) {
      std::string ref = oracle::read_file(dirs[0].file(f));
      o.require(!ref.empty(), "missing " + f);
      o.require(ref == oracle::read_file(dirs[1].file(f)), f + " differs between reruns");
      o.require(ref == oracle::read_file(dirs[2].file(f)), f + " differs between 1 and 8 workers");
      ++compared;
    }
  }
  o.detail << " " << compared << " artifacts compared across 3 runs each;";
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "Run a single criterion")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "typical-cell area law", area_law},
      {2, "typical-cell perimeter vs quadrature", perimeter_law},
      {3, "perimeter/area ratio near 4/pi at lambda 0.01", ratio_limit},
      {4, "boundary density near 2/pi at lambda 0.01", density_limit},
      {5, "surface locality on Bolza", surface_locality},
      {6, "coloring statistics on Bolza", coloring_stats},
      {7, "graph warm-up bounds", graph_warmup},
      {8, "exact Cheeger oracle soundness", exact_soundness},
      {9, "lemma suite", lemma_suite},
      {10, "geometry kernel", geometry_kernel},
      {11, "determinism of artifacts", determinism},
  };
  bool all = true;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s):%s %.1fs\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str(),
                secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}

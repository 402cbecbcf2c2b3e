#include "commands.hpp"

#include <hypvor/graphs.hpp>
#include <hypvor/io.hpp>
#include <hypvor/isokawa.hpp>
#include <hypvor/lemmacheck.hpp>
#include <hypvor/render.hpp>
#include <hypvor/sampler.hpp>
#include <hypvor/stats.hpp>
#include <hypvor/surface.hpp>
#include <hypvor/voronoi.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace hypvor::cli {
namespace {

using nlohmann::json;

constexpr std::uint64_t kColorTag = 0x636f6c6f72ULL;
constexpr std::uint64_t kTessTag = 0x74657373ULL;
constexpr std::uint64_t kGraphTag = 0x6772617068ULL;
constexpr std::uint64_t kPartitionTag = 0x70617274ULL;
constexpr std::uint64_t kTrialTag = 0x747269616cULL;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::string out_dir = ".";
  bool check = false;
  double k_sigma = 3.0;
};

std::string resolve_path(const Common& c, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute() || c.out_dir.empty()) return p;
  return (std::filesystem::path(c.out_dir) / path).string();
}

// The worker count is left out: it never changes results, and outputs must be
// byte-identical across worker counts.
json common_json(const Common& c) { return {{"seed", c.seed}, {"check", c.check}, {"k_sigma", c.k_sigma}}; }

/// Collects band violations; each is reported as one line.
class Bands {
 public:
  void require(bool ok, const std::string& row) {
    if (!ok) failures_.push_back(row);
  }
  int finish(const Common& c) const {
    if (!c.check) return kExitOk;
    for (const auto& f : failures_) std::cerr << "band failure: " << f << "\n";
    if (failures_.empty()) std::cerr << "check: all bands hold\n";
    return failures_.empty() ? kExitOk : kExitBand;
  }

 private:
  std::vector<std::string> failures_;
};

std::string r(double v) { return format_real(v); }

void write_csv(const Common& c, const std::string& path, CsvTable& table, const json& config) {
  table.meta("config", config.dump());
  table.meta("seed", Seed{c.seed, 0}.str());
  write_text(resolve_path(c, path), table.str());
}

void write_json(const Common& c, const std::string& path, const json& config, const json& results) {
  if (path.empty()) return;
  write_text(resolve_path(c, path), summary_json(config, Seed{c.seed, 0}, results).dump(2) + "\n");
}

std::vector<std::string> ratio_columns() {
  return {"lambda", "mean_area", "se_area", "mean_perimeter", "se_perimeter", "ratio", "reference_perimeter",
          "excluded", "seed"};
}

std::vector<std::string> ratio_fields(const RatioRow& row) {
  return {r(row.lambda),         r(row.mean_area.mean),     r(row.mean_area.se),
          r(row.mean_perimeter.mean), r(row.mean_perimeter.se), r(row.ratio),
          r(row.reference_perimeter), std::to_string(row.mean_area.excluded), row.mean_area.seed.str()};
}

std::string join(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t i = 0; i < fields.size(); ++i) s += (i ? "," : "") + fields[i];
  return s;
}

// ---------------------------------------------------------------------------

struct TypicalCellCmd {
  double lambda = 1.0;
  std::size_t replicas = 10000;
  double window_cap = 25.0;
  std::string out = "typical_cell.csv";
  std::string json_out;

  void attach(CLI::App& app) {
    app.add_option("--lambda", lambda, "Intensity")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--replicas", replicas, "Typical cells to sample")->check(CLI::Range(100, 100000000))
        ->capture_default_str();
    app.add_option("--window-cap", window_cap, "Largest sampling window radius")->check(CLI::Range(3.0, 25.0))
        ->capture_default_str();
    app.add_option("--out", out, "CSV output")->capture_default_str();
    app.add_option("--json", json_out, "JSON summary output");
  }

  json config(const Common& c) const {
    json j = common_json(c);
    j.update({{"command", "typical-cell"}, {"lambda", lambda}, {"replicas", replicas}, {"window_cap", window_cap},
              {"out", out}, {"json", json_out}});
    return j;
  }

  int run(const Common& c) const {
    ExperimentOptions opt;
    opt.workers = c.workers;
    opt.cell.window_cap = window_cap;
    RatioRow row = typical_cell_experiment(lambda, replicas, Seed{c.seed, 0}, opt);
    json cfg = config(c);
    CsvTable table("ratio-row/1", ratio_columns());
    table.row(ratio_fields(row));
    write_csv(c, out, table, cfg);
    write_json(c, json_out, cfg,
               {{"mean_area", row.mean_area.mean},
                {"se_area", row.mean_area.se},
                {"mean_perimeter", row.mean_perimeter.mean},
                {"se_perimeter", row.mean_perimeter.se},
                {"ratio", row.ratio},
                {"reference_area", 1.0 / lambda},
                {"reference_perimeter", row.reference_perimeter},
                {"excluded", row.mean_area.excluded}});
    std::printf("lambda %s: area %.6f +- %.6f (1/lambda = %.6f), perimeter %.6f +- %.6f (reference %.6f)\n",
                r(lambda).c_str(), row.mean_area.mean, row.mean_area.se, 1.0 / lambda, row.mean_perimeter.mean,
                row.mean_perimeter.se, row.reference_perimeter);
    Bands bands;
    bands.require(row.mean_area.within(1.0 / lambda, c.k_sigma) && row.mean_perimeter.within(row.reference_perimeter, c.k_sigma) &&
                      row.mean_area.valid(),
                  join(ratio_fields(row)));
    return bands.finish(c);
  }
};

struct IsokawaRefCmd {
  double lambda = 1.0;
  bool detail = false;

  void attach(CLI::App& app) {
    app.add_option("--lambda", lambda, "Intensity")->required()->check(CLI::PositiveNumber);
    app.add_flag("--detail", detail, "Also print the quadrature error estimate and tail bound");
  }

  int run(const Common&) const {
    QuadratureResult q = isokawa_perimeter_detail(lambda);
    std::printf("%.10f\n", q.value);
    if (detail) std::printf("error_estimate %.3e\ntail_bound %.3e\n", q.error_estimate, q.tail_bound);
    return kExitOk;
  }
};

struct DensityCmd {
  std::vector<double> lambdas{1.0, 0.1, 0.01};
  std::size_t replicas = 1000;
  double tolerance = 0.05;
  double small_lambda = 0.01;
  std::string out = "density.csv";
  std::string json_out;

  void attach(CLI::App& app) {
    app.add_option("--lambdas", lambdas, "Descending intensities")->check(CLI::PositiveNumber)->delimiter(',')
        ->capture_default_str();
    app.add_option("--replicas", replicas, "Typical cells per intensity")->check(CLI::Range(100, 100000000))
        ->capture_default_str();
    app.add_option("--tolerance", tolerance, "Relative band around 2/pi for small intensities")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app.add_option("--small-lambda", small_lambda, "Rows at or below this intensity are checked against 2/pi")
        ->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--out", out, "CSV output")->capture_default_str();
    app.add_option("--json", json_out, "JSON summary output");
  }

  json config(const Common& c) const {
    json j = common_json(c);
    j.update({{"command", "density"}, {"lambdas", lambdas}, {"replicas", replicas}, {"tolerance", tolerance},
              {"small_lambda", small_lambda}, {"out", out}, {"json", json_out}});
    return j;
  }

  int run(const Common& c) const {
    for (std::size_t i = 1; i < lambdas.size(); ++i)
      if (!(lambdas[i] < lambdas[i - 1])) throw UsageError("--lambdas must be strictly descending");
    ExperimentOptions opt;
    opt.workers = c.workers;
    auto rows = density_experiment(lambdas, replicas, Seed{c.seed, 0}, opt);
    json cfg = config(c);
    auto cols = ratio_columns();
    cols.insert(cols.end(), {"density", "reference_density"});
    CsvTable table("density-row/1", cols);
    json results = json::array();
    Bands bands;
    const double limit = 2.0 / kPi;
    for (const auto& row : rows) {
      auto fields = ratio_fields(row);
      double ref_density = 0.5 * row.lambda * row.reference_perimeter;
      fields.insert(fields.end(), {r(row.density()), r(ref_density)});
      table.row(fields);
      results.push_back({{"lambda", row.lambda},
                         {"density", row.density()},
                         {"reference_density", ref_density},
                         {"ratio", row.ratio}});
      std::printf("lambda %s: density %.6f (quadrature %.6f, 2/pi %.6f), ratio %.6f (4/pi %.6f)\n",
                  r(row.lambda).c_str(), row.density(), ref_density, limit, row.ratio, 2.0 * limit);
      bands.require(row.mean_perimeter.within(row.reference_perimeter, c.k_sigma), join(fields));
      if (row.lambda <= small_lambda)
        bands.require(std::abs(row.density() / limit - 1.0) <= tolerance, join(fields));
    }
    write_csv(c, out, table, cfg);
    write_json(c, json_out, cfg, {{"rows", results}, {"limit_density", limit}});
    return bands.finish(c);
  }
};

struct RenderOptions {
  int width = 800;
  int height = 800;
  double stroke_width = 0.6;
  bool nuclei = false;

  void attach(CLI::App& app) {
    app.add_option("--width", width, "SVG width in pixels")->check(CLI::Range(64, 8192))->capture_default_str();
    app.add_option("--height", height, "SVG height in pixels")->check(CLI::Range(64, 8192))->capture_default_str();
    app.add_option("--stroke-width", stroke_width, "Edge stroke width")->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--nuclei", nuclei, "Draw the nuclei");
  }
  json config() const {
    return {{"width", width}, {"height", height}, {"stroke_width", stroke_width}, {"nuclei", nuclei}};
  }
  RenderSpec spec(const json& cfg) const {
    RenderSpec s;
    s.width_px = width;
    s.height_px = height;
    s.stroke_width = stroke_width;
    s.show_nuclei = nuclei;
    s.comment = "hypvor artifact_version " + std::string(kArtifactVersion) + " config " + cfg.dump();
    return s;
  }
};

std::optional<std::vector<bool>> maybe_colors(bool color, std::size_t cells, const Common& c) {
  if (!color) return std::nullopt;
  Rng rng(Seed{c.seed, 0}.derive(kColorTag));
  return random_coloring(cells, rng);
}

struct TessellateCmd {
  double lambda = 1.0;
  double radius = 8.0;
  bool color = false;
  std::string svg;
  std::string out = "tessellation.csv";
  std::string json_out;
  RenderOptions render;

  void attach(CLI::App& app) {
    app.add_option("--lambda", lambda, "Intensity")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--radius", radius, "Window radius")->check(CLI::Range(0.1, 25.0))->capture_default_str();
    app.add_flag("--color", color, "Color cells black/white at random");
    app.add_option("--svg", svg, "SVG output");
    app.add_option("--out", out, "Per-cell CSV output")->capture_default_str();
    app.add_option("--json", json_out, "JSON summary output");
    render.attach(app);
  }

  json config(const Common& c) const {
    json j = common_json(c);
    j.update({{"command", "tessellate"}, {"lambda", lambda}, {"radius", radius}, {"color", color}, {"svg", svg},
              {"out", out}, {"json", json_out}, {"render", render.config()}});
    return j;
  }

  int run(const Common& c) const {
    PointCloud cloud = poisson_disk(lambda, radius, Seed{c.seed, 0});
    if (cloud.points.empty()) throw UsageError("the sampled window holds no points; raise --lambda or --radius");
    Tessellation t = tessellate_window(cloud, {c.workers});
    json cfg = config(c);
    auto colors = maybe_colors(color, t.cells.size(), c);

    CsvTable table("tessellation-cell/1", {"cell", "x0", "x1", "x2", "area", "sides", "interior_length", "black"});
    double area_sum = 0.0;
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
      const auto& cell = t.cells[i];
      double interior = 0.0;
      for (const auto& s : cell.sides)
        if (s.neighbor >= 0) interior += s.length;
      area_sum += cell.area;
      table.row({std::to_string(i), r(cell.nucleus.x0()), r(cell.nucleus.x1()), r(cell.nucleus.x2()), r(cell.area),
                 std::to_string(cell.sides.size()), r(interior), colors ? ((*colors)[i] ? "1" : "0") : ""});
    }
    write_csv(c, out, table, cfg);
    if (!svg.empty()) write_text(resolve_path(c, svg), render_svg(t, colors, render.spec(cfg)));
    double rel = std::abs(area_sum / t.window.area - 1.0);
    write_json(c, json_out, cfg,
               {{"cells", t.cells.size()},
                {"window_area", t.window.area},
                {"area_sum", area_sum},
                {"boundary_length", t.boundary_length},
                {"boundary_density", t.boundary_length / t.window.area}});
    std::printf("%zu cells, boundary length %.6f, area sum %.9f of %.9f\n", t.cells.size(), t.boundary_length,
                area_sum, t.window.area);
    Bands bands;
    bands.require(rel <= 1e-6, "area_sum " + r(area_sum) + " window_area " + r(t.window.area));
    return bands.finish(c);
  }
};

struct SurfaceCmd {
  double lambda = 2.0;
  std::size_t draws = 500;
  double tolerance = 0.05;
  std::string out = "surface.csv";
  std::string json_out;

  void attach(CLI::App& app) {
    app.add_option("--lambda", lambda, "Intensity (at least 0.25)")->check(CLI::Range(0.25, 1000.0))
        ->capture_default_str();
    app.add_option("--draws", draws, "Independent tessellations")->check(CLI::Range(1, 10000000))
        ->capture_default_str();
    app.add_option("--tolerance", tolerance, "Relative band around the planar prediction")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app.add_option("--out", out, "CSV output")->capture_default_str();
    app.add_option("--json", json_out, "JSON summary output");
  }

  json config(const Common& c) const {
    json j = common_json(c);
    j.update({{"command", "surface"}, {"lambda", lambda}, {"draws", draws}, {"tolerance", tolerance}, {"out", out},
              {"json", json_out}});
    return j;
  }

  int run(const Common& c) const {
    SurfaceModel surf = bolza();
    struct Draw {
      std::size_t cells = 0;
      double area_sum = 0.0, boundary = 0.0;
    };
    std::vector<Draw> results(draws);
    const Seed base{c.seed, 0};
    parallel_for(draws, c.workers, [&](std::size_t k) {
      Tessellation t = surface_voronoi(lambda, surf, base.with_stream(k));
      Draw d;
      d.cells = t.cells.size();
      for (const auto& cell : t.cells) d.area_sum += cell.area;
      d.boundary = t.boundary_length;
      results[k] = d;
    });
    json cfg = config(c);
    CsvTable table("surface-draw/1", {"draw", "N", "area_sum", "boundary_length", "boundary_density", "seed"});
    std::vector<double> densities;
    Bands bands;
    for (std::size_t k = 0; k < draws; ++k) {
      const auto& d = results[k];
      std::vector<std::string> fields{std::to_string(k), std::to_string(d.cells), r(d.area_sum), r(d.boundary),
                                      r(d.boundary / surf.area), base.with_stream(k).str()};
      table.row(fields);
      densities.push_back(d.boundary / surf.area);
      bands.require(std::abs(d.area_sum / surf.area - 1.0) <= 1e-6, join(fields));
    }
    MCEstimate density = estimate(densities, base);
    double predicted = 0.5 * lambda * isokawa_perimeter(lambda);
    write_csv(c, out, table, cfg);
    write_json(c, json_out, cfg,
               {{"mean_density", density.mean}, {"se_density", density.se}, {"predicted_density", predicted},
                {"systole", surf.systole()}, {"surface_area", surf.area}});
    std::printf("boundary density %.6f +- %.6f, planar prediction %.6f (relative difference %.4f)\n", density.mean,
                density.se, predicted, density.mean / predicted - 1.0);
    bands.require(std::abs(density.mean / predicted - 1.0) <= tolerance,
                  "mean_density " + r(density.mean) + " predicted " + r(predicted));
    return bands.finish(c);
  }
};

struct ColorCmd {
  double lambda = 2.0;
  std::size_t trials = 1000;
  std::size_t colorings = 10000;
  std::string out = "coloring.csv";
  std::string json_out;

  void attach(CLI::App& app) {
    app.add_option("--lambda", lambda, "Intensity (at least 0.25)")->check(CLI::Range(0.25, 1000.0))
        ->capture_default_str();
    app.add_option("--trials", trials, "Tessellation and coloring pairs")->check(CLI::Range(100, 10000000))
        ->capture_default_str();
    app.add_option("--colorings", colorings, "Recolorings of one fixed tessellation")
        ->check(CLI::Range(100, 100000000))->capture_default_str();
    app.add_option("--out", out, "CSV output")->capture_default_str();
    app.add_option("--json", json_out, "JSON summary output");
  }

  json config(const Common& c) const {
    json j = common_json(c);
    j.update({{"command", "color"}, {"lambda", lambda}, {"trials", trials}, {"colorings", colorings}, {"out", out},
              {"json", json_out}});
    return j;
  }

  int run(const Common& c) const {
    SurfaceModel surf = bolza();
    const Seed base{c.seed, 0};
    auto outcomes = coloring_experiment(lambda, surf, trials, base, c.workers);
    json cfg = config(c);
    CsvTable table("coloring-trial/1", {"lambda", "N", "black_area", "boundary_length", "cheeger_value", "seed"});
    std::vector<double> black;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : outcomes) {
      table.row({r(lambda), std::to_string(o.cells), r(o.black_area), r(o.boundary_length), r(o.cheeger_value),
                 o.seed.str()});
      black.push_back(o.black_area);
      best = std::min(best, o.cheeger_value);
    }
    MCEstimate mean_black = estimate(black, base);
    Tessellation fixed = surface_voronoi(lambda, surf, base.derive(kTessTag));
    VarianceCheck var = conditional_variance(fixed, colorings, base.derive(kColorTag));
    write_csv(c, out, table, cfg);
    write_json(c, json_out, cfg,
               {{"mean_black_area", mean_black.mean},
                {"se_black_area", mean_black.se},
                {"half_area", 0.5 * surf.area},
                {"min_cheeger_value", best},
                {"variance", {{"cells", fixed.cells.size()},
                              {"empirical", var.empirical},
                              {"se", var.se},
                              {"predicted", var.predicted},
                              {"colorings", var.colorings}}}});
    std::printf("black area %.6f +- %.6f (half area %.6f); variance %.6f +- %.6f vs %.6f; best h* %.6f\n",
                mean_black.mean, mean_black.se, 0.5 * surf.area, var.empirical, var.se, var.predicted, best);
    Bands bands;
    bands.require(mean_black.within(0.5 * surf.area, c.k_sigma),
                  "mean_black_area " + r(mean_black.mean) + " se " + r(mean_black.se));
    bands.require(std::abs(var.empirical - var.predicted) <= c.k_sigma * var.se,
                  "variance " + r(var.empirical) + " se " + r(var.se) + " predicted " + r(var.predicted));
    return bands.finish(c);
  }
};

struct GraphCmd {
  std::size_t n = 10000;
  int d = 3;
  std::size_t s = 50;
  std::size_t trials = 1000;
  std::string mode = "region";
  double slack = 1.15;
  std::string out = "graph.csv";
  std::string json_out;

  void attach(CLI::App& app) {
    app.add_option("--n", n, "Vertices")->check(CLI::Range(4, 10000000))->capture_default_str();
    app.add_option("--d", d, "Degree")->check(CLI::Range(3, 64))->capture_default_str();
    app.add_option("--s", s, "Target region size")->check(CLI::Range(2, 10000000))->capture_default_str();
    app.add_option("--trials", trials, "Random colorings")->check(CLI::Range(1, 100000000))->capture_default_str();
    app.add_option("--mode", mode, "region: color spanning-tree regions; half: uniform half subsets")
        ->check(CLI::IsMember({"region", "half"}))
        ->capture_default_str();
    app.add_option("--slack", slack, "Region mode band: mean h* <= slack (d - 2) / 2")->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", out, "CSV output")->capture_default_str();
    app.add_option("--json", json_out, "JSON summary output");
  }

  json config(const Common& c) const {
    json j = common_json(c);
    j.update({{"command", "graph"}, {"n", n}, {"d", d}, {"s", s}, {"trials", trials}, {"mode", mode},
              {"slack", slack}, {"out", out}, {"json", json_out}});
    return j;
  }

  int run(const Common& c) const {
    if ((n * static_cast<std::size_t>(d)) % 2 != 0) throw UsageError("n * d must be even");
    if (static_cast<std::size_t>(d) >= n) throw UsageError("n must exceed d");
    const Seed base{c.seed, 0};
    RegularGraph g = random_regular(n, d, base.derive(kGraphTag));
    json cfg = config(c);
    json results;
    ColoringEstimate est;
    Bands bands;
    std::size_t s_col = 0;
    if (mode == "half") {
      if (n % 2 != 0) throw UsageError("half mode needs an even n");
      est = half_coloring_estimate(g, trials, base.derive(kTrialTag));
      double reference = 0.25 * static_cast<double>(d) * static_cast<double>(n);
      double ratio = est.boundary.mean / reference;
      results = {{"mean_boundary", est.boundary.mean}, {"se_boundary", est.boundary.se},
                 {"reference_boundary", reference}, {"expected_boundary", half_coloring_expected_boundary(g)},
                 {"boundary_ratio", ratio}, {"mean_h_star", est.h_star.mean}, {"se_h_star", est.h_star.se}};
      std::printf("mean |dA| %.4f (dn/4 = %.1f, ratio %.5f), mean h* %.5f\n", est.boundary.mean, reference, ratio,
                  est.h_star.mean);
      bands.require(ratio >= 0.97 && ratio <= 1.03, "boundary_ratio " + r(ratio));
    } else {
      if (n < 2 * s) throw UsageError("region mode needs n >= 2 s");
      s_col = s;
      RegionPartition p = spanning_tree_regions(g, s, base.derive(kPartitionTag));
      if (std::string err = check_partition(g, p); !err.empty()) throw std::runtime_error(err);
      est = region_coloring_estimate(g, p, trials, base.derive(kTrialTag));
      double bound = slack * 0.5 * (d - 2);
      std::size_t inter = inter_region_edges(g, p);
      results = {{"regions", p.regions()}, {"inter_region_edges", inter},
                 {"inter_region_per_vertex", static_cast<double>(inter) / static_cast<double>(n)},
                 {"mean_h_star", est.h_star.mean}, {"se_h_star", est.h_star.se}, {"bound", bound},
                 {"black_fraction_sd_predicted", region_black_fraction_sd(p, n)}, {"excluded", est.excluded}};
      std::printf("%zu regions, %zu inter-region edges, mean h* %.5f +- %.5f (bound %.4f)\n", p.regions(), inter,
                  est.h_star.mean, est.h_star.se, bound);
      bands.require(est.h_star.mean <= bound, "mean_h_star " + r(est.h_star.mean) + " bound " + r(bound));
    }
    CsvTable table("graph-trial/1", {"n", "d", "s", "trial", "boundary_edges", "black_count", "h_star", "seed"});
    for (const auto& t : est.trials)
      table.row({std::to_string(n), std::to_string(d), std::to_string(s_col), std::to_string(t.trial),
                 std::to_string(t.boundary_edges), std::to_string(t.black_count), r(t.h_star),
                 base.derive(kTrialTag).str()});
    write_csv(c, out, table, cfg);
    write_json(c, json_out, cfg, results);
    return bands.finish(c);
  }
};

Graph parse_graph(const std::string& spec, const Seed& seed) {
  auto parts = CLI::detail::split(spec, ':');
  auto num = [&](std::size_t i) -> std::size_t {
    if (i >= parts.size()) throw UsageError("graph spec '" + spec + "' is missing a size");
    try {
      return static_cast<std::size_t>(std::stoul(parts[i]));
    } catch (const std::exception&) {
      throw UsageError("graph spec '" + spec + "' has a bad number");
    }
  };
  const std::string& kind = parts.empty() ? spec : parts[0];
  if (kind == "K4") return complete_graph(4);
  if (kind == "petersen") return petersen_graph();
  if (kind == "complete") return complete_graph(num(1));
  if (kind == "cycle") return cycle_graph(num(1));
  if (kind == "path") return path_graph(num(1));
  if (kind == "random") return random_regular(num(1), static_cast<int>(num(2)), seed.derive(kGraphTag));
  throw UsageError("unknown graph '" + spec + "' (K4, petersen, complete:N, cycle:N, path:N, random:N:D)");
}

struct ExactCheegerCmd {
  std::string graph = "petersen";

  void attach(CLI::App& app) {
    app.add_option("--graph", graph, "K4, petersen, complete:N, cycle:N, path:N or random:N:D (N <= 20)")
        ->capture_default_str();
  }

  int run(const Common& c) const {
    Graph g = parse_graph(graph, Seed{c.seed, 0});
    if (g.n > 20) throw UsageError("exact-cheeger supports at most 20 vertices");
    std::printf("%.10f\n", exact_cheeger(g));
    return kExitOk;
  }
};

struct LemmaCmd {
  std::string name = "inclusion";
  double r = 5.0;
  double eps = 0.01;
  double delta = 0.1;
  std::size_t samples = 100000;
  double a = 2.0;
  double d = 1.0;
  std::size_t atoms = 0;
  double lambda = 1.0;
  std::string out = "lemma.json";

  void attach(CLI::App& app) {
    app.add_option("--name", name, "sine, ring, inclusion or thickening")
        ->check(CLI::IsMember({"sine", "ring", "inclusion", "thickening"}))
        ->capture_default_str();
    app.add_option("--r", r, "Inclusion: radius of y")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--eps", eps, "Inclusion/thickening: ball radius")->check(CLI::Range(1e-8, 0.05))
        ->capture_default_str();
    app.add_option("--delta", delta, "Inclusion: band slack (negative values are controls)")
        ->check(CLI::Range(-1.0, 10.0))->capture_default_str();
    app.add_option("--samples", samples, "Monte-Carlo samples")->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    app.add_option("--a", a, "Ring: inner radius")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--d", d, "Ring: distance between centres")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--atoms", atoms, "Sine: random atoms (0 = uniform density)")->check(CLI::Range(0, 100000))
        ->capture_default_str();
    app.add_option("--lambda", lambda, "Thickening: intensity of the typical cell")->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", out, "JSON report output")->capture_default_str();
  }

  json config(const Common& c) const {
    json j = common_json(c);
    j.update({{"command", "lemma"}, {"name", name}, {"r", r}, {"eps", eps}, {"delta", delta}, {"samples", samples},
              {"a", a}, {"d", d}, {"atoms", atoms}, {"lambda", lambda}, {"out", out}});
    return j;
  }

  LemmaReport evaluate(const Common& c) const {
    const Seed seed{c.seed, 0};
    if (name == "inclusion") return inclusion_check(r, eps, delta, samples, seed);
    LemmaReport rep;
    rep.lemma = name;
    rep.seed = seed;
    if (name == "sine") {
      AngleMeasure nu = AngleMeasure::uniform();
      if (atoms > 0) {
        Rng rng(seed);
        std::vector<double> th(atoms), w(atoms);
        double total = 0.0;
        for (std::size_t i = 0; i < atoms; ++i) {
          th[i] = kTwoPi * rng.uniform();
          w[i] = rng.uniform();
          total += w[i];
        }
        for (double& x : w) x /= total;
        nu = AngleMeasure::atomic(th, w);
      }
      double v = sine_kernel(nu);
      rep.params = {{"atoms", static_cast<double>(atoms)}, {"value", v}};
      rep.max_slack = v - 2.0 / kPi;
      rep.verdict = rep.max_slack <= 1e-9;
      rep.samples = atoms;
      rep.note = atoms ? "random atomic measure" : "uniform density";
    } else if (name == "ring") {
      HPoint x = origin(), y = from_polar(d, 0.0);
      std::vector<double> le, la;
      for (double e : {1e-2, 1e-3, 1e-4}) {
        le.push_back(std::log(e));
        la.push_back(std::log(ring_intersection_area(x, y, a, e)));
      }
      double slope = (la.back() - la.front()) / (le.back() - le.front());
      rep.params = {{"a", a}, {"d", d}, {"slope", slope}};
      rep.max_slack = 1.4 - slope;
      rep.verdict = slope >= 1.4;
      rep.note = "log-log slope of the intersection area over eps in {1e-2, 1e-3, 1e-4}";
    } else {
      ConvexCell cell = typical_cell(lambda, seed).cell;
      MCEstimate est = thickening_perimeter(cell, eps, samples, seed.derive(kTrialTag));
      double perim = polygon_perimeter(cell);
      double allowance = c.k_sigma * est.se + 5.0 * eps * static_cast<double>(cell.size());
      rep.params = {{"eps", eps}, {"lambda", lambda}, {"estimate", est.mean}, {"se", est.se}, {"perimeter", perim}};
      rep.max_slack = std::abs(est.mean - perim) - allowance;
      rep.verdict = rep.max_slack <= 0.0;
      rep.samples = samples;
      rep.note = "typical cell; allowance k se + 5 eps per vertex";
    }
    return rep;
  }

  int run(const Common& c) const {
    LemmaReport rep = evaluate(c);
    json params = json::object();
    for (const auto& [k, v] : rep.params) params[k] = v;
    json report = {{"lemma", rep.lemma}, {"params", params}, {"verdict", rep.verdict}, {"max_slack", rep.max_slack},
                   {"samples", rep.samples}, {"members", rep.members}, {"violations", rep.violations},
                   {"seed", seed_json(rep.seed)}, {"note", rep.note}};
    json cfg = config(c);
    write_json(c, out, cfg, report);
    std::printf("%s: %s (max slack %.3e", rep.lemma.c_str(), rep.verdict ? "holds" : "violated", rep.max_slack);
    if (rep.lemma == "inclusion") std::printf(", %zu members, %zu violations", rep.members, rep.violations);
    std::printf(")\n");
    Bands bands;
    bands.require(rep.verdict, report.dump());
    return bands.finish(c);
  }
};

struct RenderCmd {
  std::string window = "disk";
  double lambda = 1.0;
  double radius = 8.0;
  bool color = false;
  std::string svg = "render.svg";
  RenderOptions render;

  void attach(CLI::App& app) {
    app.add_option("--window", window, "disk or surface")->check(CLI::IsMember({"disk", "surface"}))
        ->capture_default_str();
    app.add_option("--lambda", lambda, "Intensity")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--radius", radius, "Disk window radius")->check(CLI::Range(0.1, 25.0))->capture_default_str();
    app.add_flag("--color", color, "Color cells black/white at random");
    app.add_option("--svg", svg, "SVG output")->capture_default_str();
    render.attach(app);
  }

  json config(const Common& c) const {
    json j = common_json(c);
    j.update({{"command", "render"}, {"window", window}, {"lambda", lambda}, {"radius", radius}, {"color", color},
              {"svg", svg}, {"render", render.config()}});
    return j;
  }

  int run(const Common& c) const {
    Tessellation t;
    if (window == "surface") {
      if (lambda < 0.25) throw UsageError("surface windows need --lambda >= 0.25");
      t = surface_voronoi(lambda, bolza(), Seed{c.seed, 0});
    } else {
      PointCloud cloud = poisson_disk(lambda, radius, Seed{c.seed, 0});
      if (cloud.points.empty()) throw UsageError("the sampled window holds no points; raise --lambda or --radius");
      t = tessellate_window(cloud, {c.workers});
    }
    json cfg = config(c);
    write_text(resolve_path(c, svg), render_svg(t, maybe_colors(color, t.cells.size(), c), render.spec(cfg)));
    std::printf("%zu cells drawn to %s\n", t.cells.size(), resolve_path(c, svg).c_str());
    return kExitOk;
  }
};

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Poisson-Voronoi tessellations of the hyperbolic plane and the Bolza surface"};
  app.name("hypvor");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Key-value config file (key = value, [subcommand] sections)");

  Common common;
  const char* env_dir = std::getenv("HYPVOR_OUT_DIR");
  if (env_dir && *env_dir) common.out_dir = env_dir;
  app.add_option("--seed", common.seed, "Master seed")->capture_default_str();
  app.add_option("--workers", common.workers, "Worker threads (0 = all cores); results do not depend on it")
      ->capture_default_str();
  app.add_option("--out-dir", common.out_dir, "Directory for relative output paths (default $HYPVOR_OUT_DIR or .)")
      ->capture_default_str();
  app.add_flag("--check", common.check, "Evaluate acceptance bands; exit 2 on violation");
  app.add_option("--k-sigma", common.k_sigma, "Standard errors allowed by statistical bands")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  TypicalCellCmd typical;
  IsokawaRefCmd iso;
  DensityCmd density;
  TessellateCmd tess;
  SurfaceCmd surface;
  ColorCmd color;
  GraphCmd graph;
  ExactCheegerCmd exact;
  LemmaCmd lemma;
  RenderCmd render;

  std::function<int()> action;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.attach(*sub);
    sub->callback([&action, &cmd, &common] { action = [&cmd, &common] { return cmd.run(common); }; });
  };
  add("typical-cell", "Typical-cell area and perimeter means", typical);
  add("isokawa-ref", "Quadrature value of the mean typical-cell perimeter", iso);
  add("density", "Boundary density across descending intensities", density);
  add("tessellate", "Tessellate a disk window; optional SVG", tess);
  add("surface", "Boundary density of Voronoi tessellations of the Bolza surface", surface);
  add("color", "Random black/white colorings of Bolza tessellations", color);
  add("graph", "Random colorings of a random regular graph", graph);
  add("exact-cheeger", "Exact Cheeger constant of a small graph", exact);
  add("lemma", "Numerical checks of the ring, sine-kernel, inclusion and thickening estimates", lemma);
  add("render", "Render a tessellation to SVG", render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "hypvor: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    common.workers = resolve_workers(common.workers);
    return action();
  } catch (const std::exception& e) {
    std::cerr << "hypvor: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace hypvor::cli

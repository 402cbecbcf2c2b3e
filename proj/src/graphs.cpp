#include <hypvor/graphs.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace hypvor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

Graph Graph::from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  Graph g;
  g.n = n;
  g.edges = edges;
  g.adj.assign(n, {});
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw std::invalid_argument("Graph: vertex out of range");
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  return g;
}

std::size_t Graph::max_degree() const {
  std::size_t d = 0;
  for (const auto& a : adj) d = std::max(d, a.size());
  return d;
}

bool Graph::is_simple() const {
  std::set<std::pair<Vertex, Vertex>> seen;
  for (auto [a, b] : edges) {
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) return false;
  }
  return true;
}

bool Graph::is_connected() const {
  if (n == 0) return true;
  std::vector<char> mark(n, 0);
  std::vector<Vertex> stack{0};
  mark[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : adj[v])
      if (!mark[w]) {
        mark[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

Graph complete_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) e.push_back({a, b});
  return Graph::from_edges(n, e);
}

Graph cycle_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex a = 0; a < n; ++a) e.push_back({a, static_cast<Vertex>((a + 1) % n)});
  return Graph::from_edges(n, e);
}

Graph path_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex a = 0; a + 1 < n; ++a) e.push_back({a, a + 1});
  return Graph::from_edges(n, e);
}

Graph petersen_graph() {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.push_back({i, (i + 1) % 5});            // outer cycle
    e.push_back({i, i + 5});                  // spokes
    e.push_back({i + 5, (i + 2) % 5 + 5});    // inner pentagram
  }
  return Graph::from_edges(10, e);
}

RegularGraph random_regular(std::size_t n, int d, const Seed& seed, int max_attempts) {
  if (d < 3 || n <= static_cast<std::size_t>(d) || (n * static_cast<std::size_t>(d)) % 2 != 0)
    throw std::invalid_argument("random_regular: need d >= 3, n > d, n d even");
  Rng rng(seed);
  std::vector<Vertex> stubs;
  stubs.reserve(n * static_cast<std::size_t>(d));
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    stubs.clear();
    for (Vertex v = 0; v < n; ++v)
      for (int k = 0; k < d; ++k) stubs.push_back(v);
    shuffle(stubs, rng);
    std::vector<std::pair<Vertex, Vertex>> e;
    e.reserve(stubs.size() / 2);
    bool simple = true;
    std::set<std::pair<Vertex, Vertex>> seen;
    for (std::size_t i = 0; i < stubs.size() && simple; i += 2) {
      Vertex a = std::min(stubs[i], stubs[i + 1]), b = std::max(stubs[i], stubs[i + 1]);
      if (a == b || !seen.insert({a, b}).second) simple = false;
      e.push_back({a, b});
    }
    if (!simple) continue;
    RegularGraph g;
    static_cast<Graph&>(g) = Graph::from_edges(n, e);
    g.d = d;
    if (!g.is_connected()) continue;
    return g;
  }
  throw RejectionBudgetExceeded("random_regular: rejection budget exhausted");
}

std::size_t boundary_edges(const Graph& g, const std::vector<bool>& in_a) {
  std::size_t count = 0;
  for (const auto& [a, b] : g.edges) count += in_a[a] != in_a[b];
  return count;
}

double cheeger_ratio(const Graph& g, const std::vector<bool>& in_a) {
  std::size_t k = static_cast<std::size_t>(std::count(in_a.begin(), in_a.end(), true));
  std::size_t smaller = std::min(k, g.n - k);
  if (smaller == 0) return kInf;
  return static_cast<double>(boundary_edges(g, in_a)) / static_cast<double>(smaller);
}

double half_coloring_expected_boundary(const Graph& g) {
  double n = static_cast<double>(g.n), half = std::floor(n / 2.0);
  return static_cast<double>(g.edges.size()) * 2.0 * half * (n - half) / (n * (n - 1.0));
}

namespace {

ColoringEstimate summarize(std::vector<ColoringTrial> trials, std::size_t n, const Seed& seed) {
  ColoringEstimate out;
  std::vector<double> h, b, f;
  for (const auto& t : trials) {
    b.push_back(static_cast<double>(t.boundary_edges));
    f.push_back(static_cast<double>(t.black_count) / static_cast<double>(n));
    if (t.h_star < kInf) h.push_back(t.h_star);
    else ++out.excluded;
  }
  out.h_star = estimate(h, seed, out.excluded);
  out.boundary = estimate(b, seed);
  out.black_fraction = estimate(f, seed);
  out.trials = std::move(trials);
  return out;
}

}  // namespace

ColoringEstimate half_coloring_estimate(const Graph& g, std::size_t trials, const Seed& seed) {
  if (g.n % 2 != 0) throw std::invalid_argument("half_coloring_estimate: n must be even");
  Rng rng(seed);
  std::vector<Vertex> order(g.n);
  std::vector<ColoringTrial> out;
  for (std::size_t t = 0; t < trials; ++t) {
    std::iota(order.begin(), order.end(), 0);
    std::vector<bool> in_a(g.n, false);
    for (std::size_t i = 0; i < g.n / 2; ++i) {
      std::swap(order[i], order[i + rng.below(g.n - i)]);
      in_a[order[i]] = true;
    }
    ColoringTrial row;
    row.trial = t;
    row.boundary_edges = boundary_edges(g, in_a);
    row.black_count = g.n / 2;
    row.h_star = static_cast<double>(row.boundary_edges) / static_cast<double>(g.n / 2);
    out.push_back(row);
  }
  return summarize(std::move(out), g.n, seed);
}

RegionPartition spanning_tree_regions(const Graph& g, std::size_t s, const Seed& seed) {
  if (s < 2 || g.n < 2 * s) throw std::invalid_argument("spanning_tree_regions: need s >= 2 and n >= 2s");
  if (!g.is_connected()) throw std::invalid_argument("spanning_tree_regions: graph must be connected");
  Rng rng(seed);
  const std::size_t n = g.n;
  std::vector<std::vector<Vertex>> nbrs = g.adj;
  for (auto& a : nbrs) shuffle(a, rng);

  // Iterative randomized DFS; post-order gives children before parents.
  Vertex root = static_cast<Vertex>(rng.below(n));
  std::vector<int> parent(n, -1);
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> next(n, 0);
  std::vector<Vertex> post;
  post.reserve(n);
  std::vector<Vertex> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    if (next[v] < nbrs[v].size()) {
      Vertex w = nbrs[v][next[v]++];
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = static_cast<int>(v);
        stack.push_back(w);
      }
    } else {
      post.push_back(v);
      stack.pop_back();
    }
  }

  RegionPartition p;
  p.s = s;
  p.region_of.assign(n, -1);
  std::vector<std::size_t> pending(n, 1);
  std::vector<int> cut_head(n, 0);  // 1 when v heads a region
  std::vector<std::vector<Vertex>> children(n);
  for (Vertex v : post)
    if (parent[v] >= 0) children[static_cast<std::size_t>(parent[v])].push_back(v);

  auto assign = [&](Vertex head, int id) {
    std::vector<Vertex> st{head};
    while (!st.empty()) {
      Vertex v = st.back();
      st.pop_back();
      p.region_of[v] = id;
      for (Vertex c : children[v])
        if (!cut_head[c]) st.push_back(c);
    }
  };
  for (Vertex v : post) {
    for (Vertex c : children[v])
      if (!cut_head[c]) pending[v] += pending[c];
    if (pending[v] >= s) {
      cut_head[v] = 1;
      int id = static_cast<int>(p.sizes.size());
      p.sizes.push_back(pending[v]);
      assign(v, id);
    }
  }
  if (!cut_head[root]) {
    // Leftover around the root joins a region hanging off it in the tree.
    std::vector<Vertex> leftover, st{root};
    int target = -1;
    while (!st.empty()) {
      Vertex v = st.back();
      st.pop_back();
      leftover.push_back(v);
      for (Vertex c : children[v]) {
        if (cut_head[c]) {
          if (target < 0) target = p.region_of[c];
        } else {
          st.push_back(c);
        }
      }
    }
    for (Vertex v : leftover) p.region_of[v] = target;
    p.sizes[static_cast<std::size_t>(target)] += leftover.size();
  }
  return p;
}

std::string check_partition(const Graph& g, const RegionPartition& p) {
  std::size_t d = g.max_degree();
  std::vector<std::size_t> count(p.sizes.size(), 0);
  for (std::size_t v = 0; v < g.n; ++v) {
    int r = p.region_of[v];
    if (r < 0 || static_cast<std::size_t>(r) >= p.sizes.size()) return "vertex without region";
    ++count[static_cast<std::size_t>(r)];
  }
  for (std::size_t r = 0; r < p.sizes.size(); ++r) {
    if (count[r] != p.sizes[r]) return "size table mismatch";
    if (count[r] < p.s || count[r] > d * p.s) return "region size out of [s, d s]";
  }
  // Connectivity: flood fill within each region.
  std::vector<char> mark(g.n, 0);
  std::vector<char> region_done(p.sizes.size(), 0);
  for (Vertex v = 0; v < g.n; ++v) {
    std::size_t r = static_cast<std::size_t>(p.region_of[v]);
    if (region_done[r]) continue;
    region_done[r] = 1;
    std::size_t reached = 1;
    std::vector<Vertex> st{v};
    mark[v] = 1;
    while (!st.empty()) {
      Vertex a = st.back();
      st.pop_back();
      for (Vertex b : g.adj[a])
        if (!mark[b] && p.region_of[b] == p.region_of[v]) {
          mark[b] = 1;
          ++reached;
          st.push_back(b);
        }
    }
    if (reached != p.sizes[r]) return "region not connected";
  }
  return {};
}

std::size_t inter_region_edges(const Graph& g, const RegionPartition& p) {
  std::size_t count = 0;
  for (const auto& [a, b] : g.edges) count += p.region_of[a] != p.region_of[b];
  return count;
}

ColoringEstimate region_coloring_estimate(const Graph& g, const RegionPartition& p, std::size_t trials,
                                          const Seed& seed) {
  if (p.regions() < 2) throw std::invalid_argument("region_coloring_estimate: need at least two regions");
  Rng rng(seed);
  std::vector<std::pair<Vertex, Vertex>> cross;
  for (const auto& e : g.edges)
    if (p.region_of[e.first] != p.region_of[e.second]) cross.push_back(e);
  std::vector<ColoringTrial> out;
  std::vector<bool> color(p.regions());
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t black = 0;
    for (std::size_t r = 0; r < p.regions(); ++r) {
      color[r] = rng.coin();
      if (color[r]) black += p.sizes[r];
    }
    std::size_t boundary = 0;
    for (const auto& [a, b] : cross)
      boundary += color[static_cast<std::size_t>(p.region_of[a])] != color[static_cast<std::size_t>(p.region_of[b])];
    ColoringTrial row;
    row.trial = t;
    row.boundary_edges = boundary;
    row.black_count = black;
    std::size_t smaller = std::min(black, g.n - black);
    row.h_star = smaller == 0 ? kInf : static_cast<double>(boundary) / static_cast<double>(smaller);
    out.push_back(row);
  }
  return summarize(std::move(out), g.n, seed);
}

double region_black_fraction_sd(const RegionPartition& p, std::size_t n) {
  double ss = 0.0;
  for (std::size_t s : p.sizes) ss += static_cast<double>(s) * static_cast<double>(s);
  return std::sqrt(ss) / (2.0 * static_cast<double>(n));
}

double exact_cheeger(const Graph& g) {
  if (g.n > 20) throw std::invalid_argument("exact_cheeger: at most 20 vertices");
  if (g.n < 2) throw std::invalid_argument("exact_cheeger: at least 2 vertices");
  const std::size_t n = g.n;
  std::vector<bool> in_a(n, false);
  long boundary = 0;
  std::size_t size = 0;
  double best = kInf;
  const std::uint64_t total = std::uint64_t{1} << n;
  // Gray code: step k flips the lowest set bit of k.
  for (std::uint64_t k = 1; k < total; ++k) {
    std::size_t v = static_cast<std::size_t>(__builtin_ctzll(k));
    for (Vertex w : g.adj[v]) boundary += in_a[w] == in_a[v] ? 1 : -1;
    in_a[v] = !in_a[v];
    size += in_a[v] ? 1 : std::size_t(-1);
    if (size >= 1 && 2 * size <= n) best = std::min(best, static_cast<double>(boundary) / static_cast<double>(size));
  }
  return best;
}

TreeBall tree_ball(int d, int depth) {
  if (d < 2 || depth < 0) throw std::invalid_argument("tree_ball: need d >= 2, depth >= 0");
  std::vector<std::pair<Vertex, Vertex>> e;
  std::vector<Vertex> frontier{0};
  Vertex next = 1;
  for (int level = 0; level < depth; ++level) {
    std::vector<Vertex> grown;
    for (Vertex v : frontier) {
      int kids = level == 0 ? d : d - 1;
      for (int k = 0; k < kids; ++k) {
        e.push_back({v, next});
        grown.push_back(next++);
      }
    }
    frontier = std::move(grown);
  }
  TreeBall b;
  b.graph = Graph::from_edges(next, e);
  for (const auto& a : b.graph.adj) b.boundary += static_cast<std::size_t>(d) - a.size();
  b.h_star = static_cast<double>(b.boundary) / static_cast<double>(b.graph.n);
  return b;
}

}  // namespace hypvor

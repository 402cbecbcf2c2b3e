#pragma once

// Random regular graphs and randomized Cheeger witnesses on them.

#include <hypvor/rng.hpp>
#include <hypvor/stats.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypvor {

class RejectionBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vertex = std::uint32_t;

/// Undirected simple graph with adjacency lists.
struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<std::vector<Vertex>> adj;

  static Graph from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges);
  std::size_t max_degree() const;
  bool is_simple() const;
  bool is_connected() const;
};

struct RegularGraph : Graph {
  int d = 0;
};

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph petersen_graph();

/// Configuration model conditioned on a simple connected outcome.
RegularGraph random_regular(std::size_t n, int d, const Seed& seed, int max_attempts = 1000);

/// Number of edges with exactly one endpoint in A.
std::size_t boundary_edges(const Graph& g, const std::vector<bool>& in_a);

/// |dA| / min(|A|, n - |A|); infinite when the smaller side is empty.
double cheeger_ratio(const Graph& g, const std::vector<bool>& in_a);

struct ColoringTrial {
  std::size_t trial = 0;
  std::size_t boundary_edges = 0;
  std::size_t black_count = 0;
  double h_star = 0.0;
};

struct ColoringEstimate {
  MCEstimate h_star;
  MCEstimate boundary;
  MCEstimate black_fraction;
  std::vector<ColoringTrial> trials;
  std::size_t excluded = 0;  // trials with an empty side
};

/// Uniform n/2-subsets; E|dA| = |E| (n/2)^2 / (n (n-1) / 2) exactly.
ColoringEstimate half_coloring_estimate(const Graph& g, std::size_t trials, const Seed& seed);
double half_coloring_expected_boundary(const Graph& g);

struct RegionPartition {
  std::vector<int> region_of;
  std::vector<std::size_t> sizes;
  std::size_t s = 0;

  std::size_t regions() const { return sizes.size(); }
};

/// Random depth-first spanning tree cut bottom-up into connected regions of
/// size in [s, d s], where d is the maximum degree.
RegionPartition spanning_tree_regions(const Graph& g, std::size_t s, const Seed& seed);

/// Empty string when every region is connected and sized in [s, d s].
std::string check_partition(const Graph& g, const RegionPartition& p);

std::size_t inter_region_edges(const Graph& g, const RegionPartition& p);

/// Fair independent colors per region.
ColoringEstimate region_coloring_estimate(const Graph& g, const RegionPartition& p, std::size_t trials,
                                          const Seed& seed);

/// Standard deviation of |A|/n under region coloring: sqrt(sum size^2) / (2n).
double region_black_fraction_sd(const RegionPartition& p, std::size_t n);

/// Exact Cheeger constant by enumerating all subsets; n <= 20.
double exact_cheeger(const Graph& g);

struct TreeBall {
  Graph graph;
  std::size_t boundary = 0;  // edges leaving the ball in the infinite d-regular tree
  double h_star = 0.0;
};

/// Ball of radius depth about a vertex of the d-regular tree.
TreeBall tree_ball(int d, int depth);

}  // namespace hypvor

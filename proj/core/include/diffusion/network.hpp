#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "diffusion/rng.hpp"

namespace diffusion {

using NodeId = std::uint32_t;

enum class Neighborhood { VonNeumann, Moore };

/// Interior degree of a lattice neighbourhood: 4 or 8.
int neighborhood_degree(Neighborhood n);

/// Maps a network degree class (4 or 8) to its neighbourhood.
Neighborhood neighborhood_for_degree(int k);

struct LatticeSpec {
  int rows = 200;
  int cols = 200;
  Neighborhood neighborhood = Neighborhood::Moore;

  /// Throws std::invalid_argument when rows < 2 or cols < 2.
  void validate() const;
  std::size_t node_count() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  NodeId index(int row, int col) const { return static_cast<NodeId>(row * cols + col); }
  int row_of(NodeId n) const { return static_cast<int>(n) / cols; }
  int col_of(NodeId n) const { return static_cast<int>(n) % cols; }

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph over lattice nodes, stored as CSR with
/// each neighbour list sorted ascending.
class SocialNetwork {
 public:
  SocialNetwork(LatticeSpec spec, double rewire_prob, std::size_t rewired_edges,
                std::vector<std::vector<NodeId>> adjacency);

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  std::size_t degree(NodeId n) const { return offsets_[n + 1] - offsets_[n]; }
  std::span<const NodeId> neighbors(NodeId n) const {
    return {neighbors_.data() + offsets_[n], degree(n)};
  }
  bool has_edge(NodeId a, NodeId b) const;

  const LatticeSpec& base_spec() const { return spec_; }
  double rewire_prob() const { return rewire_prob_; }
  /// Number of edges moved by rewiring (0 for a pure lattice).
  std::size_t rewired_edge_count() const { return rewired_; }
  std::size_t max_degree() const;

  /// Canonical edge list: smaller endpoint first, sorted lexicographically.
  std::vector<Edge> edges() const;

  friend bool operator==(const SocialNetwork& a, const SocialNetwork& b) {
    return a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
  }

 private:
  LatticeSpec spec_;
  double rewire_prob_;
  std::size_t rewired_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

/// Regular lattice without periodic boundaries, nodes indexed row-major.
SocialNetwork build_lattice(const LatticeSpec& spec);

/// Small-world rewiring of a pure lattice. Each canonical edge (u < v) is
/// selected with probability p_r; a selected edge keeps u and reattaches to a
/// uniformly drawn node, redrawing on self-loops and duplicates.
SocialNetwork rewire(const SocialNetwork& lattice, double p_r, Rng& rng);

struct NetworkStats {
  double mean_degree = 0.0;
  double mean_path_length = 0.0;
  double clustering_coefficient = 0.0;
  std::size_t sources = 0;
  std::size_t reached_pairs = 0;
  /// Ordered (source, target) pairs with no path between them.
  std::size_t unreachable_pairs = 0;
};

/// Networks up to this size (a 50x50 lattice) get exact path lengths.
inline constexpr std::size_t kExactPathNodes = 2500;

/// Mean degree, BFS mean shortest-path length over `sample_size` sources
/// (every node when sample_size >= node_count or node_count <= kExactPathNodes)
/// and mean local clustering.
NetworkStats network_stats(const SocialNetwork& net, std::size_t sample_size, Rng& rng);

/// Mean local clustering coefficient; nodes of degree < 2 count as 0.
double clustering_coefficient(const SocialNetwork& net);

/// `src,dst` edge-list CSV, one undirected edge per line, smaller index first.
void write_edge_list(std::ostream& out, const SocialNetwork& net);
std::vector<Edge> read_edge_list(std::istream& in);

}  // namespace diffusion

#include "diffusion/network.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "diffusion/csv.hpp"

namespace diffusion {

int neighborhood_degree(Neighborhood n) {
  return n == Neighborhood::Moore ? 8 : 4;
}

Neighborhood neighborhood_for_degree(int k) {
  if (k == 4) return Neighborhood::VonNeumann;
  if (k == 8) return Neighborhood::Moore;
  throw std::invalid_argument("network degree k must be 4 or 8, got " + std::to_string(k));
}

void LatticeSpec::validate() const {
  if (rows < 2 || cols < 2) {
    throw std::invalid_argument("lattice must be at least 2x2, got " + std::to_string(rows) +
                                "x" + std::to_string(cols));
  }
  if (node_count() > std::numeric_limits<NodeId>::max()) {
    throw std::invalid_argument("lattice too large");
  }
}

SocialNetwork::SocialNetwork(LatticeSpec spec, double rewire_prob, std::size_t rewired_edges,
                             std::vector<std::vector<NodeId>> adjacency)
    : spec_(spec), rewire_prob_(rewire_prob), rewired_(rewired_edges) {
  offsets_.reserve(adjacency.size() + 1);
  offsets_.push_back(0);
  std::size_t total = 0;
  for (const auto& list : adjacency) total += list.size();
  neighbors_.reserve(total);
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    neighbors_.insert(neighbors_.end(), list.begin(), list.end());
    offsets_.push_back(neighbors_.size());
  }
}

bool SocialNetwork::has_edge(NodeId a, NodeId b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::size_t SocialNetwork::max_degree() const {
  std::size_t best = 0;
  for (NodeId n = 0; n < node_count(); ++n) best = std::max(best, degree(n));
  return best;
}

std::vector<Edge> SocialNetwork::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

SocialNetwork build_lattice(const LatticeSpec& spec) {
  spec.validate();
  std::vector<std::vector<NodeId>> adj(spec.node_count());
  const bool moore = spec.neighborhood == Neighborhood::Moore;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      auto& list = adj[spec.index(r, c)];
      list.reserve(moore ? 8 : 4);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (!moore && dr != 0 && dc != 0) continue;
          const int nr = r + dr;
          const int nc = c + dc;
          if (nr < 0 || nr >= spec.rows || nc < 0 || nc >= spec.cols) continue;
          list.push_back(spec.index(nr, nc));
        }
      }
    }
  }
  return SocialNetwork(spec, 0.0, 0, std::move(adj));
}

namespace {

bool contains(const std::vector<NodeId>& list, NodeId v) {
  return std::find(list.begin(), list.end(), v) != list.end();
}

void erase_value(std::vector<NodeId>& list, NodeId v) {
  list.erase(std::find(list.begin(), list.end(), v));
}

}  // namespace

SocialNetwork rewire(const SocialNetwork& lattice, double p_r, Rng& rng) {
  if (!(p_r >= 0.0 && p_r <= 1.0)) {
    throw std::invalid_argument("rewiring probability must lie in [0, 1], got " + std::to_string(p_r));
  }
  if (lattice.rewire_prob() != 0.0 || lattice.rewired_edge_count() != 0) {
    throw std::invalid_argument("rewire expects a pure lattice");
  }
  const std::size_t n = lattice.node_count();
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId u = 0; u < n; ++u) {
    const auto nb = lattice.neighbors(u);
    adj[u].assign(nb.begin(), nb.end());
  }

  std::size_t moved = 0;
  for (const auto& [u, v] : lattice.edges()) {
    if (!bernoulli(rng, p_r)) continue;
    if (adj[u].size() + 1 >= n) continue;  // u already linked to everyone
    NodeId w;
    do {
      w = static_cast<NodeId>(uniform_index(rng, n));
    } while (w == u || contains(adj[u], w));
    erase_value(adj[u], v);
    erase_value(adj[v], u);
    adj[u].push_back(w);
    adj[w].push_back(u);
    ++moved;
  }
  return SocialNetwork(lattice.base_spec(), p_r, moved, std::move(adj));
}

double clustering_coefficient(const SocialNetwork& net) {
  const std::size_t n = net.node_count();
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    const auto nb = net.neighbors(i);
    const std::size_t d = nb.size();
    if (d < 2) continue;
    std::size_t links = 0;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a + 1; b < d; ++b) {
        if (net.has_edge(nb[a], nb[b])) ++links;
      }
    }
    sum += 2.0 * static_cast<double>(links) / static_cast<double>(d * (d - 1));
  }
  return sum / static_cast<double>(n);
}

NetworkStats network_stats(const SocialNetwork& net, std::size_t sample_size, Rng& rng) {
  const std::size_t n = net.node_count();
  NetworkStats stats;
  stats.mean_degree = n == 0 ? 0.0 : 2.0 * static_cast<double>(net.edge_count()) / static_cast<double>(n);
  stats.clustering_coefficient = clustering_coefficient(net);

  std::vector<NodeId> sources;
  if (sample_size >= n || n <= kExactPathNodes) {
    sources.resize(n);
    std::iota(sources.begin(), sources.end(), NodeId{0});
  } else {
    sources.reserve(sample_size);
    for (std::size_t i = 0; i < sample_size; ++i) {
      sources.push_back(static_cast<NodeId>(uniform_index(rng, n)));
    }
  }
  stats.sources = sources.size();

  constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(n);
  std::vector<NodeId> queue(n);
  double hop_sum = 0.0;
  for (NodeId s : sources) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    std::size_t head = 0;
    std::size_t tail = 0;
    dist[s] = 0;
    queue[tail++] = s;
    while (head < tail) {
      const NodeId u = queue[head++];
      for (NodeId v : net.neighbors(u)) {
        if (dist[v] == kUnseen) {
          dist[v] = dist[u] + 1;
          hop_sum += dist[v];
          queue[tail++] = v;
        }
      }
    }
    stats.reached_pairs += tail - 1;
    stats.unreachable_pairs += n - tail;
  }
  stats.mean_path_length =
      stats.reached_pairs == 0 ? 0.0 : hop_sum / static_cast<double>(stats.reached_pairs);
  return stats;
}

void write_edge_list(std::ostream& out, const SocialNetwork& net) {
  out << "src,dst\n";
  for (const auto& [u, v] : net.edges()) out << u << ',' << v << '\n';
}

std::vector<Edge> read_edge_list(std::istream& in) {
  const CsvTable table = read_csv(in);
  const std::size_t src = table.column("src");
  const std::size_t dst = table.column("dst");
  std::vector<Edge> edges;
  edges.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    edges.emplace_back(static_cast<NodeId>(table.integer(r, src)),
                       static_cast<NodeId>(table.integer(r, dst)));
  }
  return edges;
}

}  // namespace diffusion

#include "diffusion/seeding.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace diffusion {

std::string_view to_string(SeedPattern pattern) {
  switch (pattern) {
    case SeedPattern::Compact: return "compact";
    case SeedPattern::Intermediate: return "intermediate";
    case SeedPattern::Uniform: return "uniform";
  }
  return "unknown";
}

SeedPattern parse_seed_pattern(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "compact") return SeedPattern::Compact;
  if (lower == "intermediate") return SeedPattern::Intermediate;
  if (lower == "uniform") return SeedPattern::Uniform;
  throw std::invalid_argument("unknown seeding pattern '" + std::string(text) + "'");
}

std::size_t innovator_quota(std::size_t node_count, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("innovator fraction must lie in (0, 1]");
  }
  const auto quota = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(node_count)));
  return std::max<std::size_t>(1, quota);
}

std::vector<NodeId> chebyshev_nearest(const LatticeSpec& spec, int centre_row, int centre_col,
                                      std::size_t count) {
  if (count > spec.node_count()) {
    throw std::invalid_argument("requested more cells than the lattice holds");
  }
  std::vector<NodeId> out;
  out.reserve(count);
  const int max_radius = std::max({centre_row, spec.rows - 1 - centre_row, centre_col,
                                   spec.cols - 1 - centre_col});
  for (int d = 0; d <= max_radius && out.size() < count; ++d) {
    // Ring at distance d, visited row-major.
    for (int r = centre_row - d; r <= centre_row + d && out.size() < count; ++r) {
      if (r < 0 || r >= spec.rows) continue;
      const bool full_row = std::abs(r - centre_row) == d;
      for (int c = centre_col - d; c <= centre_col + d && out.size() < count;
           c += (full_row || d == 0) ? 1 : 2 * d) {
        if (c < 0 || c >= spec.cols) continue;
        out.push_back(spec.index(r, c));
      }
    }
  }
  return out;
}

namespace {

std::vector<NodeId> intermediate_clusters(const LatticeSpec& spec, std::size_t count) {
  if (spec.rows < kIntermediateMinSide || spec.cols < kIntermediateMinSide) {
    throw std::invalid_argument("intermediate seeding needs a lattice of at least " +
                                std::to_string(kIntermediateMinSide) + "x" +
                                std::to_string(kIntermediateMinSide));
  }
  const std::array<std::pair<int, int>, kIntermediateClusters> centres{{
      {spec.rows / 2, spec.cols / 2},
      {spec.rows / 4, spec.cols / 4},
      {spec.rows / 4, 3 * spec.cols / 4},
      {3 * spec.rows / 4, spec.cols / 4},
      {3 * spec.rows / 4, 3 * spec.cols / 4},
  }};
  const std::size_t share = count / kIntermediateClusters;
  const std::size_t central = share + count % kIntermediateClusters;

  std::vector<NodeId> out;
  out.reserve(count);
  std::unordered_set<NodeId> seen;
  for (std::size_t i = 0; i < centres.size(); ++i) {
    const auto cluster = chebyshev_nearest(spec, centres[i].first, centres[i].second, i == 0 ? central : share);
    for (NodeId n : cluster) {
      if (!seen.insert(n).second) {
        throw std::invalid_argument("intermediate seeding clusters overlap on a " +
                                    std::to_string(spec.rows) + "x" + std::to_string(spec.cols) +
                                    " lattice with " + std::to_string(count) + " innovators");
      }
      out.push_back(n);
    }
  }
  return out;
}

}  // namespace

std::vector<NodeId> place_innovators(const LatticeSpec& spec, SeedPattern pattern, std::size_t count,
                                     Rng& rng) {
  spec.validate();
  if (count == 0) throw std::invalid_argument("innovator count must be positive");
  if (count > spec.node_count()) {
    throw std::invalid_argument("innovator count " + std::to_string(count) + " exceeds node count " +
                                std::to_string(spec.node_count()));
  }
  switch (pattern) {
    case SeedPattern::Compact:
      return chebyshev_nearest(spec, spec.rows / 2, spec.cols / 2, count);
    case SeedPattern::Intermediate:
      return intermediate_clusters(spec, count);
    case SeedPattern::Uniform: {
      // Partial Fisher-Yates: the first `count` slots are the draws in order.
      std::vector<NodeId> cells(spec.node_count());
      std::iota(cells.begin(), cells.end(), NodeId{0});
      for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_index(rng, cells.size() - i));
        std::swap(cells[i], cells[j]);
      }
      cells.resize(count);
      return cells;
    }
  }
  throw std::invalid_argument("unknown seeding pattern");
}

SeedingPlan schedule_innovators(std::span<const NodeId> positions, int gamma, Rng& rng, SeedPattern pattern) {
  if (gamma < 1) throw std::invalid_argument("gamma must be at least 1");
  SeedingPlan plan;
  plan.pattern = pattern;
  plan.rate_gamma = gamma;
  plan.total_innovators = positions.size();
  plan.positions.assign(positions.begin(), positions.end());
  shuffle(std::span<NodeId>(plan.positions), rng);
  plan.activation_ticks.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    plan.activation_ticks[i] = static_cast<int>(i / static_cast<std::size_t>(gamma)) + 1;
  }
  return plan;
}

double gamma_for_p(double p, double n) {
  if (!(p > 0.0) || !(n > 0.0)) {
    throw std::invalid_argument("gamma_for_p requires p > 0 and n > 0");
  }
  return p * n;
}

void write_seeding_plan(std::ostream& out, const SeedingPlan& plan) {
  out << "node,tick\n";
  for (std::size_t i = 0; i < plan.positions.size(); ++i) {
    out << plan.positions[i] << ',' << plan.activation_ticks[i] << '\n';
  }
}

}  // namespace diffusion

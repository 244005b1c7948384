#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffusion/network.hpp"
#include "diffusion/rng.hpp"

namespace diffusion {

/// Spatial dispersion of innovators over the lattice.
enum class SeedPattern { Compact, Intermediate, Uniform };

std::string_view to_string(SeedPattern pattern);
/// Accepts any case ("compact", "COMPACT").
SeedPattern parse_seed_pattern(std::string_view text);

/// Default innovator share of the population.
inline constexpr double kInnovatorFraction = 0.025;
/// Intermediate seeding uses this many sub-clusters.
inline constexpr int kIntermediateClusters = 5;
/// Smallest lattice side on which the intermediate clusters stay separated.
inline constexpr int kIntermediateMinSide = 20;

/// round(fraction * node_count), at least 1.
std::size_t innovator_quota(std::size_t node_count, double fraction = kInnovatorFraction);

/// Innovator cells for a pattern. Compact: the `count` cells nearest the
/// lattice centre in Chebyshev distance (row-major tie-break), nearest first.
/// Intermediate: five compact sub-clusters at the centre and the four quadrant
/// centres, the remainder going to the central one. Uniform: distinct cells in
/// draw order.
std::vector<NodeId> place_innovators(const LatticeSpec& spec, SeedPattern pattern,
                                     std::size_t count, Rng& rng);

/// `count` cells nearest (centre_row, centre_col) by Chebyshev distance.
std::vector<NodeId> chebyshev_nearest(const LatticeSpec& spec, int centre_row, int centre_col,
                                      std::size_t count);

struct SeedingPlan {
  SeedPattern pattern = SeedPattern::Uniform;
  std::size_t total_innovators = 0;
  int rate_gamma = 1;
  std::vector<NodeId> positions;
  std::vector<int> activation_ticks;  // parallel to positions, non-decreasing, from 1

  int last_tick() const { return activation_ticks.empty() ? 0 : activation_ticks.back(); }
};

/// Randomly permutes the positions and releases them `gamma` per tick
/// starting at tick 1; the last block may be partial.
SeedingPlan schedule_innovators(std::span<const NodeId> positions, int gamma, Rng& rng,
                                SeedPattern pattern = SeedPattern::Uniform);

/// Innovator introduction rate for an innovation coefficient: p * n.
double gamma_for_p(double p, double n);

/// `node,tick` CSV.
void write_seeding_plan(std::ostream& out, const SeedingPlan& plan);

}  // namespace diffusion

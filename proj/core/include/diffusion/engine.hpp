#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "diffusion/network.hpp"
#include "diffusion/rng.hpp"
#include "diffusion/seeding.hpp"

namespace diffusion {

struct AgentState {
  bool adopted = false;
  bool is_innovator = false;
};

/// Homogeneous decision parameters shared by every agent.
struct DecisionParams {
  double alpha = 0.5;    // weight of social influence
  double delta_u = 0.6;  // u+ - u-
};

/// U+ - U- for an agent whose adopter-neighbour share is v_plus:
/// alpha * (2 v_plus - 1) + (1 - alpha) * delta_u.
double delta_utility(double v_plus, const DecisionParams& params);

/// Fewest adopter neighbours out of `neighbor_count` for which delta_utility
/// is strictly positive; neighbor_count + 1 when none suffices.
int adoption_threshold(int neighbor_count, const DecisionParams& params);

enum class UpdateMode {
  /// Every imitator reads the same snapshot: all adoptions up to the
  /// previous tick plus this tick's innovators.
  Synchronous,
  /// Imitators decide one at a time in a fresh random order each tick,
  /// seeing adoptions made earlier in the same tick.
  RandomSequential,
};

std::string_view to_string(UpdateMode mode);
UpdateMode parse_update_mode(std::string_view text);

struct SimulationOptions {
  int max_ticks = 500;
  UpdateMode mode = UpdateMode::Synchronous;
  /// Stop once this many consecutive post-seeding ticks add no adopter.
  int quiet_ticks = 2;
};

struct AdoptionTrajectory {
  std::vector<double> proportions;       // index = tick, proportions[0] == 0
  std::vector<std::size_t> adopters;     // cumulative adopter counts
  std::size_t population = 0;
  std::optional<int> saturated_at;

  int last_tick() const { return static_cast<int>(proportions.size()) - 1; }
  double final_proportion() const { return proportions.empty() ? 0.0 : proportions.back(); }
};

/// Irreversible threshold adoption. Each tick: scheduled innovators adopt,
/// then every other non-adopter adopts when delta_utility > 0, then the
/// cumulative share is recorded. Agents with no neighbours see v+ = 0. Stops at saturation, at max_ticks, or after
/// `quiet_ticks` unchanged ticks once seeding is complete.
AdoptionTrajectory simulate(const SocialNetwork& net, const SeedingPlan& plan,
                            const DecisionParams& params, const SimulationOptions& options, Rng& rng);

/// `tick,adopters,proportion` CSV.
void write_trajectory(std::ostream& out, const AdoptionTrajectory& traj);

/// Reads a CSV with `tick` and `proportion` columns (an `adopters` column is
/// optional). Ticks must be 0, 1, 2, ... in order.
AdoptionTrajectory read_trajectory(std::istream& in);

}  // namespace diffusion

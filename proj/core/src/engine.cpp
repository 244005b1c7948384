#include "diffusion/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "diffusion/csv.hpp"

namespace diffusion {

double delta_utility(double v_plus, const DecisionParams& params) {
  // v- = 1 - v+, so alpha * (v+ - v-) = alpha * (2 v+ - 1).
  return params.alpha * (2.0 * v_plus - 1.0) + (1.0 - params.alpha) * params.delta_u;
}

int adoption_threshold(int neighbor_count, const DecisionParams& params) {
  if (neighbor_count < 1) throw std::invalid_argument("adoption_threshold needs at least one neighbour");
  for (int m = 0; m <= neighbor_count; ++m) {
    const double v_plus = static_cast<double>(m) / static_cast<double>(neighbor_count);
    if (delta_utility(v_plus, params) > 0.0) return m;
  }
  return neighbor_count + 1;
}

std::string_view to_string(UpdateMode mode) {
  return mode == UpdateMode::Synchronous ? "synchronous" : "random-sequential";
}

UpdateMode parse_update_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "synchronous" || lower == "sync") return UpdateMode::Synchronous;
  if (lower == "random-sequential" || lower == "random_sequential" || lower == "sequential") {
    return UpdateMode::RandomSequential;
  }
  throw std::invalid_argument("unknown update mode '" + std::string(text) + "'");
}

namespace {

constexpr int kNever = std::numeric_limits<int>::max();

void validate_plan(const SeedingPlan& plan, std::size_t node_count, int max_ticks) {
  if (plan.positions.size() != plan.activation_ticks.size()) {
    throw std::invalid_argument("seeding plan positions and ticks differ in length");
  }
  std::vector<bool> seen(node_count, false);
  int previous = 1;
  for (std::size_t i = 0; i < plan.positions.size(); ++i) {
    const NodeId n = plan.positions[i];
    if (n >= node_count) {
      throw std::invalid_argument("seeding plan references node " + std::to_string(n) +
                                  " outside a network of " + std::to_string(node_count));
    }
    if (seen[n]) throw std::invalid_argument("seeding plan lists node " + std::to_string(n) + " twice");
    seen[n] = true;
    if (plan.activation_ticks[i] < previous) {
      throw std::invalid_argument("seeding plan activation ticks must be non-decreasing from 1");
    }
    previous = plan.activation_ticks[i];
  }
  if (max_ticks < 1 || max_ticks < plan.last_tick()) {
    throw std::invalid_argument("max_ticks must cover the seeding schedule");
  }
}

class Dynamics {
 public:
  Dynamics(const SocialNetwork& net, const SeedingPlan& plan, const DecisionParams& params)
      : net_(net), n_(net.node_count()), state_(n_), adopter_neighbors_(n_, 0), threshold_(n_) {
    const std::size_t max_deg = net.max_degree();
    std::vector<int> by_degree(max_deg + 1);
    by_degree[0] = delta_utility(0.0, params) > 0.0 ? 0 : kNever;
    for (std::size_t d = 1; d <= max_deg; ++d) by_degree[d] = adoption_threshold(static_cast<int>(d), params);
    for (NodeId i = 0; i < n_; ++i) threshold_[i] = by_degree[net.degree(i)];
    for (NodeId p : plan.positions) state_[p].is_innovator = true;
    pending_.reserve(n_);
    for (NodeId i = 0; i < n_; ++i) {
      if (!state_[i].is_innovator) pending_.push_back(i);
    }
  }

  std::size_t adopters() const { return adopters_; }
  std::size_t population() const { return n_; }

  void adopt(NodeId i) {
    assert(!state_[i].adopted);
    state_[i].adopted = true;
    ++adopters_;
  }

  void propagate(NodeId i) {
    for (NodeId j : net_.neighbors(i)) ++adopter_neighbors_[j];
  }

  bool ready(NodeId i) const { return adopter_neighbors_[i] >= threshold_[i]; }

  // Innovators of the tick are visible to every imitator decision in the same
  // tick; imitator adoptions only become visible at the next tick.
  void synchronous_tick(std::span<const NodeId> innovators) {
    for (NodeId s : innovators) {
      adopt(s);
      propagate(s);
    }
    fresh_.clear();
    for (NodeId i : pending_) {
      if (ready(i)) {
        adopt(i);
        fresh_.push_back(i);
      }
    }
    for (NodeId i : fresh_) propagate(i);
    drop_adopted();
  }

  void sequential_tick(std::span<const NodeId> innovators, Rng& rng) {
    for (NodeId s : innovators) {
      adopt(s);
      propagate(s);
    }
    shuffle(std::span<NodeId>(pending_), rng);
    for (NodeId i : pending_) {
      if (ready(i)) {
        adopt(i);
        propagate(i);
      }
    }
    drop_adopted();
  }

 private:
  void drop_adopted() {
    std::erase_if(pending_, [this](NodeId i) { return state_[i].adopted; });
  }

  const SocialNetwork& net_;
  std::size_t n_;
  std::vector<AgentState> state_;
  std::vector<int> adopter_neighbors_;
  std::vector<int> threshold_;
  std::vector<NodeId> pending_;  // imitators that have not adopted, row-major until shuffled
  std::vector<NodeId> fresh_;
  std::size_t adopters_ = 0;
};

}  // namespace

AdoptionTrajectory simulate(const SocialNetwork& net, const SeedingPlan& plan, const DecisionParams& params,
                            const SimulationOptions& options, Rng& rng) {
  validate_plan(plan, net.node_count(), options.max_ticks);
  Dynamics dyn(net, plan, params);

  AdoptionTrajectory traj;
  traj.population = net.node_count();
  traj.proportions.push_back(0.0);
  traj.adopters.push_back(0);

  const double n = static_cast<double>(traj.population);
  const int seeding_done = plan.last_tick();
  std::size_t next_seed = 0;
  int quiet = 0;
  for (int t = 1; t <= options.max_ticks; ++t) {
    const std::size_t first = next_seed;
    while (next_seed < plan.positions.size() && plan.activation_ticks[next_seed] == t) ++next_seed;
    const std::span<const NodeId> innovators(plan.positions.data() + first, next_seed - first);

    const std::size_t before = dyn.adopters();
    if (options.mode == UpdateMode::Synchronous) {
      dyn.synchronous_tick(innovators);
    } else {
      dyn.sequential_tick(innovators, rng);
    }
    const std::size_t after = dyn.adopters();
    if (after < before) throw std::logic_error("adoption is irreversible");

    traj.adopters.push_back(after);
    traj.proportions.push_back(static_cast<double>(after) / n);
    if (after == traj.population) {
      traj.saturated_at = t;
      break;
    }
    if (t >= seeding_done) {
      quiet = after == before ? quiet + 1 : 0;
      if (quiet >= options.quiet_ticks) break;
    }
  }
  return traj;
}

void write_trajectory(std::ostream& out, const AdoptionTrajectory& traj) {
  out << "tick,adopters,proportion\n";
  for (std::size_t t = 0; t < traj.proportions.size(); ++t) {
    out << t << ',' << traj.adopters[t] << ',' << format_double(traj.proportions[t]) << '\n';
  }
}

AdoptionTrajectory read_trajectory(std::istream& in) {
  const CsvTable table = read_csv(in);
  const std::size_t tick_col = table.column("tick");
  const std::size_t prop_col = table.column("proportion");
  const bool has_counts = table.has_column("adopters");
  const std::size_t count_col = has_counts ? table.column("adopters") : 0;

  AdoptionTrajectory traj;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.integer(r, tick_col) != static_cast<std::int64_t>(r)) {
      throw CsvError("line " + std::to_string(table.line_numbers[r]) + ": ticks must run 0, 1, 2, ...");
    }
    const double prop = table.number(r, prop_col);
    if (!(prop >= 0.0 && prop <= 1.0)) {
      throw CsvError("line " + std::to_string(table.line_numbers[r]) + ": proportion outside [0, 1]");
    }
    traj.proportions.push_back(prop);
    traj.adopters.push_back(has_counts ? static_cast<std::size_t>(table.integer(r, count_col)) : 0);
  }
  if (has_counts && !traj.proportions.empty() && traj.proportions.back() > 0.0) {
    traj.population = static_cast<std::size_t>(
        std::llround(static_cast<double>(traj.adopters.back()) / traj.proportions.back()));
  }
  for (std::size_t t = 0; t < traj.proportions.size(); ++t) {
    if (traj.proportions[t] >= 1.0) {
      traj.saturated_at = static_cast<int>(t);
      break;
    }
  }
  return traj;
}

}  // namespace diffusion

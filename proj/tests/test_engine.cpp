#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "diffusion/engine.hpp"
#include "diffusion/network.hpp"
#include "diffusion/seeding.hpp"

using namespace diffusion;

namespace {

// Straightforward reference: recount adopter neighbours from a snapshot every
// tick and evaluate the utility difference directly.
std::vector<double> brute_force(const SocialNetwork& net, const SeedingPlan& plan, const DecisionParams& params,
                                int max_ticks, int quiet_ticks) {
  const std::size_t n = net.node_count();
  std::vector<bool> adopted(n, false), innovator(n, false);
  for (NodeId p : plan.positions) innovator[p] = true;
  std::vector<double> out{0.0};
  int quiet = 0;
  std::size_t total = 0;
  for (int t = 1; t <= max_ticks; ++t) {
    const std::size_t before = total;
    for (std::size_t i = 0; i < plan.positions.size(); ++i) {
      if (plan.activation_ticks[i] == t) {
        adopted[plan.positions[i]] = true;
        ++total;
      }
    }
    const std::vector<bool> snapshot = adopted;
    for (NodeId i = 0; i < n; ++i) {
      if (innovator[i] || snapshot[i]) continue;
      const auto nb = net.neighbors(i);
      double v = 0.0;
      if (!nb.empty()) {
        int c = 0;
        for (NodeId j : nb) c += snapshot[j] ? 1 : 0;
        v = static_cast<double>(c) / static_cast<double>(nb.size());
      }
      if (delta_utility(v, params) > 0.0) {
        adopted[i] = true;
        ++total;
      }
    }
    out.push_back(static_cast<double>(total) / static_cast<double>(n));
    if (total == n) break;
    if (t >= plan.last_tick()) {
      quiet = total == before ? quiet + 1 : 0;
      if (quiet >= quiet_ticks) break;
    }
  }
  return out;
}

SeedingPlan plan_for(const std::vector<NodeId>& positions, const std::vector<int>& ticks) {
  SeedingPlan plan;
  plan.positions = positions;
  plan.activation_ticks = ticks;
  plan.total_innovators = positions.size();
  return plan;
}

}  // namespace

TEST(Threshold, StatedValues) {
  EXPECT_EQ(adoption_threshold(8, {0.5, 0.6}), 2);
  EXPECT_EQ(adoption_threshold(8, {0.5, 0.8}), 1);
  EXPECT_EQ(adoption_threshold(4, {0.5, 0.6}), 1);
  EXPECT_EQ(adoption_threshold(4, {0.5, 0.8}), 1);
}

TEST(Threshold, ClosedFormForHalfWeight) {
  // With alpha = 1/2 the condition reads m > d (1 - du) / 2.
  for (int d = 1; d <= 12; ++d) {
    for (double du : {0.0, 0.1, 0.3, 0.6, 0.8, 0.95}) {
      const double bound = d * (1.0 - du) / 2.0;
      // Exact ties are decided by rounding in the utility itself; see the
      // boundary tests.
      if (std::abs(bound - std::round(bound)) < 1e-9) continue;
      int expected = static_cast<int>(std::floor(bound)) + 1;
      EXPECT_EQ(adoption_threshold(d, {0.5, du}), std::min(expected, d + 1)) << d << " " << du;
    }
  }
}

TEST(Threshold, BoundaryAtUnitUtility) {
  // delta_u = 1 makes the isolated utility exactly zero: not enough on its own.
  EXPECT_DOUBLE_EQ(delta_utility(0.0, {0.5, 1.0}), 0.0);
  EXPECT_EQ(adoption_threshold(8, {0.5, 1.0}), 1);
  EXPECT_EQ(adoption_threshold(8, {0.5, 1.2}), 0);
  EXPECT_EQ(adoption_threshold(8, {1.0, 5.0}), 5);  // pure social influence: strict majority
  EXPECT_EQ(adoption_threshold(8, {0.5, -1.5}), 9);  // never
  EXPECT_THROW(adoption_threshold(0, {0.5, 0.6}), std::invalid_argument);
}

TEST(Utility, Formula) {
  EXPECT_DOUBLE_EQ(delta_utility(0.25, {0.5, 0.6}), 0.5 * (0.5 - 1.0) + 0.5 * 0.6);
  EXPECT_DOUBLE_EQ(delta_utility(1.0, {0.3, 0.0}), 0.3);
}

TEST(UpdateMode, Names) {
  EXPECT_EQ(parse_update_mode("synchronous"), UpdateMode::Synchronous);
  EXPECT_EQ(parse_update_mode("Random-Sequential"), UpdateMode::RandomSequential);
  EXPECT_THROW(parse_update_mode("async"), std::invalid_argument);
  EXPECT_EQ(parse_update_mode(to_string(UpdateMode::RandomSequential)), UpdateMode::RandomSequential);
}

TEST(Simulate, HandTracedSpread) {
  // 3x3 von Neumann grid, one innovator in the corner at tick 1. Corner and
  // edge agents need one adopter neighbour, the centre (degree 4) needs one.
  const LatticeSpec s{3, 3, Neighborhood::VonNeumann};
  const auto net = build_lattice(s);
  Rng rng(1);
  const auto traj = simulate(net, plan_for({0}, {1}), {0.5, 0.6}, {}, rng);
  // Tick 1: the corner plus its two neighbours (they see the innovator).
  // Tick 2: cells at Manhattan distance 2. Tick 3: 3. Tick 4: the far corner.
  const std::vector<double> expected{0.0, 3.0 / 9, 6.0 / 9, 8.0 / 9, 1.0};
  EXPECT_EQ(traj.proportions, expected);
  EXPECT_EQ(traj.saturated_at, 4);
  EXPECT_EQ(traj.adopters.back(), 9u);
}

TEST(Simulate, MatchesBruteForce) {
  for (auto hood : {Neighborhood::Moore, Neighborhood::VonNeumann}) {
    for (double du : {0.2, 0.6, 0.8}) {
      for (double p_r : {0.0, 0.1}) {
        const LatticeSpec s{10, 10, hood};
        Rng rng(42);
        const auto lattice = build_lattice(s);
        const auto net = p_r > 0 ? rewire(lattice, p_r, rng) : lattice;
        const auto positions = place_innovators(s, SeedPattern::Uniform, 6, rng);
        const auto plan = schedule_innovators(positions, 2, rng);
        const SimulationOptions opts{60, UpdateMode::Synchronous, 2};
        const auto traj = simulate(net, plan, {0.5, du}, opts, rng);
        EXPECT_EQ(traj.proportions, brute_force(net, plan, {0.5, du}, 60, 2))
            << "du=" << du << " p_r=" << p_r << " k=" << neighborhood_degree(hood);
      }
    }
  }
}

TEST(Simulate, SpontaneousAdoptionAboveUnitUtility) {
  const auto net = build_lattice({10, 10, Neighborhood::Moore});
  Rng rng(2);
  const auto traj = simulate(net, plan_for({0}, {1}), {0.5, 1.2}, {}, rng);
  EXPECT_EQ(traj.proportions, (std::vector<double>{0.0, 1.0}));
}

TEST(Simulate, NoInnovatorsNoAdoption) {
  const auto net = build_lattice({10, 10, Neighborhood::Moore});
  Rng rng(3);
  const auto traj = simulate(net, plan_for({}, {}), {0.5, 0.6}, {}, rng);
  for (double v : traj.proportions) EXPECT_EQ(v, 0.0);
  EXPECT_FALSE(traj.saturated_at);
  EXPECT_EQ(traj.last_tick(), 2);  // two quiet ticks
}

TEST(Simulate, IsolatedAgentNeverImitates) {
  // Node 3 of a 2x2 grid has no neighbours.
  const SocialNetwork net({2, 2, Neighborhood::VonNeumann}, 0.0, 0, {{1, 2}, {0, 2}, {0, 1}, {}});
  Rng rng(4);
  const auto traj = simulate(net, plan_for({0}, {1}), {0.5, 0.8}, {20}, rng);
  EXPECT_DOUBLE_EQ(traj.final_proportion(), 0.75);
  EXPECT_FALSE(traj.saturated_at);
  Rng rng2(4);
  const auto spontaneous = simulate(net, plan_for({0}, {1}), {0.5, 1.5}, {20}, rng2);
  EXPECT_EQ(spontaneous.saturated_at, 1);
}

TEST(Simulate, StopsAtMaxTicks) {
  const auto net = build_lattice({30, 30, Neighborhood::Moore});
  Rng rng(5);
  const auto traj = simulate(net, plan_for({0}, {1}), {0.5, 0.8}, {5}, rng);
  EXPECT_EQ(traj.last_tick(), 5);
  EXPECT_FALSE(traj.saturated_at);
}

TEST(Simulate, SequentialDominatesSynchronous) {
  // Monotone dynamics: seeing more adopters can only speed adoption up.
  const LatticeSpec s{40, 40, Neighborhood::Moore};
  Rng net_rng(6);
  const auto net = rewire(build_lattice(s), 0.02, net_rng);
  Rng seed_rng(7);
  const auto plan = schedule_innovators(place_innovators(s, SeedPattern::Uniform, 40, seed_rng), 10, seed_rng);
  Rng a(8), b(8);
  const auto sync = simulate(net, plan, {0.5, 0.6}, {200, UpdateMode::Synchronous}, a);
  const auto seq = simulate(net, plan, {0.5, 0.6}, {200, UpdateMode::RandomSequential}, b);
  for (std::size_t t = 0; t < std::min(sync.proportions.size(), seq.proportions.size()); ++t) {
    EXPECT_GE(seq.proportions[t], sync.proportions[t]) << "tick " << t;
  }
  EXPECT_TRUE(seq.saturated_at && sync.saturated_at);
  EXPECT_LE(*seq.saturated_at, *sync.saturated_at);
}

TEST(Simulate, MonotoneAndDeterministic) {
  const LatticeSpec s{50, 50, Neighborhood::Moore};
  for (auto mode : {UpdateMode::Synchronous, UpdateMode::RandomSequential}) {
    std::vector<double> first;
    for (int rep = 0; rep < 2; ++rep) {
      Rng rng(9);
      const auto net = rewire(build_lattice(s), 0.01, rng);
      const auto plan = schedule_innovators(place_innovators(s, SeedPattern::Uniform, 62, rng), 20, rng);
      const auto traj = simulate(net, plan, {0.5, 0.6}, {500, mode}, rng);
      EXPECT_EQ(traj.proportions.front(), 0.0);
      for (std::size_t t = 1; t < traj.proportions.size(); ++t) {
        EXPECT_GE(traj.proportions[t], traj.proportions[t - 1]);
        EXPECT_EQ(traj.adopters[t], static_cast<std::size_t>(std::llround(traj.proportions[t] * 2500)));
      }
      if (rep == 0) first = traj.proportions;
      else EXPECT_EQ(traj.proportions, first);
    }
  }
}

TEST(Simulate, RejectsInvalidPlans) {
  const auto net = build_lattice({5, 5, Neighborhood::Moore});
  Rng rng(10);
  EXPECT_THROW(simulate(net, plan_for({25}, {1}), {}, {}, rng), std::invalid_argument);
  EXPECT_THROW(simulate(net, plan_for({1, 1}, {1, 1}), {}, {}, rng), std::invalid_argument);
  EXPECT_THROW(simulate(net, plan_for({1, 2}, {2, 1}), {}, {}, rng), std::invalid_argument);
  EXPECT_THROW(simulate(net, plan_for({1}, {0}), {}, {}, rng), std::invalid_argument);
  EXPECT_THROW(simulate(net, plan_for({1, 2}, {1, 9}), {}, {5}, rng), std::invalid_argument);
  EXPECT_THROW(simulate(net, plan_for({1}, {1, 2}), {}, {}, rng), std::invalid_argument);
}

TEST(Trajectory, CsvRoundTrip) {
  const auto net = build_lattice({20, 20, Neighborhood::Moore});
  Rng rng(11);
  const auto plan = schedule_innovators(place_innovators({20, 20}, SeedPattern::Uniform, 10, rng), 3, rng);
  const auto traj = simulate(net, plan, {0.5, 0.6}, {}, rng);
  std::stringstream buf;
  write_trajectory(buf, traj);
  const auto back = read_trajectory(buf);
  EXPECT_EQ(back.proportions, traj.proportions);
  EXPECT_EQ(back.adopters, traj.adopters);
  EXPECT_EQ(back.population, traj.population);
  EXPECT_EQ(back.saturated_at, traj.saturated_at);
}

TEST(Trajectory, ReaderValidates) {
  std::stringstream gap("tick,proportion\n0,0\n2,0.5\n");
  EXPECT_THROW(read_trajectory(gap), std::runtime_error);
  std::stringstream range("tick,proportion\n0,0\n1,1.5\n");
  EXPECT_THROW(read_trajectory(range), std::runtime_error);
  std::stringstream missing("tick,share\n0,0\n");
  EXPECT_THROW(read_trajectory(missing), std::runtime_error);
}

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "diffusion/sweep.hpp"
#include "support/reference_table.hpp"

using namespace diffusion;

namespace {

SweepGrid small_grid() {
  SweepGrid g;
  g.rows = g.cols = 30;
  g.k = {8, 4};
  g.delta_u = {0.6};
  g.sigma = {SeedPattern::Uniform, SeedPattern::Compact};
  g.p_r = {0.0, 0.05};
  g.gamma = {5, 22};
  return g;
}

std::string csv_of(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  write_sweep_csv(out, records);
  return out.str();
}

}  // namespace

TEST(Grid, DefaultDesignFollowsTableOrder) {
  const auto configs = SweepGrid{}.expand();
  const auto table = reference::load_rows();
  ASSERT_EQ(configs.size(), 360u);
  ASSERT_EQ(table.size(), 360u);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    EXPECT_EQ(configs[i].k, table[i].k) << i;
    EXPECT_EQ(configs[i].delta_u, table[i].delta_u) << i;
    EXPECT_EQ(configs[i].sigma, table[i].sigma) << i;
    EXPECT_EQ(configs[i].p_r, table[i].p_r) << i;
    EXPECT_EQ(configs[i].gamma, table[i].gamma) << i;
    EXPECT_EQ(configs[i].lattice.neighborhood, neighborhood_for_degree(configs[i].k));
  }
}

TEST(Grid, ConfigValidation) {
  SimConfig c;
  EXPECT_NO_THROW(c.validate());
  c.p_r = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.k = 6;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.gamma = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Sweep, IndependentOfWorkerCount) {
  const auto configs = small_grid().expand();
  const auto one = run_sweep(configs, 2, 77, 1);
  const auto three = run_sweep(configs, 2, 77, 3);
  ASSERT_EQ(one.size(), configs.size() * 2);
  EXPECT_EQ(csv_of(one), csv_of(three));
  EXPECT_NE(csv_of(one), csv_of(run_sweep(configs, 2, 78, 3)));
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].config.replication, static_cast<int>(i % 2));
    EXPECT_EQ(one[i].config.seed, run_seed(77, i / 2, static_cast<int>(i % 2)));
  }
}

TEST(Sweep, RunSeedsAreDistinct) {
  std::set<std::uint64_t> seeds;
  for (std::size_t c = 0; c < 360; ++c)
    for (int r = 0; r < 5; ++r) seeds.insert(run_seed(1, c, r));
  EXPECT_EQ(seeds.size(), 1800u);
}

TEST(Sweep, SingleRunFitsAndSaturates) {
  SimConfig c;
  c.sigma = SeedPattern::Uniform;
  c.gamma = 1000;
  c.seed = 5;
  const auto out = run_config(c);
  EXPECT_TRUE(out.record.error.empty()) << out.record.error;
  EXPECT_TRUE(out.record.saturated());
  EXPECT_EQ(out.trajectory.final_proportion(), 1.0);
  EXPECT_GT(out.record.r_squared, 0.98);
  EXPECT_NEAR(out.record.takeoff, takeoff_time(out.record.params()).ticks, 1e-12);
  EXPECT_EQ(run_config(c).trajectory.proportions, out.trajectory.proportions);
}

TEST(Sweep, FailuresAreRecordedNotThrown) {
  SimConfig c;
  c.lattice = {10, 10, Neighborhood::Moore};
  c.sigma = SeedPattern::Intermediate;  // lattice too small
  const auto out = run_config(c);
  EXPECT_FALSE(out.record.error.empty());
  EXPECT_TRUE(std::isnan(out.record.p));
  EXPECT_FALSE(out.record.saturated());
  std::stringstream buf;
  write_sweep_csv(buf, std::vector<SweepRecord>{out.record});
  EXPECT_NE(buf.str().find(",nan,nan,nan,nan,-1"), std::string::npos);
}

TEST(SweepCsv, RoundTrip) {
  auto records = run_sweep(small_grid().expand(), 1, 3, 2);
  records[1].p = std::numeric_limits<double>::quiet_NaN();
  records[1].saturation_tick = -1;
  const std::string text = csv_of(records);
  EXPECT_EQ(text.substr(0, text.find('\n')), kSweepCsvHeader);
  std::istringstream in(text);
  const auto back = read_sweep_csv(in);
  EXPECT_EQ(csv_of(back), text);
  ASSERT_EQ(back.size(), records.size());
  EXPECT_TRUE(std::isnan(back[1].p));
  EXPECT_EQ(back[0].config.seed, records[0].config.seed);
}

TEST(Hull, SquareWithInteriorAndCollinearPoints) {
  const std::vector<PqPoint> pts{{1, 1}, {0, 0}, {1, 0}, {0, 1}, {0.5, 0.5}, {0.5, 0}, {0, 0}};
  const auto hull = convex_hull(pts);
  EXPECT_EQ(hull, (std::vector<PqPoint>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
}

TEST(Hull, StartsAtLowestThenLeftmost) {
  const auto hull = convex_hull({{2, 3}, {1, 0}, {3, 0}, {4, 2}});
  ASSERT_FALSE(hull.empty());
  EXPECT_EQ(hull.front(), (PqPoint{1, 0}));
  // Counter-clockwise: positive signed area.
  double area = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    area += a.p * b.q - b.p * a.q;
  }
  EXPECT_GT(area, 0);
}

TEST(Hull, NeedsThreeNonCollinearPoints) {
  EXPECT_THROW(convex_hull({{0, 0}, {1, 1}}), TooFewPoints);
  EXPECT_THROW(convex_hull({{0, 0}, {1, 1}, {2, 2}, {0, 0}}), TooFewPoints);
}

TEST(Locate, Classifies) {
  const std::vector<PqPoint> hull{{0, 0}, {2, 0}, {2, 1}, {0, 1}};
  EXPECT_EQ(locate({1, 0.5}, hull), Location::Inside);
  EXPECT_EQ(locate({2, 1}, hull), Location::Boundary);
  EXPECT_EQ(locate({1, 0}, hull), Location::Boundary);
  EXPECT_EQ(locate({1, 1 + 1e-13}, hull), Location::Boundary);
  EXPECT_EQ(locate({1, 1 + 1e-9}, hull), Location::Outside);
  EXPECT_EQ(locate({10, 10}, hull), Location::Outside);
  EXPECT_EQ(to_string(Location::Inside), "inside");
}

TEST(Envelope, TableCompactRegion) {
  const auto records = reference::records();
  const EnvelopeFilter filter{8, 0.6, SeedPattern::Compact};
  const auto env = envelope(records, filter);
  double pmin = 1, pmax = 0, qmin = 1, qmax = 0;
  for (const auto& v : env.hull) {
    pmin = std::min(pmin, v.p);
    pmax = std::max(pmax, v.p);
    qmin = std::min(qmin, v.q);
    qmax = std::max(qmax, v.q);
  }
  EXPECT_NEAR(pmin, 0.00079, 5e-6);
  EXPECT_NEAR(pmax, 0.0325, 5e-5);
  EXPECT_NEAR(qmin, 0.319, 5e-4);
  EXPECT_NEAR(qmax, 0.730, 5e-4);
  std::size_t generating = 0;
  for (const auto& r : records) {
    if (!filter.matches(r.config)) continue;
    ++generating;
    EXPECT_NE(locate({r.p, r.q}, env), Location::Outside);
  }
  EXPECT_EQ(generating, 30u);
  EXPECT_EQ(locate({10, 10}, env), Location::Outside);
}

TEST(Envelope, SkipsFailedFits) {
  auto records = reference::records();
  records[0].fit_ok = false;
  records[0].p = records[0].q = std::numeric_limits<double>::quiet_NaN();
  EXPECT_NO_THROW(envelope(records, {8, 0.6, SeedPattern::Compact}));
  EXPECT_THROW(envelope(records, {8, 0.7, SeedPattern::Compact}), TooFewPoints);
}

TEST(Nearest, FindsTableRow) {
  const auto records = reference::records();
  const auto& hit = nearest_micro({0.0072863, 0.3187899}, records);
  EXPECT_EQ(&hit, &records.front());
  EXPECT_EQ(hit.config.gamma, 125);
  EXPECT_EQ(hit.config.sigma, SeedPattern::Compact);
  EXPECT_EQ(hit.config.p_r, 0.0);
}

TEST(Nearest, TiesGoToEarlierRecord) {
  std::vector<SweepRecord> recs(3);
  recs[0].p = 0.0, recs[0].q = 0.0;
  recs[1].p = 2.0, recs[1].q = 0.0;
  recs[2].p = 1.0, recs[2].q = 1.0;
  EXPECT_EQ(&nearest_micro({1.0, 0.0}, recs), &recs[0]);
  EXPECT_EQ(&nearest_micro({2.0, 0.0}, recs), &recs[1]);
}

TEST(Roi, StrictInequality) {
  const auto profit = linear_profit(1.0, 1000.0);
  const auto same = roi_from_shares(0.5, 0.5, profit, 0.0, 0.0);
  EXPECT_FALSE(same.profitable);
  EXPECT_EQ(same.difference, 0.0);
  const auto gain = roi_from_shares(0.5, 0.7, profit, 150.0, 0.0);
  EXPECT_DOUBLE_EQ(gain.difference, 50.0);
  EXPECT_DOUBLE_EQ(gain.profit_base, 500.0);
  EXPECT_DOUBLE_EQ(gain.profit_boosted, 550.0);
  EXPECT_TRUE(gain.profitable);
  EXPECT_FALSE(roi_from_shares(0.5, 0.7, profit, 150.0, 50.0).profitable);
}

TEST(Roi, FasterSeedingWinsAfterTakeoff) {
  const auto table = reference::records();
  const SweepRecord& slow = table[0];  // gamma 125
  const SweepRecord& fast = table[4];  // gamma 1000, otherwise identical
  ASSERT_EQ(fast.config.gamma, 1000);
  SweepRecord slow_rec = slow, fast_rec = fast;
  const double t_star = std::max(slow.takeoff, fast.takeoff) + 1.0;
  const auto report = roi_check(slow_rec, fast_rec, t_star, 1.0, 0.0, 0.0);
  EXPECT_GT(report.share_boosted, report.share_base);
  EXPECT_TRUE(report.profitable);
  EXPECT_DOUBLE_EQ(report.profit_base, 40000.0 * report.share_base);
  EXPECT_THROW(roi_check(slow_rec, fast_rec, std::min(slow.takeoff, fast.takeoff) - 0.5, 1.0, 0.0, 0.0),
               std::invalid_argument);
  EXPECT_THROW(roi_check(slow.params(), fast.params(), 0.5 * fast.takeoff, linear_profit(1, 1), 0, 0),
               std::invalid_argument);
}

TEST(Stats, SpearmanKnownValues) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(spearman(x, std::vector<double>{10, 20, 30, 40, 50}), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(spearman(x, std::vector<double>{2, 1, 4, 3, 5}), 0.8, 1e-15);
  EXPECT_NEAR(spearman(std::vector<double>{1, 2, 2, 3}, std::vector<double>{1, 2, 3, 4}), 4.5 / std::sqrt(22.5),
              1e-15);
  EXPECT_TRUE(std::isnan(spearman(x, std::vector<double>{1, 1, 1, 1, 1})));
  EXPECT_THROW(spearman(x, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Stats, Median) {
  EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(EmpiricalPoints, ReadsLabels) {
  std::istringstream in("label,p,q\nphones,0.01,0.4\n# comment\nradio,0.027,0.435\n");
  const auto pts = read_empirical_points(in);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[1].label, "radio");
  EXPECT_DOUBLE_EQ(pts[1].point.q, 0.435);
  std::istringstream bad("name,p,q\nx,1,2\n");
  EXPECT_THROW(read_empirical_points(bad), std::runtime_error);
}

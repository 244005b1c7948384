#include "diffusion/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "diffusion/csv.hpp"

namespace diffusion {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw std::invalid_argument(field + ": " + message);
}

}  // namespace

void SimConfig::validate() const {
  require(lattice.rows >= 2 && lattice.cols >= 2, "rows/cols", "lattice must be at least 2x2");
  require(k == 4 || k == 8, "k", "must be 4 or 8");
  require(lattice.neighborhood == neighborhood_for_degree(k), "k", "does not match the lattice neighbourhood");
  require(std::isfinite(delta_u), "delta_u", "must be finite");
  require(p_r >= 0.0 && p_r <= 1.0, "p_r", "must lie in [0, 1]");
  require(gamma >= 1, "gamma", "must be at least 1");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha", "must lie in [0, 1]");
  require(innovator_fraction > 0.0 && innovator_fraction <= 1.0, "innovator_fraction", "must lie in (0, 1]");
  require(max_ticks >= 1, "max_ticks", "must be at least 1");
}

std::vector<SimConfig> SweepGrid::expand() const {
  std::vector<SimConfig> out;
  out.reserve(k.size() * delta_u.size() * sigma.size() * p_r.size() * gamma.size());
  for (int kk : k) {
    for (double du : delta_u) {
      for (SeedPattern s : sigma) {
        for (double pr : p_r) {
          for (int g : gamma) {
            SimConfig c;
            c.lattice = {rows, cols, neighborhood_for_degree(kk)};
            c.k = kk;
            c.delta_u = du;
            c.sigma = s;
            c.p_r = pr;
            c.gamma = g;
            c.alpha = alpha;
            c.innovator_fraction = innovator_fraction;
            c.max_ticks = max_ticks;
            c.update = update;
            out.push_back(c);
          }
        }
      }
    }
  }
  return out;
}

PreparedRun prepare_run(const SimConfig& config) {
  config.validate();
  Rng network_rng(derive_seed(config.seed, 1));
  Rng placement_rng(derive_seed(config.seed, 2));
  Rng schedule_rng(derive_seed(config.seed, 3));

  SocialNetwork lattice = build_lattice(config.lattice);
  SocialNetwork net = config.p_r > 0.0 ? rewire(lattice, config.p_r, network_rng) : std::move(lattice);
  const std::size_t count = innovator_quota(net.node_count(), config.innovator_fraction);
  const auto positions = place_innovators(config.lattice, config.sigma, count, placement_rng);
  SeedingPlan plan = schedule_innovators(positions, config.gamma, schedule_rng, config.sigma);
  return {std::move(net), std::move(plan)};
}

RunOutput run_config(const SimConfig& config) {
  RunOutput out;
  SweepRecord& rec = out.record;
  rec.config = config;
  rec.p = rec.q = rec.r_squared = rec.takeoff = kNaN;
  try {
    const PreparedRun run = prepare_run(config);
    Rng dynamics_rng(derive_seed(config.seed, 4));
    const SimulationOptions options{std::max(config.max_ticks, run.plan.last_tick()), config.update};
    out.trajectory = simulate(run.network, run.plan, {config.alpha, config.delta_u}, options, dynamics_rng);
    rec.saturation_tick = out.trajectory.saturated_at.value_or(-1);
  } catch (const std::exception& e) {
    rec.error = std::string("simulation: ") + e.what();
    return out;
  }
  try {
    const FitResult fit = fit_bass(out.trajectory);
    rec.p = fit.params.p;
    rec.q = fit.params.q;
    rec.r_squared = fit.r_squared;
    rec.converged = fit.converged;
    rec.fit_ok = true;
    if (fit.params.q > 0.0) rec.takeoff = takeoff_time(fit.params).ticks;
  } catch (const std::exception& e) {
    rec.error = std::string("fit: ") + e.what();
  }
  return out;
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t config_index, int replication) {
  return derive_seed(master_seed, config_index, static_cast<std::uint64_t>(replication));
}

std::vector<SweepRecord> run_sweep(std::span<const SimConfig> grid, int replications, std::uint64_t master_seed,
                                   int jobs) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  const std::size_t total = grid.size() * static_cast<std::size_t>(replications);
  std::vector<SweepRecord> records(total);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t config_index = i / static_cast<std::size_t>(replications);
      const int replication = static_cast<int>(i % static_cast<std::size_t>(replications));
      SimConfig config = grid[config_index];
      config.seed = run_seed(master_seed, config_index, replication);
      config.replication = replication;
      records[i] = run_config(config).record;
    }
  };
  const auto threads = static_cast<std::size_t>(std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, total));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return records;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : records) {
    const SimConfig& c = r.config;
    out << c.k << ',' << format_double(c.delta_u) << ',' << to_string(c.sigma) << ',' << format_double(c.p_r)
        << ',' << c.gamma << ',' << c.seed << ',' << c.replication << ',' << format_double(r.p) << ','
        << format_double(r.q) << ',' << format_double(r.r_squared) << ',' << format_double(r.takeoff) << ','
        << r.saturation_tick << '\n';
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto col = [&](const char* name) { return t.column(name); };
  const std::size_t k = col("k"), du = col("delta_u"), sigma = col("sigma"), pr = col("p_r"), gamma = col("gamma"),
                    seed = col("seed"), rep = col("replication"), p = col("p"), q = col("q"),
                    r2 = col("r_squared"), takeoff = col("takeoff"), sat = col("saturation_tick");
  std::vector<SweepRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    SweepRecord r;
    SimConfig& c = r.config;
    try {
      c.k = static_cast<int>(t.integer(i, k));
      c.lattice.neighborhood = neighborhood_for_degree(c.k);
      c.sigma = parse_seed_pattern(t.text(i, sigma));
    } catch (const std::invalid_argument& e) {
      throw CsvError("line " + std::to_string(t.line_numbers[i]) + ": " + e.what());
    }
    c.delta_u = t.number(i, du);
    c.p_r = t.number(i, pr);
    c.gamma = static_cast<int>(t.integer(i, gamma));
    const std::string& seed_text = t.text(i, seed);
    c.seed = std::stoull(seed_text);
    c.replication = static_cast<int>(t.integer(i, rep));
    r.p = t.number(i, p);
    r.q = t.number(i, q);
    r.r_squared = t.number(i, r2);
    r.takeoff = t.number(i, takeoff);
    r.saturation_tick = static_cast<int>(t.integer(i, sat));
    r.fit_ok = std::isfinite(r.p) && std::isfinite(r.q);
    r.converged = r.fit_ok;
    out.push_back(std::move(r));
  }
  return out;
}

bool EnvelopeFilter::matches(const SimConfig& c) const {
  return c.k == k && std::abs(c.delta_u - delta_u) < 1e-9 && c.sigma == sigma;
}

namespace {

double cross(PqPoint o, PqPoint a, PqPoint b) {
  return (a.p - o.p) * (b.q - o.q) - (a.q - o.q) * (b.p - o.p);
}

}  // namespace

std::vector<PqPoint> convex_hull(std::vector<PqPoint> points) {
  std::sort(points.begin(), points.end(),
            [](PqPoint a, PqPoint b) { return a.p < b.p || (a.p == b.p && a.q < b.q); });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) throw TooFewPoints("convex hull needs at least three distinct points");

  std::vector<PqPoint> hull(2 * points.size());
  std::size_t n = 0;
  for (const PqPoint& pt : points) {  // lower chain
    while (n >= 2 && cross(hull[n - 2], hull[n - 1], pt) <= 0.0) --n;
    hull[n++] = pt;
  }
  const std::size_t lower = n + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {  // upper chain
    while (n >= lower && cross(hull[n - 2], hull[n - 1], *it) <= 0.0) --n;
    hull[n++] = *it;
  }
  hull.resize(n - 1);
  if (hull.size() < 3) throw TooFewPoints("points are collinear");

  const auto first = std::min_element(hull.begin(), hull.end(), [](PqPoint a, PqPoint b) {
    return a.q < b.q || (a.q == b.q && a.p < b.p);
  });
  std::rotate(hull.begin(), first, hull.end());
  return hull;
}

Envelope envelope(std::span<const SweepRecord> records, const EnvelopeFilter& filter) {
  std::vector<PqPoint> pts;
  for (const auto& r : records) {
    if (filter.matches(r.config) && r.fit_ok && std::isfinite(r.p) && std::isfinite(r.q)) pts.push_back({r.p, r.q});
  }
  return {filter, convex_hull(std::move(pts))};
}

std::string_view to_string(Location loc) {
  switch (loc) {
    case Location::Inside: return "inside";
    case Location::Boundary: return "boundary";
    case Location::Outside: return "outside";
  }
  return "unknown";
}

Location locate(PqPoint point, std::span<const PqPoint> hull, double tolerance) {
  if (hull.size() < 3) throw TooFewPoints("locate needs a hull with at least three vertices");
  bool on_edge = false;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const PqPoint a = hull[i];
    const PqPoint b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.p - a.p, b.q - a.q);
    const double dist = cross(a, b, point) / len;  // signed distance, positive inside
    if (dist < -tolerance) return Location::Outside;
    if (dist <= tolerance) on_edge = true;
  }
  return on_edge ? Location::Boundary : Location::Inside;
}

void write_hull_csv(std::ostream& out, std::span<const PqPoint> hull) {
  out << "p,q\n";
  for (const auto& v : hull) out << format_double(v.p) << ',' << format_double(v.q) << '\n';
}

const SweepRecord& nearest_micro(PqPoint point, std::span<const SweepRecord> records) {
  if (records.empty()) throw std::invalid_argument("nearest_micro needs at least one record");
  double p_lo = std::numeric_limits<double>::infinity(), p_hi = -p_lo;
  double q_lo = p_lo, q_hi = -p_lo;
  for (const auto& r : records) {
    if (!std::isfinite(r.p) || !std::isfinite(r.q)) continue;
    p_lo = std::min(p_lo, r.p);
    p_hi = std::max(p_hi, r.p);
    q_lo = std::min(q_lo, r.q);
    q_hi = std::max(q_hi, r.q);
  }
  const double p_span = p_hi > p_lo ? p_hi - p_lo : 1.0;
  const double q_span = q_hi > q_lo ? q_hi - q_lo : 1.0;

  const SweepRecord* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (!std::isfinite(r.p) || !std::isfinite(r.q)) continue;
    const double dp = (r.p - point.p) / p_span;
    const double dq = (r.q - point.q) / q_span;
    const double d = dp * dp + dq * dq;
    if (d < best_dist) {
      best_dist = d;
      best = &r;
    }
  }
  if (best == nullptr) throw std::invalid_argument("nearest_micro: no record has fitted parameters");
  return *best;
}

std::vector<LabeledPoint> read_empirical_points(std::istream& in) {
  const CsvTable t = read_csv(in);
  const std::size_t label = t.column("label"), p = t.column("p"), q = t.column("q");
  std::vector<LabeledPoint> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out.push_back({t.text(i, label), {t.number(i, p), t.number(i, q)}});
  }
  return out;
}

RoiReport roi_from_shares(double share_base, double share_boosted, const ProfitFunction& profit, double investment,
                          double roi_min) {
  RoiReport r;
  r.share_base = share_base;
  r.share_boosted = share_boosted;
  r.profit_base = profit(share_base);
  r.profit_boosted = profit(share_boosted) - investment;
  r.difference = r.profit_boosted - r.profit_base;
  r.profitable = r.difference > roi_min;
  return r;
}

ProfitFunction linear_profit(double profit_per_adopter, double population) {
  return [scale = profit_per_adopter * population](double share) { return scale * share; };
}

RoiReport roi_check(BassParams base, BassParams boosted, double t_star, const ProfitFunction& profit,
                    double investment, double roi_min) {
  const double latest = std::max(takeoff_time(base).ticks, takeoff_time(boosted).ticks);
  if (!(t_star > latest)) {
    throw std::invalid_argument("t* = " + format_double(t_star) + " must exceed both takeoff times (latest " +
                                format_double(latest) + ")");
  }
  return roi_from_shares(bass_curve(base, t_star), bass_curve(boosted, t_star), profit, investment, roi_min);
}

RoiReport roi_check(const SweepRecord& base, const SweepRecord& boosted, double t_star, double profit_per_adopter,
                    double investment, double roi_min) {
  const auto population = static_cast<double>(base.config.lattice.node_count());
  return roi_check(base.params(), boosted.params(), t_star, linear_profit(profit_per_adopter, population),
                   investment, roi_min);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[idx[m]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman needs two equal-length samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return kNaN;
  return sxy / std::sqrt(sxx * syy);
}

double median(std::vector<double> values) {
  if (values.empty()) return kNaN;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace diffusion

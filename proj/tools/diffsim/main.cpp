// diffsim: command-line front end for simulation, sweeps and Bass analysis.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "diffusion/bass.hpp"
#include "diffusion/calibrate.hpp"
#include "diffusion/config.hpp"
#include "diffusion/csv.hpp"
#include "diffusion/engine.hpp"
#include "diffusion/network.hpp"
#include "diffusion/rng.hpp"
#include "diffusion/seeding.hpp"
#include "diffusion/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace diffusion;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Bad arguments or unreadable/malformed input.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Valid input that nevertheless could not be processed.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 0;  // 0: one per hardware thread
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write '" + path.string() + "'");
  return out;
}

void write_json_file(const fs::path& path, const json& value) {
  auto out = open_output(path);
  out << value.dump(2) << '\n';
}

fs::path manifest_path(const fs::path& output) { return fs::path(output.string() + ".manifest.json"); }

// Writes a primary output to `path` plus its manifest, or to stdout without one.
template <class Writer>
void emit(const std::string& path, Writer&& write, const json& manifest) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  {
    auto out = open_output(path);
    write(out);
    if (!out) throw RuntimeFailure("failed writing '" + path + "'");
  }
  write_json_file(manifest_path(path), manifest);
}

int resolved_jobs(int jobs) {
  if (jobs > 0) return jobs;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw UsageError(std::string(name) + " must be finite");
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string network_out;
  std::string plan_out;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  auto* cmd = app.add_subcommand("simulate", "Run one simulation and write its adoption trajectory");
  cmd->add_option("config", a.config, "JSON run configuration (or a manifest written by simulate)")->required();
  cmd->add_option("--network-out", a.network_out, "Also write the network as a src,dst edge list");
  cmd->add_option("--plan-out", a.plan_out, "Also write the innovator schedule as node,tick");
}

int run_simulate(const Globals& g, const SimulateArgs& a) {
  SimConfig config = parse_sim_config(read_file(a.config), a.config);
  if (g.seed) config.seed = *g.seed;

  const PreparedRun run = [&] {
    try {
      return prepare_run(config);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(a.config + ": " + e.what());
    }
  }();
  Rng dynamics_rng(derive_seed(config.seed, 4));
  const SimulationOptions options{std::max(config.max_ticks, run.plan.last_tick()), config.update};
  const AdoptionTrajectory traj =
      simulate(run.network, run.plan, {config.alpha, config.delta_u}, options, dynamics_rng);

  json params{{"network_out", a.network_out}, {"plan_out", a.plan_out}};
  const json manifest = make_manifest("simulate", to_json(config), config.seed, params);
  emit(g.out, [&](std::ostream& os) { write_trajectory(os, traj); }, manifest);
  if (!a.network_out.empty()) {
    emit(a.network_out, [&](std::ostream& os) { write_edge_list(os, run.network); }, manifest);
  }
  if (!a.plan_out.empty()) {
    emit(a.plan_out, [&](std::ostream& os) { write_seeding_plan(os, run.plan); }, manifest);
  }

  std::cerr << "ticks: " << traj.last_tick() << ", final proportion: " << format_double(traj.final_proportion());
  if (traj.saturated_at) std::cerr << ", saturated at tick " << *traj.saturated_at;
  std::cerr << '\n';
  return kExitOk;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
  std::string grid;
  std::optional<int> replications;
};

void add_sweep(CLI::App& app, SweepArgs& a) {
  auto* cmd = app.add_subcommand("sweep", "Run a parameter grid, fit every run and write envelopes");
  cmd->add_option("grid", a.grid, "JSON grid file; the default 360-combination grid when omitted");
  cmd->add_option("--replications,-r", a.replications, "Replications per combination (default 5)")
      ->check(CLI::PositiveNumber);
}

std::string envelope_file_name(const EnvelopeFilter& f) {
  return "envelope_k" + std::to_string(f.k) + "_du" + format_double(f.delta_u) + "_" +
         std::string(to_string(f.sigma)) + ".csv";
}

int run_sweep_command(const Globals& g, const SweepArgs& a) {
  if (g.out.empty() || g.out == "-") throw UsageError("sweep needs --out <directory>");
  GridFile file;
  if (!a.grid.empty()) file = parse_sweep_grid(read_file(a.grid), a.grid);
  const std::uint64_t master = g.seed.value_or(file.seed.value_or(0));
  const int replications = a.replications.value_or(file.replications.value_or(5));

  std::vector<SimConfig> configs;
  try {
    configs = file.grid.expand();
  } catch (const std::invalid_argument& e) {
    throw ConfigError((a.grid.empty() ? std::string("grid") : a.grid) + ": " + e.what());
  }
  if (configs.empty()) throw ConfigError("grid: no combinations");

  const fs::path dir(g.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeFailure("cannot create '" + dir.string() + "': " + ec.message());

  const auto records = run_sweep(configs, replications, master, resolved_jobs(g.jobs));
  const auto failed = static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const SweepRecord& r) { return !r.error.empty(); }));

  {
    auto out = open_output(dir / "sweep.csv");
    write_sweep_csv(out, records);
  }

  json envelopes = json::array();
  json skipped = json::array();
  std::set<std::tuple<int, double, SeedPattern>> seen;
  for (const auto& c : configs) {
    if (!seen.insert({c.k, c.delta_u, c.sigma}).second) continue;
    const EnvelopeFilter filter{c.k, c.delta_u, c.sigma};
    const std::string name = envelope_file_name(filter);
    try {
      const Envelope env = envelope(records, filter);
      auto out = open_output(dir / name);
      write_hull_csv(out, env.hull);
      envelopes.push_back(name);
    } catch (const TooFewPoints& e) {
      skipped.push_back({{"file", name}, {"reason", e.what()}});
    }
  }

  json config = to_json(file.grid);
  config["seed"] = master;
  config["replications"] = replications;
  json params{{"sweep_csv", "sweep.csv"},
              {"envelopes", envelopes},
              {"skipped_envelopes", skipped},
              {"rows", records.size()},
              {"failed_rows", failed}};
  json errors = json::array();
  for (const auto& r : records) {
    if (r.error.empty()) continue;
    errors.push_back({{"k", r.config.k},
                      {"delta_u", r.config.delta_u},
                      {"sigma", std::string(to_string(r.config.sigma))},
                      {"p_r", r.config.p_r},
                      {"gamma", r.config.gamma},
                      {"replication", r.config.replication},
                      {"error", r.error}});
  }
  params["errors"] = errors;
  write_json_file(dir / "manifest.json", make_manifest("sweep", config, master, params));

  std::cerr << records.size() << " runs, " << failed << " failed\n";
  if (failed == records.size()) {
    std::cerr << "error: every run failed, first error: " << records.front().error << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

// ---- fit -----------------------------------------------------------------

struct FitArgs {
  std::string input;
  std::optional<double> p0;
  std::optional<double> q0;
};

void add_fit(CLI::App& app, FitArgs& a) {
  auto* cmd = app.add_subcommand("fit", "Fit Bass p and q to an adoption trajectory CSV");
  cmd->add_option("trajectory", a.input, "CSV with tick and proportion columns")->required();
  cmd->add_option("--p0", a.p0, "Initial p");
  cmd->add_option("--q0", a.q0, "Initial q");
}

int run_fit(const Globals& g, const FitArgs& a) {
  auto in = open_input(a.input);
  std::vector<double> times;
  std::vector<double> shares;
  try {
    const CsvTable table = read_csv(in);
    const std::size_t t_col = table.column("tick");
    const std::size_t s_col = table.column("proportion");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double t = table.number(r, t_col);
      const double s = table.number(r, s_col);
      const std::string where = a.input + ":" + std::to_string(table.line_numbers[r]) + ": ";
      if (!std::isfinite(t) || (!times.empty() && t <= times.back())) {
        throw UsageError(where + "ticks must be finite and increasing");
      }
      if (!(s >= 0.0 && s <= 1.0)) throw UsageError(where + "proportion outside [0, 1]");
      times.push_back(t);
      shares.push_back(s);
      if (s >= 1.0) break;  // fit window ends at saturation
    }
  } catch (const CsvError& e) {
    throw UsageError(a.input + ": " + e.what());
  }

  std::optional<BassParams> init;
  if (a.p0 || a.q0) {
    init = BassParams{a.p0.value_or(std::max(shares.size() > 1 ? shares[1] : 0.0, 1e-3)), a.q0.value_or(0.5)};
  }
  FitResult fit;
  try {
    fit = fit_bass(times, shares, init);
  } catch (const DegenerateTrajectory& e) {
    throw RuntimeFailure(std::string("degenerate trajectory: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(a.input + ": " + e.what());
  }

  const json result = to_json(fit);
  const json manifest = make_manifest("fit", {{"input", a.input}}, 0,
                                      {{"p0", a.p0 ? json(*a.p0) : json()}, {"q0", a.q0 ? json(*a.q0) : json()}});
  emit(g.out, [&](std::ostream& os) { os << result.dump(2) << '\n'; }, manifest);
  return kExitOk;
}

// ---- bass ----------------------------------------------------------------

struct BassArgs {
  double p = 0.0;
  double q = 0.0;
  std::vector<double> t;
  double t_end = 50.0;
  double dt = 1.0;
};

void add_bass(CLI::App& app, BassArgs& a) {
  auto* cmd = app.add_subcommand("bass", "Evaluate the Bass cumulative adoption curve");
  cmd->add_option("p", a.p, "Innovation coefficient")->required();
  cmd->add_option("q", a.q, "Imitation coefficient")->required();
  cmd->add_option("--t", a.t, "Explicit evaluation times (repeatable)");
  cmd->add_option("--t-end", a.t_end, "Last time of the regular grid")->capture_default_str();
  cmd->add_option("--dt", a.dt, "Spacing of the regular grid")->capture_default_str();
}

int run_bass(const Globals& g, const BassArgs& a) {
  check_finite(a.p, "p");
  check_finite(a.q, "q");
  if (a.p <= 0.0) throw UsageError("p must be positive");
  if (a.q < 0.0) throw UsageError("q must be non-negative");
  std::vector<double> times = a.t;
  if (times.empty()) {
    check_finite(a.t_end, "--t-end");
    check_finite(a.dt, "--dt");
    if (a.dt <= 0.0 || a.t_end < 0.0) throw UsageError("--dt must be positive and --t-end non-negative");
    const auto steps = static_cast<std::size_t>(std::floor(a.t_end / a.dt + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) times.push_back(static_cast<double>(i) * a.dt);
  }
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw UsageError("times must be finite and non-negative");
  }

  const BassParams params{a.p, a.q};
  const json manifest = make_manifest("bass", {{"p", a.p}, {"q", a.q}}, 0, {{"times", times}});
  emit(g.out,
       [&](std::ostream& os) {
         os << "tick,proportion\n";
         for (double t : times) os << format_double(t) << ',' << format_double(bass_curve(params, t)) << '\n';
       },
       manifest);
  return kExitOk;
}

// ---- takeoff -------------------------------------------------------------

struct TakeoffArgs {
  double p = 0.0;
  double q = 0.0;
};

void add_takeoff(CLI::App& app, TakeoffArgs& a) {
  auto* cmd = app.add_subcommand("takeoff", "Print the take-off time of a Bass curve");
  cmd->add_option("p", a.p, "Innovation coefficient")->required();
  cmd->add_option("q", a.q, "Imitation coefficient")->required();
}

int run_takeoff(const Globals&, const TakeoffArgs& a) {
  check_finite(a.p, "p");
  check_finite(a.q, "q");
  if (a.p <= 0.0 || a.q <= 0.0) throw UsageError("p and q must be positive");
  const TakeoffTime t = takeoff_time({a.p, a.q});
  std::ostringstream os;
  os.precision(10);
  os << t.ticks;
  std::cout << os.str() << '\n';
  if (t.degenerate) std::cerr << "warning: take-off precedes t = 0 (q/p too small for a take-off)\n";
  return kExitOk;
}

// ---- roi -----------------------------------------------------------------

struct RoiArgs {
  std::vector<double> base;
  std::vector<double> boosted;
  std::string sweep;
  std::optional<std::size_t> base_row;
  std::optional<std::size_t> boosted_row;
  double t_star = 0.0;
  double profit_per_adopter = 1.0;
  std::optional<double> population;
  double investment = 0.0;
  double roi_min = 0.0;
};

void add_roi(CLI::App& app, RoiArgs& a) {
  auto* cmd = app.add_subcommand("roi", "Check whether a boosted diffusion pays for its investment at t*");
  auto* base = cmd->add_option("--base", a.base, "Base p q")->expected(2);
  auto* boosted = cmd->add_option("--boosted", a.boosted, "Boosted p q")->expected(2);
  auto* sweep = cmd->add_option("--sweep", a.sweep, "Sweep CSV to take both records from");
  auto* base_row = cmd->add_option("--base-row", a.base_row, "0-based data row of the base record");
  auto* boosted_row = cmd->add_option("--boosted-row", a.boosted_row, "0-based data row of the boosted record");
  base->excludes(sweep);
  boosted->excludes(sweep);
  sweep->needs(base_row)->needs(boosted_row);
  base->needs(boosted);
  boosted->needs(base);
  cmd->add_option("--t-star", a.t_star, "Evaluation time, after both take-offs")->required();
  cmd->add_option("--profit-per-adopter", a.profit_per_adopter, "Profit per adopter")->capture_default_str();
  cmd->add_option("--population", a.population, "Market size (default: the records' lattice size)");
  cmd->add_option("--investment", a.investment, "Cost of the intervention")->capture_default_str();
  cmd->add_option("--roi-min", a.roi_min, "Required profit gain")->capture_default_str();
}

int run_roi(const Globals& g, const RoiArgs& a) {
  for (double v : {a.t_star, a.profit_per_adopter, a.investment, a.roi_min}) check_finite(v, "roi argument");
  BassParams base;
  BassParams boosted;
  double population = a.population.value_or(static_cast<double>(LatticeSpec{}.node_count()));
  json inputs;
  if (!a.sweep.empty()) {
    auto in = open_input(a.sweep);
    std::vector<SweepRecord> records;
    try {
      records = read_sweep_csv(in);
    } catch (const CsvError& e) {
      throw UsageError(a.sweep + ": " + e.what());
    }
    const auto pick = [&](std::size_t row) -> const SweepRecord& {
      if (row >= records.size()) throw UsageError("row " + std::to_string(row) + " out of range");
      const SweepRecord& r = records[row];
      if (!std::isfinite(r.p) || !std::isfinite(r.q)) {
        throw RuntimeFailure("row " + std::to_string(row) + " has no fitted coefficients");
      }
      return r;
    };
    base = pick(*a.base_row).params();
    boosted = pick(*a.boosted_row).params();
    if (!a.population) population = static_cast<double>(pick(*a.base_row).config.lattice.node_count());
    inputs = {{"sweep", a.sweep}, {"base_row", *a.base_row}, {"boosted_row", *a.boosted_row}};
  } else if (a.base.size() == 2 && a.boosted.size() == 2) {
    base = {a.base[0], a.base[1]};
    boosted = {a.boosted[0], a.boosted[1]};
    for (double v : {base.p, base.q, boosted.p, boosted.q}) check_finite(v, "p/q");
    inputs = {{"base", a.base}, {"boosted", a.boosted}};
  } else {
    throw UsageError("roi needs --base and --boosted, or --sweep with --base-row and --boosted-row");
  }

  RoiReport report;
  try {
    report = roi_check(base, boosted, a.t_star, linear_profit(a.profit_per_adopter, population), a.investment,
                       a.roi_min);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  json result = to_json(report);
  result["t_star"] = a.t_star;
  result["takeoff_base"] = takeoff_time(base).ticks;
  result["takeoff_boosted"] = takeoff_time(boosted).ticks;

  inputs["t_star"] = a.t_star;
  inputs["profit_per_adopter"] = a.profit_per_adopter;
  inputs["population"] = population;
  inputs["investment"] = a.investment;
  inputs["roi_min"] = a.roi_min;
  emit(g.out, [&](std::ostream& os) { os << result.dump(2) << '\n'; }, make_manifest("roi", inputs, 0));
  return kExitOk;
}

// ---- envelope ------------------------------------------------------------

struct EnvelopeArgs {
  std::string sweep;
  int k = 8;
  double delta_u = 0.6;
  std::string sigma = "compact";
  std::string points;
};

void add_envelope(CLI::App& app, EnvelopeArgs& a) {
  auto* cmd = app.add_subcommand("envelope", "Convex hull of fitted (p, q) and classification of empirical points");
  cmd->add_option("sweep", a.sweep, "Sweep CSV")->required();
  cmd->add_option("--k", a.k, "Network degree")->capture_default_str();
  cmd->add_option("--delta-u", a.delta_u, "Utility difference")->capture_default_str();
  cmd->add_option("--sigma", a.sigma, "Innovator pattern")->capture_default_str();
  cmd->add_option("--points", a.points, "label,p,q CSV to classify (classification goes to stdout)");
}

int run_envelope(const Globals& g, const EnvelopeArgs& a) {
  EnvelopeFilter filter{a.k, a.delta_u, SeedPattern::Compact};
  try {
    filter.sigma = parse_seed_pattern(a.sigma);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto in = open_input(a.sweep);
  std::vector<SweepRecord> records;
  std::vector<LabeledPoint> points;
  try {
    records = read_sweep_csv(in);
    if (!a.points.empty()) {
      auto pin = open_input(a.points);
      points = read_empirical_points(pin);
    }
  } catch (const CsvError& e) {
    throw UsageError(e.what());
  }

  Envelope env;
  try {
    env = envelope(records, filter);
  } catch (const TooFewPoints& e) {
    throw RuntimeFailure(e.what());
  }

  const json inputs{{"sweep", a.sweep},
                    {"k", a.k},
                    {"delta_u", a.delta_u},
                    {"sigma", std::string(to_string(filter.sigma))},
                    {"points", a.points}};
  const json manifest = make_manifest("envelope", inputs, 0);
  if (points.empty() || !g.out.empty()) {
    emit(g.out, [&](std::ostream& os) { write_hull_csv(os, env.hull); }, manifest);
  }
  if (!a.points.empty()) {
    std::vector<SweepRecord> matching;
    std::copy_if(records.begin(), records.end(), std::back_inserter(matching), [&](const SweepRecord& r) {
      return filter.matches(r.config) && std::isfinite(r.p) && std::isfinite(r.q);
    });
    std::cout << "label,p,q,location,nearest_k,nearest_delta_u,nearest_sigma,nearest_p_r,nearest_gamma\n";
    for (const auto& pt : points) {
      const SweepRecord& near = nearest_micro(pt.point, matching);
      std::cout << pt.label << ',' << format_double(pt.point.p) << ',' << format_double(pt.point.q) << ','
                << to_string(locate(pt.point, env)) << ',' << near.config.k << ','
                << format_double(near.config.delta_u) << ',' << to_string(near.config.sigma) << ','
                << format_double(near.config.p_r) << ',' << near.config.gamma << '\n';
    }
  }
  return kExitOk;
}

// ---- netstats ------------------------------------------------------------

struct NetstatsArgs {
  std::string config;
  std::size_t sample = 100;
  std::string edges;
};

void add_netstats(CLI::App& app, NetstatsArgs& a) {
  auto* cmd = app.add_subcommand("netstats", "Degree, path length and clustering of a configured network");
  cmd->add_option("config", a.config, "JSON run configuration (defaults when omitted)");
  cmd->add_option("--sample", a.sample, "BFS source nodes for path length; 0 for all")->capture_default_str();
  cmd->add_option("--edges", a.edges, "Also write the edge list");
}

int run_netstats(const Globals& g, const NetstatsArgs& a) {
  SimConfig config;
  if (!a.config.empty()) config = parse_sim_config(read_file(a.config), a.config);
  if (g.seed) config.seed = *g.seed;
  // Same sub-stream as simulate, so both see the same network for a seed.
  const SocialNetwork net = [&] {
    try {
      config.validate();
      Rng network_rng(derive_seed(config.seed, 1));
      SocialNetwork lattice = build_lattice(config.lattice);
      return config.p_r > 0.0 ? rewire(lattice, config.p_r, network_rng) : lattice;
    } catch (const std::invalid_argument& e) {
      throw ConfigError((a.config.empty() ? std::string("config") : a.config) + ": " + e.what());
    }
  }();
  Rng stats_rng(derive_seed(config.seed, 5));
  const std::size_t sample = a.sample == 0 ? net.node_count() : a.sample;
  json result = to_json(network_stats(net, sample, stats_rng));
  result["node_count"] = net.node_count();
  result["edge_count"] = net.edge_count();
  result["rewired_edges"] = net.rewired_edge_count();

  const json manifest = make_manifest("netstats", to_json(config), config.seed, {{"sample", a.sample}});
  emit(g.out, [&](std::ostream& os) { os << result.dump(2) << '\n'; }, manifest);
  if (!a.edges.empty()) emit(a.edges, [&](std::ostream& os) { write_edge_list(os, net); }, manifest);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based innovation diffusion and Bass calibration toolkit", "diffsim"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "Master seed (overrides the configuration)");
  app.add_option("--out,-o", g.out, "Output file, or directory for sweep; '-' or empty for stdout");
  app.add_option("--jobs,-j", g.jobs, "Worker threads for sweep (default: hardware threads)")
      ->check(CLI::NonNegativeNumber);

  SimulateArgs simulate_args;
  SweepArgs sweep_args;
  FitArgs fit_args;
  BassArgs bass_args;
  TakeoffArgs takeoff_args;
  RoiArgs roi_args;
  EnvelopeArgs envelope_args;
  NetstatsArgs netstats_args;
  add_simulate(app, simulate_args);
  add_sweep(app, sweep_args);
  add_fit(app, fit_args);
  add_bass(app, bass_args);
  add_takeoff(app, takeoff_args);
  add_roi(app, roi_args);
  add_envelope(app, envelope_args);
  add_netstats(app, netstats_args);
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "simulate") return run_simulate(g, simulate_args);
    if (name == "sweep") return run_sweep_command(g, sweep_args);
    if (name == "fit") return run_fit(g, fit_args);
    if (name == "bass") return run_bass(g, bass_args);
    if (name == "takeoff") return run_takeoff(g, takeoff_args);
    if (name == "roi") return run_roi(g, roi_args);
    if (name == "envelope") return run_envelope(g, envelope_args);
    if (name == "netstats") return run_netstats(g, netstats_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

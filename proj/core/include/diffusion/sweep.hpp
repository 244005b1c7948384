#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffusion/bass.hpp"
#include "diffusion/calibrate.hpp"
#include "diffusion/engine.hpp"
#include "diffusion/network.hpp"
#include "diffusion/seeding.hpp"

namespace diffusion {

/// One micro-parameter combination plus the run coordinates.
struct SimConfig {
  LatticeSpec lattice;  // neighbourhood follows k
  int k = 8;
  double delta_u = 0.6;
  SeedPattern sigma = SeedPattern::Compact;
  double p_r = 0.0;
  int gamma = 125;
  double alpha = 0.5;
  double innovator_fraction = kInnovatorFraction;
  int max_ticks = 500;
  UpdateMode update = UpdateMode::Synchronous;
  std::uint64_t seed = 0;  // per-run seed
  int replication = 0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Cartesian grid of micro-parameters; defaults reproduce the 360-run design.
struct SweepGrid {
  int rows = 200;
  int cols = 200;
  std::vector<int> k{8, 4};
  std::vector<double> delta_u{0.6, 0.8};
  std::vector<SeedPattern> sigma{SeedPattern::Compact, SeedPattern::Intermediate, SeedPattern::Uniform};
  std::vector<double> p_r{0.0, 0.0025, 0.005, 0.01, 0.02, 0.04};
  std::vector<int> gamma{125, 200, 250, 500, 1000};
  double alpha = 0.5;
  double innovator_fraction = kInnovatorFraction;
  int max_ticks = 500;
  UpdateMode update = UpdateMode::Synchronous;

  /// Configurations in k, delta_u, sigma, p_r, gamma nesting order (seed and
  /// replication left at zero).
  std::vector<SimConfig> expand() const;
};

struct SweepRecord {
  SimConfig config;
  double p = 0.0;
  double q = 0.0;
  double r_squared = 0.0;
  double takeoff = 0.0;
  int saturation_tick = -1;  // -1 when the run never saturated
  bool fit_ok = false;
  bool converged = false;
  std::string error;  // empty unless the run or fit failed

  BassParams params() const { return {p, q}; }
  bool saturated() const { return saturation_tick >= 0; }
};

/// Output of a single configured run.
struct RunOutput {
  AdoptionTrajectory trajectory;
  SweepRecord record;
};

struct PreparedRun {
  SocialNetwork network;
  SeedingPlan plan;
};

/// Network and seeding plan of a configuration, drawn from sub-streams of
/// config.seed. Throws std::invalid_argument on an invalid configuration.
PreparedRun prepare_run(const SimConfig& config);

/// Builds, rewires, seeds, simulates and fits one configuration using
/// config.seed. Failures are captured in the record, never thrown.
RunOutput run_config(const SimConfig& config);

/// Per-run seed derived from the master seed, configuration index and replication.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t config_index, int replication);

/// Every config times every replication, in config-major order. Output order
/// and content do not depend on `jobs`.
std::vector<SweepRecord> run_sweep(std::span<const SimConfig> grid, int replications,
                                   std::uint64_t master_seed, int jobs = 1);

inline constexpr const char* kSweepCsvHeader =
    "k,delta_u,sigma,p_r,gamma,seed,replication,p,q,r_squared,takeoff,saturation_tick";

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);
/// Reads the sweep CSV; lattice size and other unstored fields keep defaults.
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

struct PqPoint {
  double p = 0.0;
  double q = 0.0;
  friend bool operator==(const PqPoint&, const PqPoint&) = default;
};

class TooFewPoints : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EnvelopeFilter {
  int k = 8;
  double delta_u = 0.6;
  SeedPattern sigma = SeedPattern::Compact;

  bool matches(const SimConfig& c) const;
};

struct Envelope {
  EnvelopeFilter filter;
  std::vector<PqPoint> hull;  // counter-clockwise, lowest-then-leftmost first
};

/// Monotone-chain convex hull, collinear boundary points dropped.
/// Throws TooFewPoints for fewer than three distinct non-collinear points.
std::vector<PqPoint> convex_hull(std::vector<PqPoint> points);

/// Hull of the fitted (p, q) of records matching the filter; records whose
/// fit failed are skipped.
Envelope envelope(std::span<const SweepRecord> records, const EnvelopeFilter& filter);

enum class Location { Inside, Boundary, Outside };
std::string_view to_string(Location loc);

inline constexpr double kBoundaryTolerance = 1e-12;

Location locate(PqPoint point, std::span<const PqPoint> hull, double tolerance = kBoundaryTolerance);
inline Location locate(PqPoint point, const Envelope& env, double tolerance = kBoundaryTolerance) {
  return locate(point, env.hull, tolerance);
}

void write_hull_csv(std::ostream& out, std::span<const PqPoint> hull);

/// Record closest to `point` after scaling each axis by the records'
/// p-range and q-range; ties go to the earlier record.
const SweepRecord& nearest_micro(PqPoint point, std::span<const SweepRecord> records);

struct LabeledPoint {
  std::string label;
  PqPoint point;
};

/// `label,p,q` CSV of empirical coefficients.
std::vector<LabeledPoint> read_empirical_points(std::istream& in);

/// Cumulative net profit as a function of the adopter share at t*.
using ProfitFunction = std::function<double(double share)>;

struct RoiReport {
  double share_base = 0.0;
  double share_boosted = 0.0;
  double profit_base = 0.0;
  double profit_boosted = 0.0;
  double difference = 0.0;
  bool profitable = false;
};

/// Compares G(boosted) - investment - G(base) against roi_min, where the
/// shares are already evaluated at t*.
RoiReport roi_from_shares(double share_base, double share_boosted, const ProfitFunction& profit,
                          double investment, double roi_min);

/// Linear profit: profit_per_adopter * population * share.
ProfitFunction linear_profit(double profit_per_adopter, double population);

/// Evaluates both fitted Bass curves at t_star and applies the criterion.
/// Throws std::invalid_argument unless t_star exceeds both takeoff times.
RoiReport roi_check(BassParams base, BassParams boosted, double t_star, const ProfitFunction& profit,
                    double investment, double roi_min);
RoiReport roi_check(const SweepRecord& base, const SweepRecord& boosted, double t_star,
                    double profit_per_adopter, double investment, double roi_min);

/// Spearman rank correlation with average ranks for ties; NaN when either
/// side is constant.
double spearman(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);

}  // namespace diffusion

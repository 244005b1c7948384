#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>

#include "diffusion/bass.hpp"
#include "diffusion/engine.hpp"

namespace diffusion {

/// Observed shares have zero variance, so r^2 is undefined.
class DegenerateTrajectory : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FitOptions {
  int max_iterations = 500;
  double step_tolerance = 1e-10;  // relative parameter step
  double p_min = 1e-6;
  double p_max = 1.0;
  double q_min = 0.0;
  double q_max = 1.0;
};

struct FitResult {
  BassParams params;
  double r_squared = 0.0;
  double residual_sum = 0.0;  // sum of squared residuals
  int iterations = 0;
  bool converged = false;
  bool p_at_bound = false;
  bool q_at_bound = false;
  std::size_t points = 0;
};

/// Partial derivatives of the closed-form curve with respect to (p, q).
struct BassGradient {
  double d_p = 0.0;
  double d_q = 0.0;
};

BassGradient bass_gradient(const BassParams& params, double t);

/// Analytic minus central-difference (h = 1e-6) derivative, for p and q.
std::pair<double, double> jacobian_check(const BassParams& params, double t);

/// Box-constrained Levenberg-Marquardt least squares of the closed-form Bass
/// curve against (times, shares). Throws DegenerateTrajectory for constant
/// data and std::invalid_argument for fewer than four points.
FitResult fit_bass(std::span<const double> times, std::span<const double> shares,
                   std::optional<BassParams> init = std::nullopt, const FitOptions& options = {});

/// Fits ticks 0 through the first saturated tick (or the last recorded one).
FitResult fit_bass(const AdoptionTrajectory& traj, std::optional<BassParams> init = std::nullopt,
                   const FitOptions& options = {});

}  // namespace diffusion

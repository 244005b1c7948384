#pragma once

#include <vector>

namespace diffusion {

/// Bass innovation (p) and imitation (q) coefficients, per tick.
struct BassParams {
  double p = 0.0;
  double q = 0.0;

  friend bool operator==(const BassParams&, const BassParams&) = default;
};

/// Closed-form cumulative adoption share from n(0) = 0:
/// (1 - e^{-(p+q)t}) / (1 + (q/p) e^{-(p+q)t}). Throws for p <= 0 or t < 0.
double bass_curve(const BassParams& params, double t);

/// Closed form without the t >= 0 precondition; the takeoff analysis and its
/// tests look at the curve's analytic continuation to negative times.
double bass_curve_extended(const BassParams& params, double t);

struct OdeSample {
  double t;
  double share;
};

/// Classical RK4 on dn/dt = (p + q n)(1 - n) from n(0) = 0, fixed step `dt`.
/// The final step is shortened to land exactly on t_end.
std::vector<OdeSample> bass_ode_solve(const BassParams& params, double t_end, double dt);

struct TakeoffTime {
  double ticks = 0.0;
  /// Takeoff precedes launch: q <= p (2 + sqrt 3).
  bool degenerate = false;
};

/// Earlier root of d^3 n / dt^3 = 0: ln(q / (p (2 + sqrt 3))) / (p + q).
/// Throws for p <= 0 or q <= 0.
TakeoffTime takeoff_time(const BassParams& params);

/// Time of peak adoption rate, ln(q / p) / (p + q).
double inflection_time(const BassParams& params);

/// q / p. Throws for p <= 0.
double shape_ratio(const BassParams& params);

}  // namespace diffusion

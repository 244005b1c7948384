#include "diffusion/calibrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace diffusion {

BassGradient bass_gradient(const BassParams& params, double t) {
  const double p = params.p;
  const double q = params.q;
  const double e = std::exp(-(p + q) * t);
  const double ratio = q / p;
  const double num = 1.0 - e;
  const double den = 1.0 + ratio * e;
  // d(num)/dp = d(num)/dq = t e
  const double dnum = t * e;
  const double dden_dp = -e * (ratio * t + q / (p * p));
  const double dden_dq = e * (1.0 / p - ratio * t);
  const double den2 = den * den;
  return {(dnum * den - num * dden_dp) / den2, (dnum * den - num * dden_dq) / den2};
}

std::pair<double, double> jacobian_check(const BassParams& params, double t) {
  constexpr double h = 1e-6;
  const BassGradient g = bass_gradient(params, t);
  const double fd_p = (bass_curve_extended({params.p + h, params.q}, t) -
                       bass_curve_extended({params.p - h, params.q}, t)) / (2.0 * h);
  const double fd_q = (bass_curve_extended({params.p, params.q + h}, t) -
                       bass_curve_extended({params.p, params.q - h}, t)) / (2.0 * h);
  return {g.d_p - fd_p, g.d_q - fd_q};
}

namespace {

struct Box {
  std::array<double, 2> lo;
  std::array<double, 2> hi;

  std::array<double, 2> clamp(std::array<double, 2> x) const {
    for (int i = 0; i < 2; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
  }
};

double sum_squares(std::span<const double> times, std::span<const double> shares, std::array<double, 2> x) {
  const BassParams params{x[0], x[1]};
  double ssr = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double r = shares[i] - bass_curve_extended(params, times[i]);
    ssr += r * r;
  }
  return ssr;
}

double relative_step(std::array<double, 2> from, std::array<double, 2> to) {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double scale = std::max(std::abs(from[i]), 1e-8);
    worst = std::max(worst, std::abs(to[i] - from[i]) / scale);
  }
  return worst;
}

bool near(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

}  // namespace

FitResult fit_bass(std::span<const double> times, std::span<const double> shares,
                   std::optional<BassParams> init, const FitOptions& options) {
  if (times.size() != shares.size()) throw std::invalid_argument("times and shares differ in length");
  if (times.size() < 4) throw std::invalid_argument("a Bass fit needs at least four observations");

  double mean = 0.0;
  for (double y : shares) mean += y;
  mean /= static_cast<double>(shares.size());
  double ss_tot = 0.0;
  for (double y : shares) ss_tot += (y - mean) * (y - mean);
  if (!(ss_tot > 0.0)) throw DegenerateTrajectory("observed adoption shares are constant");

  const Box box{{options.p_min, options.q_min}, {options.p_max, options.q_max}};
  const BassParams start = init.value_or(BassParams{std::max(shares[1], 1e-3), 0.5});
  std::array<double, 2> x = box.clamp({start.p, start.q});
  double ssr = sum_squares(times, shares, x);

  FitResult result;
  double lambda = 1e-3;
  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    std::array<std::array<double, 2>, 2> a{};
    std::array<double, 2> g{};
    const BassParams params{x[0], x[1]};
    for (std::size_t i = 0; i < times.size(); ++i) {
      const BassGradient d = bass_gradient(params, times[i]);
      const double r = shares[i] - bass_curve_extended(params, times[i]);
      a[0][0] += d.d_p * d.d_p;
      a[0][1] += d.d_p * d.d_q;
      a[1][1] += d.d_q * d.d_q;
      g[0] += d.d_p * r;
      g[1] += d.d_q * r;
    }
    a[1][0] = a[0][1];

    // A parameter resting on a bound whose descent direction points outward
    // is held fixed for this iteration.
    std::array<bool, 2> free{true, true};
    for (int i = 0; i < 2; ++i) {
      if ((near(x[i], box.lo[i]) && g[i] < 0.0) || (near(x[i], box.hi[i]) && g[i] > 0.0)) free[i] = false;
    }
    if (!free[0] && !free[1]) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    double step = 0.0;
    while (!accepted) {
      std::array<double, 2> delta{};
      const double d0 = a[0][0] * (1.0 + lambda) + 1e-300;
      const double d1 = a[1][1] * (1.0 + lambda) + 1e-300;
      if (free[0] && free[1]) {
        const double det = d0 * d1 - a[0][1] * a[1][0];
        delta[0] = (g[0] * d1 - a[0][1] * g[1]) / det;
        delta[1] = (d0 * g[1] - a[1][0] * g[0]) / det;
      } else if (free[0]) {
        delta[0] = g[0] / d0;
      } else {
        delta[1] = g[1] / d1;
      }
      const auto trial = box.clamp({x[0] + delta[0], x[1] + delta[1]});
      step = relative_step(x, trial);
      const double trial_ssr = sum_squares(times, shares, trial);
      if (std::isfinite(trial_ssr) && trial_ssr <= ssr) {
        x = trial;
        ssr = trial_ssr;
        lambda = std::max(lambda * 0.1, 1e-15);
        accepted = true;
      } else {
        lambda *= 10.0;
        if (lambda > 1e16) break;
      }
    }
    if (step < options.step_tolerance) {
      result.converged = true;
      break;
    }
    if (!accepted) break;
  }

  result.params = {x[0], x[1]};
  result.residual_sum = ssr;
  result.r_squared = 1.0 - ssr / ss_tot;
  result.iterations = it;
  result.p_at_bound = near(x[0], box.lo[0]) || near(x[0], box.hi[0]);
  result.q_at_bound = near(x[1], box.lo[1]) || near(x[1], box.hi[1]);
  result.points = times.size();
  return result;
}

FitResult fit_bass(const AdoptionTrajectory& traj, std::optional<BassParams> init, const FitOptions& options) {
  std::size_t end = traj.proportions.size();
  if (traj.saturated_at) {
    end = std::min(end, static_cast<std::size_t>(*traj.saturated_at) + 1);
  } else {
    const auto full = std::find_if(traj.proportions.begin(), traj.proportions.end(),
                                   [](double v) { return v >= 1.0; });
    if (full != traj.proportions.end()) end = static_cast<std::size_t>(full - traj.proportions.begin()) + 1;
  }
  std::vector<double> times(end);
  for (std::size_t t = 0; t < end; ++t) times[t] = static_cast<double>(t);
  return fit_bass(times, std::span<const double>(traj.proportions.data(), end), init, options);
}

}  // namespace diffusion

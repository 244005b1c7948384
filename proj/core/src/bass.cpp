#include "diffusion/bass.hpp"

#include <cmath>
#include <stdexcept>

namespace diffusion {

namespace {

void require_positive_p(const BassParams& params) {
  if (!(params.p > 0.0) || !std::isfinite(params.p)) {
    throw std::invalid_argument("Bass innovation coefficient p must be positive and finite");
  }
}

}  // namespace

double bass_curve_extended(const BassParams& params, double t) {
  require_positive_p(params);
  const double decay = std::exp(-(params.p + params.q) * t);
  return (1.0 - decay) / (1.0 + (params.q / params.p) * decay);
}

double bass_curve(const BassParams& params, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("bass_curve needs t >= 0");
  return bass_curve_extended(params, t);
}

std::vector<OdeSample> bass_ode_solve(const BassParams& params, double t_end, double dt) {
  if (!std::isfinite(params.p) || !std::isfinite(params.q)) {
    throw std::invalid_argument("Bass parameters must be finite");
  }
  if (!(dt > 0.0) || !(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("bass_ode_solve needs dt > 0 and finite t_end > 0");
  }
  const auto rhs = [&](double n) { return (params.p + params.q * n) * (1.0 - n); };

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  std::vector<OdeSample> out;
  out.reserve(steps + 1);
  double n = 0.0;
  out.push_back({0.0, n});
  for (std::size_t i = 0; i < steps; ++i) {
    const double t0 = static_cast<double>(i) * dt;
    const double t1 = i + 1 == steps ? t_end : static_cast<double>(i + 1) * dt;
    const double h = t1 - t0;
    const double k1 = rhs(n);
    const double k2 = rhs(n + 0.5 * h * k1);
    const double k3 = rhs(n + 0.5 * h * k2);
    const double k4 = rhs(n + h * k3);
    n += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back({t1, n});
  }
  return out;
}

TakeoffTime takeoff_time(const BassParams& params) {
  require_positive_p(params);
  if (!(params.q > 0.0)) throw std::invalid_argument("takeoff time needs q > 0");
  const double ticks = std::log(params.q / (params.p * (2.0 + std::sqrt(3.0)))) / (params.p + params.q);
  return {ticks, ticks < 0.0};
}

double inflection_time(const BassParams& params) {
  require_positive_p(params);
  if (!(params.q > 0.0)) throw std::invalid_argument("inflection time needs q > 0");
  return std::log(params.q / params.p) / (params.p + params.q);
}

double shape_ratio(const BassParams& params) {
  require_positive_p(params);
  return params.q / params.p;
}

}  // namespace diffusion

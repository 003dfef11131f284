#include "blowup/emden_ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "blowup/errors.hpp"
#include "detail/dopri5.hpp"
#include "detail/hermite.hpp"

namespace blowup {

namespace {

bool is_integer(double x) { return std::floor(x) == x; }

bool opposite_sign(double prev, double next) {
  return next == 0.0 || (prev > 0.0) != (next > 0.0);
}

// Index i of the interval [grid[i], grid[i+1]] containing x.
std::size_t locate(std::span<const double> grid, double x) {
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i == 0) return 0;
  return std::min(i - 1, grid.size() - 2);
}

}  // namespace

double evaluate(const Nonlinearity& f, double y) {
  return std::visit(
      [y](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          if (law.exponent == 0.0) return law.coeff;
          if (y >= 0.0 || is_integer(law.exponent))
            return law.coeff * std::pow(y, law.exponent);
          return -law.coeff * std::pow(-y, law.exponent);
        } else {
          return law.coeff * std::exp(y);
        }
      },
      f);
}

void EmdenProblem::validate() const {
  if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("m must be >= 0");
  if (!(z_max > 0.0) || !std::isfinite(z_max)) throw ConfigError("z_max must be > 0");
  if (!std::isfinite(y0)) throw ConfigError("y0 must be finite");
  if (!std::isfinite(mu)) throw ConfigError("mu must be finite");
  if (growth_limit && !(*growth_limit > std::abs(y0)))
    throw ConfigError("growth limit must exceed |y0|");
  if (const auto* p = std::get_if<PowerLaw>(&nonlinearity)) {
    if (!std::isfinite(p->coeff) || !std::isfinite(p->exponent))
      throw ConfigError("power-law nonlinearity must be finite");
  } else if (!std::isfinite(std::get<ExponentialLaw>(nonlinearity).coeff)) {
    throw ConfigError("exponential nonlinearity must be finite");
  }
}

double EmdenProblem::second_derivative(double z, double y, double dy) const {
  if (z == 0.0) return (mu - evaluate(nonlinearity, y)) / (m + 1.0);
  return mu - evaluate(nonlinearity, y) - m * dy / z;
}

SeriesStart taylor_start(const EmdenProblem& problem, double z_start) {
  if (!(z_start > 0.0)) throw ConfigError("z_start must be > 0");
  const double forcing = evaluate(problem.nonlinearity, problem.y0) - problem.mu;
  const double denom = problem.m + 1.0;
  return {problem.y0 - forcing * z_start * z_start / (2.0 * denom),
          -forcing * z_start / denom};
}

RadialProfile::RadialProfile(std::vector<double> grid, std::vector<double> y,
                             std::vector<double> dy, std::vector<double> d2y,
                             std::optional<double> first_zero,
                             StopReason stop_reason)
    : grid_(std::move(grid)),
      y_(std::move(y)),
      dy_(std::move(dy)),
      d2y_(std::move(d2y)),
      first_zero_(first_zero),
      stop_reason_(stop_reason) {
  if (grid_.size() < 2 || y_.size() != grid_.size() ||
      dy_.size() != grid_.size() || d2y_.size() != grid_.size())
    throw ConfigError("profile arrays must share a length >= 2");
  if (grid_.front() != 0.0) throw ConfigError("profile grid must start at 0");
  for (std::size_t i = 1; i < grid_.size(); ++i)
    if (!(grid_[i] > grid_[i - 1]))
      throw ConfigError("profile grid must be strictly increasing");
}

RadialProfile::Sample RadialProfile::at(double z) const {
  if (!(z >= 0.0) || z > z_end()) {
    std::ostringstream msg;
    msg << "z = " << z << " outside profile range [0, " << z_end() << "]";
    throw ConfigError(msg.str());
  }
  const std::size_t i = locate(grid_, z);
  const auto v = detail::quintic_hermite(grid_[i], grid_[i + 1], y_[i], dy_[i],
                                         d2y_[i], y_[i + 1], dy_[i + 1],
                                         d2y_[i + 1], z);
  return {v.value, v.derivative};
}

RadialProfile RadialProfile::scaled(double factor) const {
  auto scale = [factor](std::vector<double> v) {
    for (double& x : v) x *= factor;
    return v;
  };
  return RadialProfile(grid_, scale(y_), scale(dy_), scale(d2y_), first_zero_,
                       stop_reason_);
}

RadialProfile integrate_profile(const EmdenProblem& problem,
                                const ProfileOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (!(options.max_step > 0.0)) throw ConfigError("max_step must be > 0");
  if (!(options.z_start > 0.0) || !(options.z_start < problem.z_max))
    throw ConfigError("z_start must lie in (0, z_max)");

  std::vector<double> grid{0.0};
  std::vector<double> y{problem.y0};
  std::vector<double> dy{0.0};
  std::vector<double> d2y{problem.second_derivative(0.0, problem.y0, 0.0)};

  const auto push = [&](double z, double yv, double dyv, double d2yv) {
    grid.push_back(z);
    y.push_back(yv);
    dy.push_back(dyv);
    d2y.push_back(d2yv);
  };

  const SeriesStart start = taylor_start(problem, options.z_start);
  push(options.z_start, start.y, start.dy,
       problem.second_derivative(options.z_start, start.y, start.dy));

  StopReason reason = StopReason::horizon;
  const auto rhs = [&problem](double z, const detail::State2& s) {
    return detail::State2{s[1], problem.second_derivative(z, s[0], s[1])};
  };
  const auto observer = [&](double z, const detail::State2& s,
                            const detail::State2& f) {
    const double prev = y.back();
    push(z, s[0], s[1], f[1]);
    if (problem.stop_at_first_zero && prev != 0.0 && opposite_sign(prev, s[0])) {
      reason = StopReason::first_zero;
      return false;
    }
    if (problem.growth_limit && std::abs(s[0]) > *problem.growth_limit) {
      reason = StopReason::growth_limit;
      return false;
    }
    return true;
  };

  detail::Dopri5Options opt;
  opt.tol = options.tol;
  opt.max_step = options.max_step;
  opt.initial_step = std::min(options.max_step, std::max(options.z_start, 1e-4));
  detail::dopri5_integrate(rhs, options.z_start, {start.y, start.dy},
                           problem.z_max, opt, observer);

  RadialProfile raw(std::move(grid), std::move(y), std::move(dy), std::move(d2y),
                    std::nullopt, reason);
  const auto zero = first_zero(raw, options.zero_tol);
  if (!zero) return raw;
  return RadialProfile(std::vector<double>(raw.grid().begin(), raw.grid().end()),
                       std::vector<double>(raw.y_values().begin(), raw.y_values().end()),
                       std::vector<double>(raw.dy_values().begin(), raw.dy_values().end()),
                       std::vector<double>(raw.d2y_values().begin(), raw.d2y_values().end()),
                       zero, reason);
}

RadialProfile integrate_profile(const EmdenProblem& problem, double tol,
                                double max_step) {
  ProfileOptions options;
  options.tol = tol;
  options.max_step = max_step;
  return integrate_profile(problem, options);
}

std::optional<double> first_zero(const RadialProfile& profile, double zero_tol) {
  const auto z = profile.grid();
  const auto y = profile.y_values();
  if (y[0] == 0.0) return 0.0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    if (y[i + 1] == 0.0) return z[i + 1];
    if (!opposite_sign(y[i], y[i + 1])) continue;

    double lo = z[i];
    double hi = z[i + 1];
    const bool lo_positive = y[i] > 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double v = profile.at(mid).y;
      if (std::abs(v) <= zero_tol) return mid;
      if ((v > 0.0) == lo_positive) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

double ScaleFactorState::energy(double a, double da) const {
  const double kinetic = 0.5 * da * da;
  if (dim == 2) return kinetic + lambda_ * std::log(a);
  return kinetic - lambda_ / ((dim - 2) * std::pow(a, dim - 2));
}

double ScaleFactorState::max_relative_energy_drift(double t_upto) const {
  const double e0 = energy(a0, a1);
  double scale = std::abs(e0);
  if (scale == 0.0) {
    scale = 0.5 * a1 * a1 + std::abs(energy(a0, 0.0));
    if (scale == 0.0) scale = 1.0;
  }
  double drift = 0.0;
  for (std::size_t i = 0; i < t_grid.size() && t_grid[i] <= t_upto; ++i)
    drift = std::max(drift, std::abs(energy(a_values[i], da_values[i]) - e0));
  return drift / scale;
}

ScaleFactorState::Sample ScaleFactorState::at(double t) const {
  if (t_grid.size() < 2 || !(t >= t_grid.front()) || t > t_grid.back())
    throw ConfigError("t outside the integrated scale-factor trajectory");
  const std::size_t i = locate(t_grid, t);
  const auto accel = [this](double a) { return -lambda_ / std::pow(a, dim - 1); };
  const auto v = detail::quintic_hermite(
      t_grid[i], t_grid[i + 1], a_values[i], da_values[i], accel(a_values[i]),
      a_values[i + 1], da_values[i + 1], accel(a_values[i + 1]), t);
  return {v.value, v.derivative};
}

ScaleFactorState integrate_scale_factor(double lambda_, int dim, double a0,
                                        double a1, double t_max,
                                        const ScaleFactorOptions& options) {
  if (dim < 2) throw ConfigError("scale-factor ODE needs dim >= 2");
  if (!(a0 > 0.0) || !std::isfinite(a0)) throw ConfigError("a0 must be > 0");
  if (!std::isfinite(a1) || !std::isfinite(lambda_))
    throw ConfigError("a1 and lambda must be finite");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be > 0");
  if (!(options.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (!(options.floor_fraction > 0.0 && options.floor_fraction < 1.0))
    throw ConfigError("collapse floor fraction must lie in (0, 1)");

  ScaleFactorState state;
  state.lambda_ = lambda_;
  state.dim = dim;
  state.a0 = a0;
  state.a1 = a1;
  state.t_grid.push_back(0.0);
  state.a_values.push_back(a0);
  state.da_values.push_back(a1);

  const double floor = options.floor_fraction * a0;
  const auto accel = [&](double a) { return -lambda_ / std::pow(a, dim - 1); };
  const auto rhs = [&](double, const detail::State2& s) {
    return detail::State2{s[1], accel(s[0])};
  };
  const auto observer = [&](double t, const detail::State2& s,
                            const detail::State2& f) {
    if (s[0] > floor) {
      state.t_grid.push_back(t);
      state.a_values.push_back(s[0]);
      state.da_values.push_back(s[1]);
      return true;
    }
    // Crossed the floor inside the last step: locate the crossing.
    const double t0 = state.t_grid.back();
    const double p0 = state.a_values.back();
    const double dp0 = state.da_values.back();
    double lo = t0;
    double hi = t;
    const double d2p1 = std::isfinite(f[1]) ? f[1] : accel(floor);
    detail::HermiteValue cross{s[0], s[1]};
    for (int iter = 0; iter < 200 && hi - lo > 4e-16 * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      cross = detail::quintic_hermite(t0, t, p0, dp0, accel(p0), s[0], s[1],
                                      d2p1, mid);
      if (cross.value > floor) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double t_floor = 0.5 * (lo + hi);
    state.t_grid.push_back(t_floor);
    state.a_values.push_back(floor);
    state.da_values.push_back(cross.derivative);
    state.collapsed = true;
    const double speed = std::abs(cross.derivative);
    // While lambda >= 0 the inward speed only grows, so the remaining
    // distance takes at most floor / speed.
    const double upper = (lambda_ >= 0.0 && cross.derivative < 0.0)
                             ? t_floor + floor / speed
                             : std::numeric_limits<double>::infinity();
    state.collapse_bracket = std::make_pair(t_floor, upper);
    return false;
  };

  detail::Dopri5Options opt;
  opt.tol = options.tol;
  opt.max_step = options.max_step > 0.0 ? options.max_step : t_max / 256.0;
  opt.initial_step = std::min(opt.max_step, 1e-3 * t_max);
  detail::dopri5_integrate(rhs, 0.0, {a0, a1}, t_max, opt, observer);
  return state;
}

ScaleFactorState integrate_scale_factor(double lambda_, int dim, double a0,
                                        double a1, double t_max, double tol) {
  ScaleFactorOptions options;
  options.tol = tol;
  return integrate_scale_factor(lambda_, dim, a0, a1, t_max, options);
}

}  // namespace blowup

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace blowup {

/// f(y) = coeff * y^exponent. Non-integer exponents are continued oddly for y < 0.
struct PowerLaw {
  double coeff = 1.0;
  double exponent = 1.0;
};

/// f(y) = coeff * exp(y).
struct ExponentialLaw {
  double coeff = 1.0;
};

using Nonlinearity = std::variant<PowerLaw, ExponentialLaw>;

double evaluate(const Nonlinearity& f, double y);

/// y'' + (m/z) y' + f(y) = mu,  y(0) = y0,  y'(0) = 0,  on [0, z_max].
struct EmdenProblem {
  double m = 2.0;
  Nonlinearity nonlinearity = PowerLaw{};
  double mu = 0.0;
  double y0 = 1.0;
  double z_max = 10.0;
  bool stop_at_first_zero = true;
  // Integration also stops once |y| exceeds this bound.
  std::optional<double> growth_limit;

  void validate() const;

  /// y'' from the ODE; at z = 0 uses the regular limit (mu - f(y0)) / (m + 1).
  double second_derivative(double z, double y, double dy) const;
};

struct SeriesStart {
  double y;
  double dy;
};

/// Two-term origin series y0 - (f(y0) - mu) z^2 / (2(m+1)) and its derivative.
SeriesStart taylor_start(const EmdenProblem& problem, double z_start);

enum class StopReason { horizon, first_zero, growth_limit };

/// Sampled solution (z, y, y', y'') with a quintic Hermite dense interpolant.
/// Immutable once built.
class RadialProfile {
 public:
  struct Sample {
    double y;
    double dy;
  };

  RadialProfile(std::vector<double> grid, std::vector<double> y,
                std::vector<double> dy, std::vector<double> d2y,
                std::optional<double> first_zero, StopReason stop_reason);

  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> y_values() const noexcept { return y_; }
  std::span<const double> dy_values() const noexcept { return dy_; }
  std::span<const double> d2y_values() const noexcept { return d2y_; }
  std::size_t size() const noexcept { return grid_.size(); }

  double z_end() const noexcept { return grid_.back(); }
  std::optional<double> first_zero() const noexcept { return first_zero_; }
  StopReason stop_reason() const noexcept { return stop_reason_; }

  /// Dense-output evaluation; throws ConfigError outside [0, z_end].
  Sample at(double z) const;

  /// Copy with y, y', y'' multiplied by `factor` (no longer an ODE solution).
  RadialProfile scaled(double factor) const;

 private:
  std::vector<double> grid_;
  std::vector<double> y_;
  std::vector<double> dy_;
  std::vector<double> d2y_;
  std::optional<double> first_zero_;
  StopReason stop_reason_;
};

struct ProfileOptions {
  double tol = 1e-10;
  double max_step = 0.01;
  double z_start = 1e-6;
  double zero_tol = 1e-12;
};

/// Adaptive Dormand-Prince 5(4) integration from a series start at z_start.
/// Throws IntegrationError on step-size underflow or a non-finite state.
RadialProfile integrate_profile(const EmdenProblem& problem,
                                const ProfileOptions& options);
RadialProfile integrate_profile(const EmdenProblem& problem, double tol = 1e-10,
                                double max_step = 0.01);

/// Smallest z with y(z) = 0, refined by bisection on the dense interpolant.
std::optional<double> first_zero(const RadialProfile& profile,
                                 double zero_tol = 1e-12);

/// Trajectory of a'' = -lambda / a^(N-1).
struct ScaleFactorState {
  double lambda_ = 0.0;
  int dim = 3;
  double a0 = 1.0;
  double a1 = 0.0;
  std::vector<double> t_grid;
  std::vector<double> a_values;
  std::vector<double> da_values;
  bool collapsed = false;
  // Interval known to contain the time at which a reaches 0.
  std::optional<std::pair<double, double>> collapse_bracket;

  struct Sample {
    double a;
    double da;
  };

  /// a'^2/2 - lambda/((N-2) a^(N-2)); for N = 2 the potential is lambda log a.
  double energy(double a, double da) const;
  double max_relative_energy_drift(
      double t_upto = std::numeric_limits<double>::infinity()) const;
  Sample at(double t) const;
};

struct ScaleFactorOptions {
  double tol = 1e-10;
  double floor_fraction = 1e-6;  // collapse declared at a = floor_fraction * a0
  double max_step = 0.0;         // 0 selects t_max / 256
};

ScaleFactorState integrate_scale_factor(double lambda_, int dim, double a0,
                                        double a1, double t_max,
                                        const ScaleFactorOptions& options);
ScaleFactorState integrate_scale_factor(double lambda_, int dim, double a0,
                                        double a1, double t_max,
                                        double tol = 1e-10);

}  // namespace blowup

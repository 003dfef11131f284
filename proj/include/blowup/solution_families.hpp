#pragma once

#include <optional>
#include <string_view>

#include "blowup/emden_ode.hpp"
#include "blowup/model_core.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// 4-d pressureless family with viscosity kappa rho^(5/4):
//   rho(t, r) = y(r / (T - C t))^4 / (T - C t)^4,   u(t, r) = -C r / (T - C t),
//   y'' + (3/z) y' + s alpha(4) / (5 C kappa) y^4 = 0,  y(0) = alpha,  y'(0) = 0,
// with s = +1 for attractive gravity and s = -1 for the repulsive variant.
// ---------------------------------------------------------------------------

enum class Family { blowup4d, global4d, repulsive4d };

std::string_view to_string(Family family);

/// Signed y^4 coefficient s * alpha(4) / (5 C kappa) of the profile ODE.
double profile_coefficient(const ModelParams& params);

struct BlowupBuildOptions {
  double tol = 1e-10;
  double max_step = 0.01;
  // Profile horizon; by default 8 / sqrt(|coefficient| alpha^3), the natural
  // length scale of the profile equation.
  std::optional<double> z_max;
  // Growing profiles (negative coefficient) are cut once y exceeds this multiple of alpha.
  double growth_cap = 4.0;
  // Evaluation refused when |T - C t| < time_guard * T.
  double time_guard = 1e-8;
};

/// The profile ODE for `params`, as integrated by build_blowup_solution.
EmdenProblem blowup_profile_problem(const ModelParams& params,
                                    const BlowupBuildOptions& options = {});

class SelfSimilarSolution {
 public:
  struct DensityPartials {
    double rho_t;
    double rho_r;
  };
  struct VelocityPartials {
    double u_t;
    double u_r;
    double u_rr;
  };

  SelfSimilarSolution(ModelParams params, RadialProfile profile, Family family,
                      double time_guard = 1e-8);

  const ModelParams& params() const noexcept { return params_; }
  const RadialProfile& profile() const noexcept { return profile_; }
  Family family() const noexcept { return family_; }
  double time_guard() const noexcept { return time_guard_; }

  /// T / C for C > 0; empty for the global (C < 0) solutions.
  std::optional<double> blowup_time() const;

  /// Radius Z of the profile in the similarity variable: the first zero if
  /// there is one, otherwise the end of the integrated range.
  double support_radius() const;

  /// T - C t; throws BlowupGuardError within the guard band of T/C.
  double tau(double t) const;

  double density(double t, double r) const;
  double velocity(double t, double r) const;
  DensityPartials density_partials(double t, double r) const;
  VelocityPartials velocity_partials(double t, double r) const;

 private:
  // Profile sample at z, or nullopt beyond the first zero (zero density).
  std::optional<RadialProfile::Sample> profile_at(double z) const;

  ModelParams params_;
  RadialProfile profile_;
  Family family_;
  double time_guard_;
};

/// Builds the 4-d solution; requires dim = 4 and theta = 5/4.
SelfSimilarSolution build_blowup_solution(const ModelParams& params,
                                          const BlowupBuildOptions& options);
SelfSimilarSolution build_blowup_solution(const ModelParams& params,
                                          double tol = 1e-10);

// ---------------------------------------------------------------------------
// Lane-Emden closed forms and the gamma = 6/5 stationary star.
// ---------------------------------------------------------------------------

/// 1 - z^2/6, sin z / z, 1/sqrt(1 + z^2/3) for n = 0, 1, 5.
double lane_emden_analytic(int n, double z);

/// y'' + (2/z) y' + y^n = 0, y(0) = 1 on [0, z_max].
EmdenProblem lane_emden_problem(double n, double z_max);

struct StationaryStar {
  double big_k = 1.0;
  double big_a = 1.0;
  int dim = 3;

  void validate() const;
  /// (3 K A^2 / (2 pi))^(5/4)
  double central_density() const;
};

/// central_density * (1 + A^2 r^2)^(-5/2)
double stationary_density(const StationaryStar& star, double r);

// ---------------------------------------------------------------------------
// Pressured collapse backgrounds, u = (a'/a) r with a'' = -lambda / a^(N-1):
//   polytropic, N >= 3, gamma = (2N-2)/N:
//     rho = y(r/a)^(N/(N-2)) / a^N for r < a Z_mu, 0 beyond,
//     y'' + (N-1)/z y' + alpha(N)/((2N-2)K) y^(N/(N-2)) = mu,
//     mu = N(N-2) lambda / ((2N-2) K);
//   isothermal, N = 2, gamma = 1:
//     rho = exp(y(r/a)) / a^2,  y'' + y'/z + (2 pi / K) e^y = mu,  mu = 2 lambda / K.
// ---------------------------------------------------------------------------

struct PolytropicCollapse {
  int dim = 3;
  double big_k = 1.0;
  double lambda_ = 0.0;
  double a0 = 1.0;
  double a1 = 0.0;
  double alpha0 = 1.0;

  void validate() const;
  double gamma() const { return (2.0 * dim - 2.0) / dim; }
  double density_exponent() const { return static_cast<double>(dim) / (dim - 2); }
  double mu() const;
  EmdenProblem profile_problem(double z_max) const;
};

struct IsothermalCollapse {
  double big_k = 1.0;
  double lambda_ = 0.0;
  double a0 = 1.0;
  double a1 = 0.0;
  double alpha0 = 0.0;

  void validate() const;
  double mu() const { return 2.0 * lambda_ / big_k; }
  EmdenProblem profile_problem(double z_max) const;
};

/// rho(t, r) and u(t, r) of a collapse background, assembled from its
/// profile and scale-factor trajectory.
class CollapsingBackground {
 public:
  enum class Kind { polytropic, isothermal };

  CollapsingBackground(Kind kind, int dim, double density_exponent,
                       RadialProfile profile, ScaleFactorState scale);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  const RadialProfile& profile() const noexcept { return profile_; }
  const ScaleFactorState& scale_factor() const noexcept { return scale_; }

  /// Z_mu when the profile has a first zero.
  std::optional<double> first_zero() const noexcept { return profile_.first_zero(); }
  /// True when the profile reached its horizon without hitting the growth limit.
  bool bounded() const noexcept { return profile_.stop_reason() != StopReason::growth_limit; }

  double density(double t, double r) const;
  double velocity(double t, double r) const;

 private:
  Kind kind_;
  int dim_;
  double density_exponent_;
  RadialProfile profile_;
  ScaleFactorState scale_;
};

CollapsingBackground build_polytropic_collapse(const PolytropicCollapse& family,
                                               double z_max, double t_max,
                                               double tol = 1e-10);
CollapsingBackground build_isothermal_collapse(const IsothermalCollapse& family,
                                               double z_max, double t_max,
                                               double tol = 1e-10);

}  // namespace blowup

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blowup/emden_ode.hpp"
#include "blowup/model_core.hpp"
#include "blowup/solution_families.hpp"

namespace blowup {

/// Residual samples of one identity check.
struct ResidualReport {
  std::string name;
  std::string grid_spec;
  std::vector<double> values;  // signed residuals
  std::vector<double> scales;  // reference magnitude per sample
  double max_abs = 0.0;
  double max_rel = 0.0;
  int quad_points = 0;
  std::optional<double> convergence_order;

  /// Fills max_abs and max_rel from values/scales. A zero residual against a
  /// zero scale counts as relative error 0.
  static ResidualReport from_samples(std::string name, std::string grid_spec,
                                     std::vector<double> values,
                                     std::vector<double> scales,
                                     int quad_points = 0);

  /// values[i] / scales[i] with the same zero convention.
  std::vector<double> relative() const;
};

struct SamplePoint {
  double t;
  double r;
};

std::vector<SamplePoint> tensor_grid(std::span<const double> t_samples,
                                     std::span<const double> r_samples);

/// Times with T - C t geometric from T down to min_fraction * T (C > 0).
std::vector<double> blowup_time_sequence(const SelfSimilarSolution& sol, int count,
                                         double min_fraction = 1e-6);

/// n_times times (geometric toward T/C when C > 0, doubling T - C t when
/// C < 0) times n_radii radii r = z tau with z = Z j / n_radii, j = 1..n_radii.
std::vector<SamplePoint> default_sample_grid(const SelfSimilarSolution& sol,
                                             int n_times = 8, int n_radii = 16);

/// rho_t + u rho_r + rho u_r + (3/r) rho u from exact partials.
ResidualReport continuity_residual(const SelfSimilarSolution& sol,
                                   std::span<const SamplePoint> samples);
ResidualReport continuity_residual(const SelfSimilarSolution& sol,
                                   std::span<const double> t_samples,
                                   std::span<const double> r_samples);

/// Q(z) = v C kappa y'(z) + s alpha(4) z^-3 int_0^z y^4 s^3 ds with v = 5 for
/// the true functional (other values are negative controls) and s the
/// gravity sign.
double q_function(const RadialProfile& profile, const ModelParams& params, double z,
                  int quad_points = 2048, double viscous_factor = 5.0);

/// |Q(z)| over z_samples against the scale 5 C kappa max|y'|.
ResidualReport q_identity_check(const RadialProfile& profile,
                                const ModelParams& params,
                                std::span<const double> z_samples,
                                int quad_points = 2048,
                                double viscous_factor = 5.0);

/// Q'(z) + (3/z) Q(z) with Q' by central differences, h = max(1e-5, 1e-4 z).
ResidualReport q_ode_check(const RadialProfile& profile, const ModelParams& params,
                           std::span<const double> z_samples,
                           int quad_points = 2048, double viscous_factor = 5.0);

/// Individual terms of the momentum balance at one point. Residual is
/// inertia_t + inertia_adv + gravity - viscous_gradient - viscous_laplacian.
struct MomentumTerms {
  double inertia_t;          // rho u_t
  double inertia_adv;        // rho u u_r
  double gravity;            // s rho Phi_r
  double viscous_gradient;   // [kappa rho^(5/4)]_r u_r
  double viscous_laplacian;  // kappa rho^(5/4) (u_rr + 3 u_r / r - 3 u / r^2)
  double laplacian_scale;    // largest of the three Laplacian pieces

  double residual() const;
  double scale() const;
};

MomentumTerms momentum_terms(const SelfSimilarSolution& sol, double t, double r,
                             int quad_points);

struct MomentumReport {
  ResidualReport residual;       // direct term-by-term evaluation
  ResidualReport factorization;  // direct minus rho tau^-3 Q(z), relative to term scale
};

MomentumReport momentum_residual(const SelfSimilarSolution& sol,
                                 std::span<const SamplePoint> samples,
                                 int quad_points = kDefaultQuadPoints,
                                 double viscous_factor = 5.0);
MomentumReport momentum_residual(const SelfSimilarSolution& sol,
                                 std::span<const double> t_samples,
                                 std::span<const double> r_samples,
                                 int quad_points = kDefaultQuadPoints);

/// rho(t, 0) (T - C t)^4 - alpha^4 against the scale alpha^4.
ResidualReport blowup_rate_check(const SelfSimilarSolution& sol,
                                 std::span<const double> t_sequence);

/// d/dr [K rho^gamma] + rho Phi_r (dim 3) for a static radial density.
ResidualReport hydrostatic_residual(const std::function<double(double)>& density,
                                    const std::function<double(double)>& density_r,
                                    double big_k, double gamma,
                                    std::span<const double> r_samples,
                                    int quad_points);

/// hydrostatic_residual for the gamma = 6/5 stationary star.
ResidualReport hydrostatic_check(const StationaryStar& star,
                                 std::span<const double> r_samples,
                                 int quad_points = 2048);

/// Analytic d rho / dr of the stationary star.
double stationary_density_derivative(const StationaryStar& star, double r);

/// Reports of one check at successive doubled quadrature resolutions.
struct ConvergenceStudy {
  std::vector<int> levels;
  std::vector<ResidualReport> reports;
  std::vector<double> orders;  // log2 of successive difference ratios
  std::optional<double> min_order;
};

/// Runs `check` at each level. Orders come from d_k = max|rel_k - rel_{k+1}|
/// as log2(d_k / d_{k+1}), which is insensitive to resolution-independent
/// error floors. The finest report carries the smallest order.
ConvergenceStudy convergence_study(const std::function<ResidualReport(int)>& check,
                                   std::span<const int> levels);

}  // namespace blowup

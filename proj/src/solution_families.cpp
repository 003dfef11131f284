#include "blowup/solution_families.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

constexpr double kProfileHorizon = 8.0;

double pow4(double x) {
  const double x2 = x * x;
  return x2 * x2;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::blowup4d: return "blowup4d";
    case Family::global4d: return "global4d";
    case Family::repulsive4d: return "repulsive4d";
  }
  return "unknown";
}

double profile_coefficient(const ModelParams& params) {
  return params.gravity_sign() * alpha_constant(4) /
         (5.0 * params.big_c * params.kappa);
}

EmdenProblem blowup_profile_problem(const ModelParams& params,
                                    const BlowupBuildOptions& options) {
  const double coeff = profile_coefficient(params);
  EmdenProblem problem;
  problem.m = 3.0;
  problem.nonlinearity = PowerLaw{coeff, 4.0};
  problem.mu = 0.0;
  problem.y0 = params.alpha0;
  const double length =
      1.0 / std::sqrt(std::abs(coeff) * params.alpha0 * params.alpha0 * params.alpha0);
  problem.z_max = options.z_max.value_or(kProfileHorizon * length);
  // The density y^4 is only meaningful while y >= 0.
  problem.stop_at_first_zero = true;
  if (coeff < 0.0) problem.growth_limit = options.growth_cap * params.alpha0;
  return problem;
}

SelfSimilarSolution::SelfSimilarSolution(ModelParams params,
                                         RadialProfile profile, Family family,
                                         double time_guard)
    : params_(params),
      profile_(std::move(profile)),
      family_(family),
      time_guard_(time_guard) {}

std::optional<double> SelfSimilarSolution::blowup_time() const {
  if (params_.big_c > 0.0) return params_.big_t / params_.big_c;
  return std::nullopt;
}

double SelfSimilarSolution::support_radius() const {
  return profile_.first_zero().value_or(profile_.z_end());
}

double SelfSimilarSolution::tau(double t) const {
  const double value = params_.big_t - params_.big_c * t;
  if (!(value >= time_guard_ * params_.big_t)) {
    std::ostringstream msg;
    msg << "t = " << t << " is within the blowup guard of T/C = "
        << params_.big_t / params_.big_c << " (T - C t = " << value << ")";
    throw BlowupGuardError(msg.str());
  }
  return value;
}

std::optional<RadialProfile::Sample> SelfSimilarSolution::profile_at(double z) const {
  if (const auto zero = profile_.first_zero(); zero && z >= *zero) return std::nullopt;
  if (z > profile_.z_end()) {
    std::ostringstream msg;
    msg << "similarity variable z = " << z << " beyond the integrated profile (z_end = "
        << profile_.z_end() << ")";
    throw ConfigError(msg.str());
  }
  return profile_.at(z);
}

double SelfSimilarSolution::density(double t, double r) const {
  if (!(r >= 0.0)) throw ConfigError("radius must be >= 0");
  const double tt = tau(t);
  const auto sample = profile_at(r / tt);
  if (!sample) return 0.0;
  return pow4(sample->y) / pow4(tt);
}

double SelfSimilarSolution::velocity(double t, double r) const {
  return -params_.big_c * r / tau(t);
}

SelfSimilarSolution::DensityPartials SelfSimilarSolution::density_partials(
    double t, double r) const {
  if (!(r >= 0.0)) throw ConfigError("radius must be >= 0");
  const double tt = tau(t);
  const double z = r / tt;
  const auto sample = profile_at(z);
  if (!sample) return {0.0, 0.0};
  const double y = sample->y;
  const double y3 = y * y * y;
  const double tau5 = pow4(tt) * tt;
  const double c = params_.big_c;
  // rho = y(z)^4 tau^-4 with z = r / tau and tau' = -C.
  const double rho_t = (4.0 * c * y3 * y + 4.0 * c * y3 * sample->dy * z) / tau5;
  const double rho_r = 4.0 * y3 * sample->dy / tau5;
  return {rho_t, rho_r};
}

SelfSimilarSolution::VelocityPartials SelfSimilarSolution::velocity_partials(
    double t, double r) const {
  const double tt = tau(t);
  const double c = params_.big_c;
  return {-c * c * r / (tt * tt), -c / tt, 0.0};
}

SelfSimilarSolution build_blowup_solution(const ModelParams& params,
                                          const BlowupBuildOptions& options) {
  params.validate();
  if (params.dim != 4) throw ConfigError("the blowup family is 4-dimensional (dim = 4)");
  if (params.theta != 1.25) throw ConfigError("the blowup family needs theta = 5/4");
  if (!(options.time_guard > 0.0)) throw ConfigError("time guard must be > 0");
  if (!(options.growth_cap > 1.0)) throw ConfigError("growth cap must exceed 1");

  const EmdenProblem problem = blowup_profile_problem(params, options);
  ProfileOptions profile_options;
  profile_options.tol = options.tol;
  profile_options.max_step = std::min(options.max_step, problem.z_max / 256.0);
  RadialProfile profile = integrate_profile(problem, profile_options);

  Family family = Family::blowup4d;
  if (params.force_sign == ForceSign::repulsive) {
    family = Family::repulsive4d;
  } else if (params.big_c < 0.0) {
    family = Family::global4d;
  }
  return SelfSimilarSolution(params, std::move(profile), family, options.time_guard);
}

SelfSimilarSolution build_blowup_solution(const ModelParams& params, double tol) {
  BlowupBuildOptions options;
  options.tol = tol;
  return build_blowup_solution(params, options);
}

double lane_emden_analytic(int n, double z) {
  if (!(z >= 0.0)) throw ConfigError("z must be >= 0");
  switch (n) {
    case 0:
      return 1.0 - z * z / 6.0;
    case 1:
      // sin z / z with its series near the removable singularity.
      if (z < 1e-4) return 1.0 - z * z / 6.0 + z * z * z * z / 120.0;
      return std::sin(z) / z;
    case 5:
      return 1.0 / std::sqrt(1.0 + z * z / 3.0);
    default: {
      std::ostringstream msg;
      msg << "no closed form for Lane-Emden index n = " << n
          << "; only n in {0, 1, 5} are analytic";
      throw ConfigError(msg.str());
    }
  }
}

EmdenProblem lane_emden_problem(double n, double z_max) {
  if (!(n >= 0.0)) throw ConfigError("polytropic index must be >= 0");
  EmdenProblem problem;
  problem.m = 2.0;
  problem.nonlinearity = PowerLaw{1.0, n};
  problem.mu = 0.0;
  problem.y0 = 1.0;
  problem.z_max = z_max;
  problem.stop_at_first_zero = true;
  return problem;
}

void StationaryStar::validate() const {
  if (dim != 3) throw ConfigError("the stationary gamma = 6/5 star is 3-dimensional");
  if (!(big_k > 0.0) || !std::isfinite(big_k)) throw ConfigError("K must be > 0");
  if (!std::isfinite(big_a)) throw ConfigError("A must be finite");
}

double StationaryStar::central_density() const {
  return std::pow(3.0 * big_k * big_a * big_a / (2.0 * std::numbers::pi), 1.25);
}

double stationary_density(const StationaryStar& star, double r) {
  star.validate();
  if (!(r >= 0.0)) throw ConfigError("radius must be >= 0");
  const double q = 1.0 + star.big_a * star.big_a * r * r;
  return star.central_density() * std::pow(q, -2.5);
}

void PolytropicCollapse::validate() const {
  if (dim < 3) throw ConfigError("the polytropic collapse family needs dim >= 3");
  if (!(big_k > 0.0)) throw ConfigError("K must be > 0");
  if (!(alpha0 > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(a0 > 0.0)) throw ConfigError("a0 must be > 0");
  if (!std::isfinite(lambda_) || !std::isfinite(a1))
    throw ConfigError("lambda and a1 must be finite");
}

double PolytropicCollapse::mu() const {
  return dim * (dim - 2.0) * lambda_ / ((2.0 * dim - 2.0) * big_k);
}

EmdenProblem PolytropicCollapse::profile_problem(double z_max) const {
  validate();
  EmdenProblem problem;
  problem.m = dim - 1.0;
  problem.nonlinearity =
      PowerLaw{alpha_constant(dim) / ((2.0 * dim - 2.0) * big_k), density_exponent()};
  problem.mu = mu();
  problem.y0 = alpha0;
  problem.z_max = z_max;
  problem.stop_at_first_zero = true;
  return problem;
}

void IsothermalCollapse::validate() const {
  if (!(big_k > 0.0)) throw ConfigError("K must be > 0");
  if (!(a0 > 0.0)) throw ConfigError("a0 must be > 0");
  if (!std::isfinite(lambda_) || !std::isfinite(a1) || !std::isfinite(alpha0))
    throw ConfigError("lambda, a1 and alpha must be finite");
}

EmdenProblem IsothermalCollapse::profile_problem(double z_max) const {
  validate();
  EmdenProblem problem;
  problem.m = 1.0;
  problem.nonlinearity = ExponentialLaw{2.0 * std::numbers::pi / big_k};
  problem.mu = mu();
  problem.y0 = alpha0;
  problem.z_max = z_max;
  problem.stop_at_first_zero = false;
  // exp(y) overflows past ~709.
  problem.growth_limit = std::max(700.0, 2.0 * std::abs(alpha0));
  return problem;
}

CollapsingBackground::CollapsingBackground(Kind kind, int dim,
                                           double density_exponent,
                                           RadialProfile profile,
                                           ScaleFactorState scale)
    : kind_(kind),
      dim_(dim),
      density_exponent_(density_exponent),
      profile_(std::move(profile)),
      scale_(std::move(scale)) {}

double CollapsingBackground::density(double t, double r) const {
  if (!(r >= 0.0)) throw ConfigError("radius must be >= 0");
  const double a = scale_.at(t).a;
  const double z = r / a;
  if (kind_ == Kind::polytropic) {
    if (const auto zero = profile_.first_zero(); zero && z >= *zero) return 0.0;
  }
  if (z > profile_.z_end()) throw ConfigError("radius beyond the integrated profile");
  const double y = profile_.at(z).y;
  if (kind_ == Kind::isothermal) return std::exp(y) / (a * a);
  return std::pow(std::max(y, 0.0), density_exponent_) / std::pow(a, dim_);
}

double CollapsingBackground::velocity(double t, double r) const {
  const auto s = scale_.at(t);
  return s.da / s.a * r;
}

CollapsingBackground build_polytropic_collapse(const PolytropicCollapse& family,
                                               double z_max, double t_max,
                                               double tol) {
  RadialProfile profile = integrate_profile(family.profile_problem(z_max), tol);
  ScaleFactorState scale = integrate_scale_factor(family.lambda_, family.dim,
                                                  family.a0, family.a1, t_max, tol);
  return CollapsingBackground(CollapsingBackground::Kind::polytropic, family.dim,
                              family.density_exponent(), std::move(profile),
                              std::move(scale));
}

CollapsingBackground build_isothermal_collapse(const IsothermalCollapse& family,
                                               double z_max, double t_max,
                                               double tol) {
  RadialProfile profile = integrate_profile(family.profile_problem(z_max), tol);
  ScaleFactorState scale =
      integrate_scale_factor(family.lambda_, 2, family.a0, family.a1, t_max, tol);
  return CollapsingBackground(CollapsingBackground::Kind::isothermal, 2, 1.0,
                              std::move(profile), std::move(scale));
}

}  // namespace blowup

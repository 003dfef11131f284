#include "blowup/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

double max_magnitude(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

double rel(double value, double scale) {
  if (value == 0.0) return 0.0;
  return std::abs(value) / scale;
}

// int_0^z y(s)^4 s^3 ds on the dense profile.
double profile_moment(const RadialProfile& profile, double z, int quad_points) {
  return simpson(
      [&profile](double s) {
        const double y = profile.at(s).y;
        const double y2 = y * y;
        return y2 * y2 * s * s * s;
      },
      0.0, z, quad_points);
}

void check_q_range(const RadialProfile& profile, double z) {
  if (!(z > 0.0)) throw ConfigError("Q is evaluated at z > 0");
  if (z > profile.z_end()) {
    std::ostringstream msg;
    msg << "z = " << z << " beyond the profile range (z_end = " << profile.z_end() << ")";
    throw ConfigError(msg.str());
  }
}

std::string describe_points(std::span<const SamplePoint> samples) {
  std::ostringstream out;
  out << samples.size() << " (t, r) points";
  return out.str();
}

}  // namespace

ResidualReport ResidualReport::from_samples(std::string name, std::string grid_spec,
                                            std::vector<double> values,
                                            std::vector<double> scales,
                                            int quad_points) {
  if (values.size() != scales.size())
    throw ConfigError("residual values and scales differ in length");
  ResidualReport report;
  report.name = std::move(name);
  report.grid_spec = std::move(grid_spec);
  report.quad_points = quad_points;
  for (std::size_t i = 0; i < values.size(); ++i) {
    report.max_abs = std::max(report.max_abs, std::abs(values[i]));
    report.max_rel = std::max(report.max_rel, rel(values[i], scales[i]));
  }
  report.values = std::move(values);
  report.scales = std::move(scales);
  return report;
}

std::vector<double> ResidualReport::relative() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = values[i] == 0.0 ? 0.0 : values[i] / scales[i];
  return out;
}

std::vector<SamplePoint> tensor_grid(std::span<const double> t_samples,
                                     std::span<const double> r_samples) {
  std::vector<SamplePoint> points;
  points.reserve(t_samples.size() * r_samples.size());
  for (double t : t_samples)
    for (double r : r_samples) points.push_back({t, r});
  return points;
}

std::vector<double> blowup_time_sequence(const SelfSimilarSolution& sol, int count,
                                         double min_fraction) {
  const auto& p = sol.params();
  if (!(p.big_c > 0.0)) throw ConfigError("blowup times need C > 0");
  if (count < 2) throw ConfigError("need at least two times");
  if (!(min_fraction > 0.0 && min_fraction < 1.0))
    throw ConfigError("min_fraction must lie in (0, 1)");
  std::vector<double> times;
  for (int k = 0; k < count; ++k) {
    const double tau = p.big_t * std::pow(min_fraction, static_cast<double>(k) / (count - 1));
    times.push_back((p.big_t - tau) / p.big_c);
  }
  return times;
}

std::vector<SamplePoint> default_sample_grid(const SelfSimilarSolution& sol,
                                             int n_times, int n_radii) {
  if (n_times < 2 || n_radii < 1) throw ConfigError("sample grid too small");
  const auto& p = sol.params();
  std::vector<double> times;
  if (p.big_c > 0.0) {
    times = blowup_time_sequence(sol, n_times, 1e-6);
  } else {
    for (int k = 0; k < n_times; ++k)
      times.push_back(p.big_t * (std::ldexp(1.0, k) - 1.0) / -p.big_c);
  }
  const double z_support = sol.support_radius();
  std::vector<SamplePoint> points;
  for (double t : times) {
    const double tau = sol.tau(t);
    for (int j = 1; j <= n_radii; ++j)
      points.push_back({t, z_support * j / n_radii * tau});
  }
  return points;
}

ResidualReport continuity_residual(const SelfSimilarSolution& sol,
                                   std::span<const SamplePoint> samples) {
  std::vector<double> values;
  std::vector<double> scales;
  for (const auto& [t, r] : samples) {
    if (!(r > 0.0)) throw ConfigError("continuity residual needs r > 0");
    const double rho = sol.density(t, r);
    const auto [rho_t, rho_r] = sol.density_partials(t, r);
    const double u = sol.velocity(t, r);
    const double u_r = sol.velocity_partials(t, r).u_r;
    const double advection = u * rho_r;
    const double compression = rho * u_r;
    const double geometric = 3.0 / r * rho * u;
    values.push_back(rho_t + advection + compression + geometric);
    scales.push_back(max_magnitude({rho_t, advection, compression, geometric}));
  }
  return ResidualReport::from_samples("continuity", describe_points(samples),
                                      std::move(values), std::move(scales));
}

ResidualReport continuity_residual(const SelfSimilarSolution& sol,
                                   std::span<const double> t_samples,
                                   std::span<const double> r_samples) {
  const auto points = tensor_grid(t_samples, r_samples);
  return continuity_residual(sol, points);
}

double q_function(const RadialProfile& profile, const ModelParams& params, double z,
                  int quad_points, double viscous_factor) {
  check_q_range(profile, z);
  const double dy = profile.at(z).dy;
  const double moment = profile_moment(profile, z, quad_points);
  return viscous_factor * params.big_c * params.kappa * dy +
         params.gravity_sign() * alpha_constant(4) * moment / (z * z * z);
}

ResidualReport q_identity_check(const RadialProfile& profile,
                                const ModelParams& params,
                                std::span<const double> z_samples, int quad_points,
                                double viscous_factor) {
  double max_slope = 0.0;
  for (double dy : profile.dy_values()) max_slope = std::max(max_slope, std::abs(dy));
  const double scale = 5.0 * std::abs(params.big_c) * params.kappa * max_slope;

  std::vector<double> values;
  for (double z : z_samples)
    values.push_back(q_function(profile, params, z, quad_points, viscous_factor));
  std::vector<double> scales(values.size(), scale);
  std::ostringstream spec;
  spec << z_samples.size() << " z samples";
  return ResidualReport::from_samples("q_identity", spec.str(), std::move(values),
                                      std::move(scales), quad_points);
}

ResidualReport q_ode_check(const RadialProfile& profile, const ModelParams& params,
                           std::span<const double> z_samples, int quad_points,
                           double viscous_factor) {
  const double alpha4 = alpha_constant(4);
  const double sign = params.gravity_sign();
  const double visc = viscous_factor * params.big_c * params.kappa;
  const auto q = [&](double z) {
    return q_function(profile, params, z, quad_points, viscous_factor);
  };

  std::vector<double> values;
  std::vector<double> scales;
  for (double z : z_samples) {
    check_q_range(profile, z);
    const double h = std::max(1e-5, 1e-4 * z);
    if (!(z - 2.0 * h > 0.0)) throw ConfigError("z sample too close to the origin");
    const double qz = q(z);
    double dq;
    if (z + h <= profile.z_end()) {
      dq = (q(z + h) - q(z - h)) / (2.0 * h);
    } else {
      dq = (3.0 * qz - 4.0 * q(z - h) + q(z - 2.0 * h)) / (2.0 * h);
    }
    values.push_back(dq + 3.0 / z * qz);

    // Scale: the separate pieces of Q' on the profile.
    const auto s = profile.at(z);
    const double d2y = -3.0 / z * s.dy - sign * alpha4 / (5.0 * params.big_c * params.kappa) *
                                             s.y * s.y * s.y * s.y;
    const double moment = profile_moment(profile, z, quad_points);
    scales.push_back(max_magnitude({visc * d2y, alpha4 * s.y * s.y * s.y * s.y,
                                    3.0 * alpha4 * moment / (z * z * z * z)}));
  }
  std::ostringstream spec;
  spec << z_samples.size() << " z samples";
  return ResidualReport::from_samples("q_ode", spec.str(), std::move(values),
                                      std::move(scales), quad_points);
}

double MomentumTerms::residual() const {
  return inertia_t + inertia_adv + gravity - viscous_gradient - viscous_laplacian;
}

double MomentumTerms::scale() const {
  return max_magnitude({inertia_t, inertia_adv, gravity, viscous_gradient, laplacian_scale});
}

MomentumTerms momentum_terms(const SelfSimilarSolution& sol, double t, double r,
                             int quad_points) {
  if (!(r > 0.0)) throw ConfigError("momentum residual needs r > 0");
  const auto& p = sol.params();
  const double rho = sol.density(t, r);
  const auto [rho_t, rho_r] = sol.density_partials(t, r);
  const double u = sol.velocity(t, r);
  const auto [u_t, u_r, u_rr] = sol.velocity_partials(t, r);

  const DensityProfileFn field = [&sol](double tt, double s) { return sol.density(tt, s); };
  const double phi_r = potential_gradient(field, 4, t, r, quad_points);

  const double rho_quarter = std::pow(rho, 0.25);
  const double visc = p.kappa * rho_quarter * rho_quarter * rho_quarter * rho_quarter * rho_quarter;
  const double visc_r = 1.25 * p.kappa * rho_quarter * rho_r;
  const double lap1 = u_rr;
  const double lap2 = 3.0 / r * u_r;
  const double lap3 = 3.0 / (r * r) * u;

  MomentumTerms terms;
  terms.inertia_t = rho * u_t;
  terms.inertia_adv = rho * u * u_r;
  terms.gravity = p.gravity_sign() * rho * phi_r;
  terms.viscous_gradient = visc_r * u_r;
  terms.viscous_laplacian = visc * (lap1 + lap2 - lap3);
  terms.laplacian_scale = visc * max_magnitude({lap1, lap2, lap3});
  return terms;
}

MomentumReport momentum_residual(const SelfSimilarSolution& sol,
                                 std::span<const SamplePoint> samples,
                                 int quad_points, double viscous_factor) {
  std::vector<double> values;
  std::vector<double> scales;
  std::vector<double> mismatch;
  for (const auto& [t, r] : samples) {
    const MomentumTerms terms = momentum_terms(sol, t, r, quad_points);
    const double direct = terms.residual();
    values.push_back(direct);
    scales.push_back(terms.scale());

    const double tau = sol.tau(t);
    const double z = r / tau;
    double factored = 0.0;
    const double rho = sol.density(t, r);
    if (rho != 0.0)
      factored = rho / (tau * tau * tau) *
                 q_function(sol.profile(), sol.params(), z, quad_points, viscous_factor);
    mismatch.push_back(direct - factored);
  }
  const std::string spec = describe_points(samples);
  MomentumReport report{
      ResidualReport::from_samples("momentum", spec, std::move(values), scales, quad_points),
      ResidualReport::from_samples("momentum_factorization", spec, std::move(mismatch),
                                   scales, quad_points)};
  return report;
}

MomentumReport momentum_residual(const SelfSimilarSolution& sol,
                                 std::span<const double> t_samples,
                                 std::span<const double> r_samples, int quad_points) {
  const auto points = tensor_grid(t_samples, r_samples);
  return momentum_residual(sol, points, quad_points);
}

ResidualReport blowup_rate_check(const SelfSimilarSolution& sol,
                                 std::span<const double> t_sequence) {
  const double a = sol.params().alpha0;
  const double expected = a * a * a * a;
  std::vector<double> values;
  for (double t : t_sequence) {
    const double tau = sol.tau(t);
    const double tau2 = tau * tau;
    values.push_back(sol.density(t, 0.0) * (tau2 * tau2) - expected);
  }
  std::vector<double> scales(values.size(), expected);
  std::ostringstream spec;
  spec << t_sequence.size() << " times at r = 0";
  return ResidualReport::from_samples("blowup_rate", spec.str(), std::move(values),
                                      std::move(scales));
}

ResidualReport hydrostatic_residual(const std::function<double(double)>& density,
                                    const std::function<double(double)>& density_r,
                                    double big_k, double gamma,
                                    std::span<const double> r_samples,
                                    int quad_points) {
  const DensityProfileFn field = [&density](double, double s) { return density(s); };
  std::vector<double> values;
  std::vector<double> scales;
  for (double r : r_samples) {
    if (!(r > 0.0)) throw ConfigError("hydrostatic residual needs r > 0");
    const double rho = density(r);
    const double pressure_r = big_k * gamma * std::pow(rho, gamma - 1.0) * density_r(r);
    const double gravity = rho * potential_gradient(field, 3, 0.0, r, quad_points);
    values.push_back(pressure_r + gravity);
    scales.push_back(max_magnitude({pressure_r, gravity}));
  }
  std::ostringstream spec;
  spec << r_samples.size() << " radii";
  return ResidualReport::from_samples("hydrostatic", spec.str(), std::move(values),
                                      std::move(scales), quad_points);
}

double stationary_density_derivative(const StationaryStar& star, double r) {
  star.validate();
  const double a2 = star.big_a * star.big_a;
  const double q = 1.0 + a2 * r * r;
  return star.central_density() * -5.0 * a2 * r * std::pow(q, -3.5);
}

ResidualReport hydrostatic_check(const StationaryStar& star,
                                 std::span<const double> r_samples, int quad_points) {
  star.validate();
  return hydrostatic_residual(
      [&star](double r) { return stationary_density(star, r); },
      [&star](double r) { return stationary_density_derivative(star, r); },
      star.big_k, 1.2, r_samples, quad_points);
}

ConvergenceStudy convergence_study(const std::function<ResidualReport(int)>& check,
                                   std::span<const int> levels) {
  ConvergenceStudy study;
  study.levels.assign(levels.begin(), levels.end());
  for (int level : levels) study.reports.push_back(check(level));

  std::vector<double> diffs;
  for (std::size_t k = 0; k + 1 < study.reports.size(); ++k) {
    const auto a = study.reports[k].relative();
    const auto b = study.reports[k + 1].relative();
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    diffs.push_back(d);
  }
  for (std::size_t k = 0; k + 1 < diffs.size(); ++k) {
    const double ratio = diffs[k] / diffs[k + 1];
    study.orders.push_back(std::log2(ratio));
  }
  if (!study.orders.empty()) {
    study.min_order = *std::min_element(study.orders.begin(), study.orders.end());
    study.reports.back().convergence_order = study.min_order;
  }
  return study;
}

}  // namespace blowup

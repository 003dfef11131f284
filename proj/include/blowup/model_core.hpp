#pragma once

#include <functional>

namespace blowup {

enum class ForceSign { attractive, repulsive };

/// Constants of one self-similar solution instance.
struct ModelParams {
  int dim = 4;           // spatial dimension N
  double theta = 1.25;   // viscosity exponent, mu(rho) = kappa * rho^theta
  double kappa = 1.0;    // viscosity coefficient
  double big_c = 1.0;    // similarity speed C
  double big_t = 1.0;    // similarity time T
  double alpha0 = 1.0;   // profile centre value y(0)
  ForceSign force_sign = ForceSign::attractive;

  /// Throws ConfigError unless T > 0, kappa > 0, alpha0 > 0, C != 0, dim >= 1, theta >= 0.
  void validate() const;

  /// +1 for attractive gravity, -1 for repulsive.
  double gravity_sign() const noexcept {
    return force_sign == ForceSign::attractive ? 1.0 : -1.0;
  }
};

/// gamma-law pressure P(rho) = K rho^gamma. K = 0 is the pressureless case.
struct PressureLaw {
  double big_k = 0.0;
  double gamma = 1.0;

  void validate() const;
  double pressure(double rho) const;
  bool pressureless() const noexcept { return big_k == 0.0; }
};

/// Gamma(k/2) for a positive integer k, by exact half-integer recursion.
double gamma_half_integer(int twice_arg);

/// Volume of the unit ball in R^dim.
double unit_ball_volume(int dim);

/// Poisson coupling constant: 2, 2 pi, and N(N-2) V(N) for N >= 3.
double alpha_constant(int dim);

/// Radial Green's function of the Laplacian: r, log r, -r^(2-N).
double green_function(int dim, double radius);

/// Radial density rho(t, s).
using DensityProfileFn = std::function<double(double t, double s)>;

/// Composite Simpson rule on `panels` (even, >= 2) equal panels.
double simpson(const std::function<double(double)>& f, double a, double b,
               int panels);

inline constexpr int kDefaultQuadPoints = 1024;

/// Radial gravitational field Phi_r = alpha(N) r^(1-N) * int_0^r rho(t,s) s^(N-1) ds.
/// Throws NumericError if a density sample is not finite.
double potential_gradient(const DensityProfileFn& profile, int dim, double t,
                          double r, int quad_points = kDefaultQuadPoints);

}  // namespace blowup

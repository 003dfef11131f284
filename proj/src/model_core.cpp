#include "blowup/model_core.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "blowup/errors.hpp"

namespace blowup {

void ModelParams::validate() const {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  if (!(theta >= 0.0)) throw ConfigError("theta must be >= 0");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be > 0");
  if (!(big_t > 0.0) || !std::isfinite(big_t)) throw ConfigError("T must be > 0");
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw ConfigError("alpha must be > 0");
  if (big_c == 0.0 || !std::isfinite(big_c)) throw ConfigError("C must be nonzero and finite");
}

void PressureLaw::validate() const {
  if (!(big_k >= 0.0)) throw ConfigError("K must be >= 0");
  if (!(gamma >= 1.0)) throw ConfigError("gamma must be >= 1");
}

double PressureLaw::pressure(double rho) const {
  if (big_k == 0.0) return 0.0;
  return big_k * std::pow(rho, gamma);
}

double gamma_half_integer(int twice_arg) {
  if (twice_arg < 1) throw ConfigError("Gamma(k/2) needs k >= 1");
  // Start from Gamma(1) = 1 or Gamma(1/2) = sqrt(pi) and climb with Gamma(x+1) = x Gamma(x).
  double x = (twice_arg % 2 == 0) ? 1.0 : 0.5;
  double value = (twice_arg % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
  const double target = 0.5 * twice_arg;
  while (x < target) {
    value *= x;
    x += 1.0;
  }
  return value;
}

double unit_ball_volume(int dim) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * dim) / gamma_half_integer(dim + 2);
}

double alpha_constant(int dim) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  if (dim == 1) return 2.0;
  if (dim == 2) return 2.0 * std::numbers::pi;
  return dim * (dim - 2) * unit_ball_volume(dim);
}

double green_function(int dim, double radius) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  if (!(radius > 0.0)) throw ConfigError("Green's function is singular at radius <= 0");
  if (dim == 1) return radius;
  if (dim == 2) return std::log(radius);
  return -1.0 / std::pow(radius, dim - 2);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
  if (panels < 2 || panels % 2 != 0)
    throw ConfigError("Simpson rule needs an even panel count >= 2, got " +
                      std::to_string(panels));
  const double h = (b - a) / panels;
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < panels; ++i) {
    const double v = f(a + i * h);
    if (i % 2 == 1) {
      odd += v;
    } else {
      even += v;
    }
  }
  return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

double potential_gradient(const DensityProfileFn& profile, int dim, double t,
                          double r, int quad_points) {
  if (!(r > 0.0)) throw ConfigError("potential gradient needs r > 0");
  const int power = dim - 1;
  const auto integrand = [&](double s) {
    const double rho = profile(t, s);
    if (!std::isfinite(rho))
      throw NumericError("non-finite density sample at s = " + std::to_string(s) +
                         ", t = " + std::to_string(t));
    return rho * std::pow(s, power);
  };
  const double mass = simpson(integrand, 0.0, r, quad_points);
  return alpha_constant(dim) * mass / std::pow(r, power);
}

}  // namespace blowup

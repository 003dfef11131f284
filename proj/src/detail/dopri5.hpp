#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup::detail {

using State2 = std::array<double, 2>;

struct Dopri5Options {
  double tol = 1e-10;
  double max_step = 0.01;
  double initial_step = 1e-4;
};

// Adaptive Dormand-Prince 5(4) driver for a two-component first-order system.
// `rhs(t, y)` returns y'. `observer(t, y, f)` is called after each accepted
// step with the derivative at the new point and returns false to stop.
// Integration ends at t_end exactly unless the observer stops it earlier.
template <class Rhs, class Observer>
void dopri5_integrate(const Rhs& rhs, double t, State2 y, double t_end,
                      const Dopri5Options& opt, Observer&& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const auto fail = [&](const char* why) {
    std::ostringstream msg;
    msg << why << " at t = " << t;
    throw IntegrationError(msg.str(), t);
  };

  State2 k1 = rhs(t, y);
  double h = std::min(opt.initial_step, opt.max_step);
  bool last_rejected = false;

  while (t < t_end) {
    bool final_step = false;
    if (t + h >= t_end) {
      h = t_end - t;
      final_step = true;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      fail("step size underflow");

    State2 tmp, k2, k3, k4, k5, k6, k7, y_new;
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    k2 = rhs(t + c2 * h, tmp);
    for (int i = 0; i < 2; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * h, tmp);
    for (int i = 0; i < 2; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * h, tmp);
    for (int i = 0; i < 2; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * h, tmp);
    for (int i = 0; i < 2; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    k6 = rhs(t + h, tmp);
    for (int i = 0; i < 2; ++i)
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                             b5 * k5[i] + b6 * k6[i]);
    k7 = rhs(t + h, y_new);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
      const double scale =
          opt.tol + opt.tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (e / scale) * (e / scale);
    }
    err = std::sqrt(0.5 * err);

    if (!std::isfinite(err)) {
      // Overflow inside the step; retry smaller.
      h *= 0.2;
      last_rejected = true;
      continue;
    }

    if (err <= 1.0) {
      t = final_step ? t_end : t + h;
      y = y_new;
      k1 = k7;
      if (!std::isfinite(y[0]) || !std::isfinite(y[1])) fail("non-finite state");
      if (!observer(t, y, k1)) return;
      double factor = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
      factor = std::clamp(factor, 0.2, last_rejected ? 1.0 : 5.0);
      h = std::min(h * factor, opt.max_step);
      last_rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      last_rejected = true;
    }
  }
}

}  // namespace blowup::detail

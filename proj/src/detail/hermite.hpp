#pragma once

namespace blowup::detail {

struct HermiteValue {
  double value;
  double derivative;
};

// Quintic Hermite interpolant through (p, p', p'') at x0 and x1, evaluated at x.
inline HermiteValue quintic_hermite(double x0, double x1, double p0, double dp0,
                                    double d2p0, double p1, double dp1,
                                    double d2p1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double t5 = t4 * t;

  const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const double h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
  const double h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const double h5 = 0.5 * (t3 - 2.0 * t4 + t5);

  const double g0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
  const double g1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
  const double g2 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
  const double g3 = -g0;
  const double g4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
  const double g5 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);

  const double hh = h * h;
  const double value = p0 * h0 + h * dp0 * h1 + hh * d2p0 * h2 + p1 * h3 +
                       h * dp1 * h4 + hh * d2p1 * h5;
  const double slope = (p0 * g0 + p1 * g3) / h + dp0 * g1 + dp1 * g4 +
                       h * (d2p0 * g2 + d2p1 * g5);
  return {value, slope};
}

}  // namespace blowup::detail

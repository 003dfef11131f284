#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "blowup/errors.hpp"
#include "blowup/model_core.hpp"
#include "blowup/solution_families.hpp"
#include "oracles.hpp"

using namespace blowup;
using std::numbers::pi;

namespace {

ModelParams make_params(double c, double t, double kappa, double alpha,
                        ForceSign sign = ForceSign::attractive) {
  ModelParams p;
  p.big_c = c;
  p.big_t = t;
  p.kappa = kappa;
  p.alpha0 = alpha;
  p.force_sign = sign;
  return p;
}

// Fixed-step RK4 reference for the y^4 profile, independent of the library integrator.
double reference_profile(const ModelParams& p, double z) {
  const double coeff = profile_coefficient(p);
  const double z0 = 1e-7;
  const double y0 = p.alpha0 - coeff * std::pow(p.alpha0, 4) * z0 * z0 / 8.0;
  const double dy0 = -coeff * std::pow(p.alpha0, 4) * z0 / 4.0;
  return oracle::rk4_emden(3.0, [coeff](double y) { return coeff * y * y * y * y; }, 0.0, z0,
                           y0, dy0, z, 4000)[0];
}

}  // namespace

TEST_SUITE("solution_families") {

TEST_CASE("profile coefficient carries sign and scale") {
  const double a4 = alpha_constant(4);
  CHECK(profile_coefficient(make_params(1, 1, 1, 1)) == doctest::Approx(a4 / 5.0));
  CHECK(profile_coefficient(make_params(2, 1, 0.5, 1)) == doctest::Approx(a4 / 5.0));
  CHECK(profile_coefficient(make_params(-1, 1, 1, 1)) == doctest::Approx(-a4 / 5.0));
  CHECK(profile_coefficient(make_params(1, 1, 1, 1, ForceSign::repulsive)) ==
        doctest::Approx(-a4 / 5.0));
}

TEST_CASE("build_blowup_solution: families and profile accuracy") {
  for (const auto& p : {make_params(1, 1, 1, 1), make_params(2, 1, 0.5, 1.5),
                        make_params(0.3, 2, 3, 0.7), make_params(-1, 1, 1, 1),
                        make_params(1, 1, 1, 1, ForceSign::repulsive)}) {
    const auto sol = build_blowup_solution(p);
    const auto& prof = sol.profile();
    CHECK(prof.y_values()[0] == p.alpha0);
    CHECK(prof.dy_values()[0] == 0.0);
    for (double frac : {0.1, 0.5, 0.9}) {
      const double z = frac * prof.z_end();
      CHECK(prof.at(z).y == doctest::Approx(reference_profile(p, z)).epsilon(1e-8));
    }
  }
  CHECK(build_blowup_solution(make_params(1, 1, 1, 1)).family() == Family::blowup4d);
  CHECK(build_blowup_solution(make_params(-1, 1, 1, 1)).family() == Family::global4d);
  CHECK(build_blowup_solution(make_params(1, 1, 1, 1, ForceSign::repulsive)).family() ==
        Family::repulsive4d);
  CHECK(to_string(Family::blowup4d) == "blowup4d");
}

TEST_CASE("build_blowup_solution rejects invalid parameters") {
  CHECK_THROWS_AS(build_blowup_solution(make_params(1, 1, 1, 0)), ConfigError);
  CHECK_THROWS_AS(build_blowup_solution(make_params(0, 1, 1, 1)), ConfigError);
  CHECK_THROWS_AS(build_blowup_solution(make_params(1, 0, 1, 1)), ConfigError);
  CHECK_THROWS_AS(build_blowup_solution(make_params(1, 1, -1, 1)), ConfigError);
  ModelParams p = make_params(1, 1, 1, 1);
  p.dim = 3;
  CHECK_THROWS_AS(build_blowup_solution(p), ConfigError);
  p = make_params(1, 1, 1, 1);
  p.theta = 1.0;
  CHECK_THROWS_AS(build_blowup_solution(p), ConfigError);
}

TEST_CASE("blowup time and tau guard") {
  const auto sol = build_blowup_solution(make_params(2, 1, 1, 1));
  CHECK(sol.blowup_time().value() == 0.5);
  CHECK(sol.tau(0.25) == 0.5);
  CHECK_THROWS_AS(sol.tau(0.5), BlowupGuardError);
  CHECK_THROWS_AS(sol.density(0.6, 0.0), BlowupGuardError);
  CHECK_FALSE(build_blowup_solution(make_params(-1, 1, 1, 1)).blowup_time().has_value());
}

TEST_CASE("density and velocity examples") {
  const auto sol = build_blowup_solution(make_params(1, 1, 1, 1));
  CHECK(sol.density(0.0, 0.0) == 1.0);
  CHECK(sol.density(0.5, 0.0) == doctest::Approx(16.0).epsilon(1e-15));
  const double y = sol.profile().at(0.3).y;
  CHECK(sol.density(0.0, 0.3) == doctest::Approx(std::pow(y, 4)).epsilon(1e-14));
  CHECK(sol.density(0.5, 0.15) == doctest::Approx(std::pow(y, 4) * 16.0).epsilon(1e-14));
  CHECK(sol.velocity(0.0, 2.0) == -2.0);
  CHECK(sol.velocity(0.5, 1.0) == -2.0);
  CHECK(sol.velocity(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(sol.density(0.0, -1.0), ConfigError);
  CHECK_THROWS_AS(sol.density(0.0, 2.0 * sol.profile().z_end()), ConfigError);

  const auto global = build_blowup_solution(make_params(-1, 1, 1, 2));
  CHECK(global.density(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(global.velocity(1.0, 4.0) == 2.0);
}

TEST_CASE("density vanishes beyond the first zero") {
  // A compactly supported profile (sin z / z) wrapped as a similarity solution.
  const auto prof = integrate_profile(lane_emden_problem(1.0, 5.0));
  const SelfSimilarSolution sol(make_params(1, 1, 1, 1), prof, Family::blowup4d);
  CHECK(sol.support_radius() == doctest::Approx(pi).epsilon(1e-11));
  CHECK(sol.density(0.0, 3.2) == 0.0);
  CHECK(sol.density(0.5, 1.6) == 0.0);
  CHECK(sol.density(0.0, 3.0) > 0.0);
  const auto d = sol.density_partials(0.0, 3.5);
  CHECK(d.rho_t == 0.0);
  CHECK(d.rho_r == 0.0);
}

TEST_CASE("density partials match finite differences") {
  for (const auto& p : {make_params(1, 1, 1, 1), make_params(-1, 1, 1, 1),
                        make_params(0.3, 2, 3, 0.7)}) {
    const auto sol = build_blowup_solution(p);
    const double t = 0.2;
    const double r = 0.4 * sol.support_radius() * sol.tau(t);
    const auto exact = sol.density_partials(t, r);
    double prev_t = 1.0, prev_r = 1.0;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
      const double ft = oracle::central_difference([&](double s) { return sol.density(s, r); },
                                                   t, h);
      const double fr = oracle::central_difference([&](double s) { return sol.density(t, s); },
                                                   r, h * r);
      const double et = std::abs(ft - exact.rho_t) / std::abs(exact.rho_t);
      const double er = std::abs(fr - exact.rho_r) / std::abs(exact.rho_r);
      CHECK(et < prev_t);
      CHECK(er < prev_r);
      prev_t = et;
      prev_r = er;
    }
    CHECK(prev_t < 1e-4);
    CHECK(prev_r < 1e-4);
  }
}

TEST_CASE("velocity partials") {
  const auto sol = build_blowup_solution(make_params(2, 1, 1, 1));
  const auto v = sol.velocity_partials(0.25, 3.0);
  CHECK(v.u_t == doctest::Approx(-4.0 * 3.0 / 0.25));
  CHECK(v.u_r == doctest::Approx(-4.0));
  CHECK(v.u_rr == 0.0);
  const double ft = oracle::central_difference([&](double s) { return sol.velocity(s, 3.0); },
                                               0.25, 1e-5);
  CHECK(ft == doctest::Approx(v.u_t).epsilon(1e-8));
}

TEST_CASE("similarity invariants (random parameters)") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> c_dist(0.2, 3.0), t_dist(0.5, 2.0), k_dist(0.3, 3.0),
      a_dist(0.5, 2.0), frac(0.0, 0.9);
  for (int trial = 0; trial < 12; ++trial) {
    const double sign = trial % 3 == 2 ? -1.0 : 1.0;
    const auto p = make_params(sign * c_dist(rng), t_dist(rng), k_dist(rng), a_dist(rng),
                               trial % 3 == 1 ? ForceSign::repulsive : ForceSign::attractive);
    const auto sol = build_blowup_solution(p);
    const double t1 = sign > 0 ? 0.3 * *sol.blowup_time() : 0.5;
    const double t2 = sign > 0 ? 0.8 * *sol.blowup_time() : 2.0;
    const double z = frac(rng) * sol.support_radius();
    // rho tau^4 depends on z alone.
    CHECK(sol.density(t1, z * sol.tau(t1)) * std::pow(sol.tau(t1), 4) ==
          doctest::Approx(sol.density(t2, z * sol.tau(t2)) * std::pow(sol.tau(t2), 4))
              .epsilon(1e-13));
    // u / r is independent of r.
    CHECK(sol.velocity(t1, 0.1) / 0.1 == doctest::Approx(sol.velocity(t1, 2.3) / 2.3));
    CHECK(sol.density(t1, 0.0) * std::pow(sol.tau(t1), 4) ==
          doctest::Approx(std::pow(p.alpha0, 4)).epsilon(1e-14));
  }
}

TEST_CASE("attractive profile decreases, growing profiles increase") {
  const auto attractive = build_blowup_solution(make_params(1, 1, 1, 1));
  const auto repulsive = build_blowup_solution(make_params(1, 1, 1, 1, ForceSign::repulsive));
  const auto global = build_blowup_solution(make_params(-1, 1, 1, 1));
  for (std::size_t i = 1; i < attractive.profile().size(); ++i)
    CHECK(attractive.profile().y_values()[i] <= attractive.profile().y_values()[i - 1]);
  for (const auto* sol : {&repulsive, &global}) {
    const auto ys = sol->profile().y_values();
    for (std::size_t i = 1; i < ys.size(); ++i) CHECK(ys[i] >= ys[i - 1]);
    CHECK(sol->profile().stop_reason() == StopReason::growth_limit);
  }
  // Supercritical exponent: no finite zero for the attractive profile.
  CHECK_FALSE(attractive.profile().first_zero().has_value());
}

TEST_CASE("Lane-Emden closed forms satisfy their ODE") {
  for (int n : {0, 1, 5}) {
    for (double z : {0.2, 0.7, 1.3, 2.0}) {
      const auto y = [n](double s) { return lane_emden_analytic(n, s); };
      const double h = 1e-3;
      const double d1 = oracle::central_difference(y, z, h);
      const double d2 = (y(z + h) - 2.0 * y(z) + y(z - h)) / (h * h);
      CHECK(std::abs(d2 + 2.0 / z * d1 + std::pow(y(z), n)) <= 1e-6);
    }
    CHECK(lane_emden_analytic(n, 0.0) == 1.0);
  }
  CHECK(lane_emden_analytic(1, 1e-6) == doctest::Approx(1.0 - 1e-12 / 6.0).epsilon(1e-16));
  CHECK(lane_emden_analytic(1, pi) == doctest::Approx(0.0));
  CHECK(lane_emden_analytic(5, 3.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(lane_emden_analytic(2, 1.0), ConfigError);
}

TEST_CASE("stationary star") {
  StationaryStar star;
  star.big_k = 2.0;
  star.big_a = 1.5;
  const double rho_c = std::pow(3.0 * 2.0 * 2.25 / (2.0 * pi), 1.25);
  CHECK(star.central_density() == doctest::Approx(rho_c).epsilon(1e-15));
  CHECK(stationary_density(star, 0.0) == doctest::Approx(rho_c).epsilon(1e-15));
  CHECK(stationary_density(star, 2.0) == doctest::Approx(rho_c * std::pow(10.0, -2.5)));
  // Far field decays like r^-5.
  const double r1 = 1e3, r2 = 2e3;
  CHECK(std::log2(stationary_density(star, r1) / stationary_density(star, r2)) ==
        doctest::Approx(5.0).epsilon(1e-6));
  StationaryStar bad;
  bad.big_k = 0.0;
  CHECK_THROWS_AS(stationary_density(bad, 1.0), ConfigError);
  bad = StationaryStar{};
  bad.dim = 4;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("polytropic collapse reduces to Lane-Emden n = 3") {
  PolytropicCollapse fam;
  fam.dim = 3;
  fam.big_k = pi;  // coefficient alpha(3) / (4K) = 1
  CHECK(fam.gamma() == doctest::Approx(4.0 / 3.0));
  CHECK(fam.density_exponent() == 3.0);
  CHECK(fam.mu() == 0.0);
  const auto bg = build_polytropic_collapse(fam, 10.0, 0.5);
  REQUIRE(bg.first_zero());
  CHECK(*bg.first_zero() == doctest::Approx(6.896848619).epsilon(1e-9));
  CHECK(bg.density(0.0, 0.0) == 1.0);
  CHECK(bg.density(0.0, 7.0) == 0.0);
  CHECK(bg.velocity(0.3, 1.0) == 0.0);

  PolytropicCollapse moving = fam;
  moving.a1 = 0.5;
  const auto mv = build_polytropic_collapse(moving, 10.0, 1.0);
  CHECK(mv.velocity(1.0, 2.0) == doctest::Approx(0.5 / 1.5 * 2.0).epsilon(1e-12));
  CHECK(mv.density(1.0, 0.0) == doctest::Approx(1.0 / std::pow(1.5, 3)).epsilon(1e-12));

  PolytropicCollapse bad = fam;
  bad.dim = 2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("isothermal collapse has the closed-form Liouville profile") {
  IsothermalCollapse fam;
  fam.big_k = 2.0 * pi;
  const auto bg = build_isothermal_collapse(fam, 20.0, 1.0);
  CHECK(bg.bounded());
  for (double z : {0.5, 2.0, 7.0, 19.0}) {
    const double exact = -2.0 * std::log1p(z * z / 8.0);
    CHECK(bg.profile().at(z).y == doctest::Approx(exact).epsilon(1e-8));
    CHECK(bg.density(0.0, z) == doctest::Approx(std::exp(exact)).epsilon(1e-8));
  }
}

}

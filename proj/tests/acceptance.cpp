// Acceptance gate: one PASS/FAIL line per criterion.
//
// Usage: blowup_acceptance [--known-failure=N ...]
// Exit status is 0 when every criterion passes, except those listed as known
// failures, which must fail (a known failure that starts passing is an error).

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "blowup/emden_ode.hpp"
#include "blowup/solution_families.hpp"
#include "blowup/verify.hpp"

using namespace blowup;
using std::numbers::pi;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  Outcome() { detail.precision(3); }

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

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

const std::vector<ModelParams> kBaseSets{make_params(1, 1, 1, 1), make_params(2, 1, 0.5, 1.5),
                                         make_params(0.3, 2, 3, 0.7)};

std::vector<double> q_z_samples(const SelfSimilarSolution& sol) {
  std::vector<double> zs;
  const double z_end = sol.support_radius();
  for (int i = 1; i <= 128; ++i) zs.push_back(z_end * i / 128.0);
  return zs;
}

std::vector<double> q_ode_samples(const SelfSimilarSolution& sol) {
  std::vector<double> zs;
  const double z_end = sol.support_radius();
  for (int i = 1; i <= 16; ++i) zs.push_back(z_end * i / 16.0);
  return zs;
}

void check_continuity(Outcome& o, const std::vector<ModelParams>& sets) {
  double worst = 0.0;
  for (const auto& p : sets) {
    const auto sol = build_blowup_solution(p);
    worst = std::max(worst, continuity_residual(sol, default_sample_grid(sol)).max_rel);
  }
  o.detail << " continuity max_rel=" << worst;
  o.require(worst <= 1e-12, "continuity <= 1e-12");
}

void check_q(Outcome& o, const std::vector<ModelParams>& sets) {
  double worst = 0.0, worst_ode = 0.0, weakest_control = INFINITY;
  for (const auto& p : sets) {
    const auto sol = build_blowup_solution(p);
    const auto zs = q_z_samples(sol);
    const double q = q_identity_check(sol.profile(), p, zs, 2048).max_rel;
    const double bad = q_identity_check(sol.profile(), p, zs, 2048, 4.0).max_rel;
    const double ode = q_ode_check(sol.profile(), p, q_ode_samples(sol), 2048).max_rel;
    worst = std::max(worst, q);
    worst_ode = std::max(worst_ode, ode);
    weakest_control = std::min(weakest_control, bad / std::max(q, 1e-300));
  }
  o.detail << " Q max_rel=" << worst << " Q' + 3Q/z max_rel=" << worst_ode
           << " control ratio>=" << weakest_control;
  o.require(worst <= 1e-8, "Q <= 1e-8");
  o.require(weakest_control >= 1e3, "4Ckappa control >= 1e3 x");
}

void check_momentum(Outcome& o, const std::vector<ModelParams>& sets) {
  const std::vector<int> levels{256, 512, 1024, 2048};
  double worst = 0.0, worst_fact = 0.0, min_order = INFINITY;
  for (const auto& p : sets) {
    const auto sol = build_blowup_solution(p);
    const auto grid = default_sample_grid(sol);
    std::vector<MomentumReport> reports;
    const auto study = convergence_study(
        [&](int qp) {
          reports.push_back(momentum_residual(sol, grid, qp));
          return reports.back().residual;
        },
        levels);
    const auto& at1024 = reports[2];
    worst = std::max(worst, at1024.residual.max_rel);
    worst_fact = std::max(worst_fact, at1024.factorization.max_rel);
    min_order = std::min(min_order, study.min_order.value_or(-INFINITY));
  }
  o.detail << " momentum max_rel=" << worst << " order>=" << min_order
           << " factorization max_rel=" << worst_fact;
  o.require(worst <= 1e-6, "momentum <= 1e-6 at 1024");
  o.require(min_order >= 3.9, "order >= 3.9");
  o.require(worst_fact <= 1e-10, "factorization <= 1e-10");
}

void criterion1(Outcome& o) {
  struct Case {
    int n;
    double z_hi;
  };
  double worst = 0.0;
  for (const auto& [n, z_hi] : {Case{0, std::sqrt(6.0)}, Case{1, pi}, Case{5, 50.0}}) {
    const auto prof = integrate_profile(lane_emden_problem(n, n == 5 ? 50.0 : 10.0));
    for (int i = 0; i <= 5000; ++i) {
      const double z = std::min(z_hi * i / 5000.0, prof.z_end());
      worst = std::max(worst, std::abs(prof.at(z).y - lane_emden_analytic(n, z)));
    }
    if (n == 0) {
      const double e = std::abs(prof.first_zero().value_or(0.0) - std::sqrt(6.0));
      o.detail << " |zero-sqrt6|=" << e;
      o.require(e <= 1e-9, "n=0 zero");
    } else if (n == 1) {
      const double e = std::abs(prof.first_zero().value_or(0.0) - pi);
      o.detail << " |zero-pi|=" << e;
      o.require(e <= 1e-9, "n=1 zero");
    } else {
      o.require(!prof.first_zero().has_value() && prof.z_end() == 50.0, "n=5 has no zero");
    }
  }
  o.detail << " max error=" << worst;
  o.require(worst <= 1e-8, "closed-form error <= 1e-8");
}

void criterion5(Outcome& o) {
  double worst = 0.0;
  for (const auto& p : kBaseSets) {
    const auto sol = build_blowup_solution(p);
    worst = std::max(worst, blowup_rate_check(sol, blowup_time_sequence(sol, 16, 1e-6)).max_rel);
  }
  o.detail << " rho(t,0) tau^4 vs alpha^4 max_rel=" << worst;
  o.require(worst <= 1e-12, "rate <= 1e-12");
}

void criterion6(Outcome& o) {
  const std::vector<ModelParams> sets{make_params(-1, 1, 1, 1),
                                      make_params(1, 1, 1, 1, ForceSign::repulsive)};
  check_continuity(o, sets);
  check_q(o, sets);
  check_momentum(o, sets);
}

void criterion7(Outcome& o) {
  StationaryStar star;
  star.big_k = 2.0944;
  star.big_a = 1.0;
  std::vector<double> radii;
  for (int i = 0; i < 50; ++i) radii.push_back(0.1 + 4.9 * i / 49.0);
  const std::vector<int> levels{256, 512, 1024, 2048};
  const auto study = convergence_study(
      [&](int qp) { return hydrostatic_check(star, radii, qp); }, levels);
  const double rel = study.reports.back().max_rel;
  const double order = study.min_order.value_or(-INFINITY);
  o.detail << " hydrostatic max_rel=" << rel << " order>=" << order;
  o.require(rel <= 1e-6, "hydrostatic <= 1e-6 at 2048");
  o.require(order >= 3.9, "order >= 3.9");
}

void criterion8(Outcome& o) {
  const double t_c = pi / (2.0 * std::sqrt(2.0));
  const auto state = integrate_scale_factor(1.0, 3, 1.0, 0.0, 2.0);
  const double drift = state.max_relative_energy_drift(0.9 * t_c);
  o.detail << " energy drift=" << drift;
  o.require(drift <= 1e-8, "drift <= 1e-8");
  o.require(state.collapsed && state.collapse_bracket.has_value(), "collapse detected");
  if (state.collapse_bracket) {
    const auto [lo, hi] = *state.collapse_bracket;
    o.detail << std::setprecision(12) << " bracket=[" << lo << ", " << hi << "] exact=" << t_c
             << std::setprecision(3);
    o.require(hi - lo <= 1e-6, "bracket width <= 1e-6");
    o.require(lo <= t_c && t_c <= hi, "bracket contains exact collapse time");
  }
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BLOWUP_LAB_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion9(Outcome& o) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("blowup_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.json", b = dir / "b.json";
  const int ca = run_cli("verify -o " + a.string());
  const int cb = run_cli("verify -o " + b.string());
  const int cn = run_cli("verify --inject-error coefficient=4Ckappa");
  const bool same = std::filesystem::exists(a) && slurp(a) == slurp(b);
  std::filesystem::remove_all(dir);
  o.detail << " exit codes " << ca << "," << cb << " identical=" << (same ? "yes" : "no")
           << " inject-error exit=" << cn;
  o.require(ca == 0 && cb == 0, "verify exits 0");
  o.require(same, "byte-identical reports");
  o.require(cn == 1, "inject-error exits 1");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    const std::string prefix = "--known-failure=";
    if (arg.rfind(prefix, 0) == 0) {
      known.insert(std::stoi(arg.substr(prefix.size())));
    } else {
      std::cerr << "unknown argument " << arg << "\n";
      return 2;
    }
  }

  struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<void(Outcome&)> body;
  };
  const std::vector<Criterion> criteria{
      {1, "Lane-Emden closed forms", 1.0, criterion1},
      {2, "continuity identity", 1.0, [](Outcome& o) { check_continuity(o, kBaseSets); }},
      {3, "Q identity", 5.0, [](Outcome& o) { check_q(o, kBaseSets); }},
      {4, "momentum residual", 10.0, [](Outcome& o) { check_momentum(o, kBaseSets); }},
      {5, "blowup rate", 1.0, criterion5},
      {6, "global and repulsive variants", 16.0, criterion6},
      {7, "hydrostatic balance of the stationary star", 2.0, criterion7},
      {8, "scale-factor energy and collapse", 1.0, criterion8},
      {9, "CLI determinism and negative control", 15.0, criterion9},
  };

  std::cout.precision(3);
  const auto suite_start = std::chrono::steady_clock::now();
  int unexpected = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.detail << " time=" << elapsed << "s";
    o.require(elapsed < c.budget_s, "runtime budget");
    const bool is_known = known.count(c.id) > 0;
    std::cout << "criterion " << c.id << ": " << (o.passed ? "PASS" : "FAIL") << " " << c.name
              << (is_known && !o.passed ? " (known failure)" : "") << " |" << o.detail.str()
              << "\n";
    if (o.passed == is_known) ++unexpected;
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
  std::cout << "suite time=" << total << "s\n";
  if (total >= 15.0) {
    std::cout << "suite exceeded 15 s\n";
    ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}

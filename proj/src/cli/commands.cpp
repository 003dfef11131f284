#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <random>
#include <regex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "blowup/cli.hpp"
#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "blowup/solution_families.hpp"
#include "blowup/verify.hpp"

namespace blowup::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kProfileEquation =
    "y'' + (3/z) y' + s * alpha(4) / (5 * C * kappa) * y^4 = 0, s = +1 attractive, -1 repulsive";
constexpr const char* kCoefficientNote =
    "The profile coefficient is alpha(4)/(5*C*kappa). The shorter form alpha(4)/(C*kappa) "
    "does not satisfy the momentum identity; the factor 5 comes from d/dr[kappa rho^(5/4)].";

struct Thresholds {
  double continuity = 1e-12;
  double momentum = 1e-6;
  double factorization = 1e-10;
  double q_identity = 1e-8;
  double q_ode = 1e-6;
  double blowup_rate = 1e-12;
  double hydrostatic = 1e-6;
  double min_order = 3.9;
};

// Config errors detected after parsing.
[[noreturn]] void config_fail(const std::string& what) { throw ConfigError(what); }

double parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    config_fail("not a number: '" + std::string(text) + "'");
  return value;
}

std::vector<double> parse_list(const std::string& name, const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item(text.data() + start,
                                (comma == std::string::npos ? text.size() : comma) - start);
    if (item.find_first_not_of(' ') != std::string_view::npos) values.push_back(parse_number(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (values.empty()) config_fail("parameter list --" + name + " is empty");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

Json to_json(const ModelParams& p) {
  Json j;
  j["dim"] = p.dim;
  j["theta"] = p.theta;
  j["kappa"] = p.kappa;
  j["C"] = p.big_c;
  j["T"] = p.big_t;
  j["alpha"] = p.alpha0;
  j["force"] = p.force_sign == ForceSign::attractive ? "attractive" : "repulsive";
  return j;
}

Json optional_json(std::optional<double> x) { return x ? Json(*x) : Json(nullptr); }

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::horizon: return "horizon";
    case StopReason::first_zero: return "first_zero";
    case StopReason::growth_limit: return "growth_limit";
  }
  return "unknown";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string profile_csv(const RadialProfile& profile) {
  io::CsvTable table({"z", "y", "dy"});
  for (std::size_t i = 0; i < profile.size(); ++i)
    table.add_row({io::format_double(profile.grid()[i]), io::format_double(profile.y_values()[i]),
                   io::format_double(profile.dy_values()[i])});
  return table.str();
}

Json profile_arrays(const RadialProfile& profile) {
  Json j;
  j["z"] = std::vector<double>(profile.grid().begin(), profile.grid().end());
  j["y"] = std::vector<double>(profile.y_values().begin(), profile.y_values().end());
  j["dy"] = std::vector<double>(profile.dy_values().begin(), profile.dy_values().end());
  return j;
}

void require_output(const RunConfig& config) {
  if (config.output.empty()) config_fail("--output is required");
  if (config.format != "csv" && config.format != "json")
    config_fail("--format must be csv or json");
}

// Writes `table` as CSV with a JSON sidecar, or everything as one JSON object.
void emit(const RunConfig& config, const std::string& csv, Json meta, Json arrays) {
  if (config.format == "csv") {
    io::write_text_file(config.output, csv);
    io::write_text_file(config.output + ".json", dump(meta));
  } else {
    meta["data"] = std::move(arrays);
    io::write_text_file(config.output, dump(meta));
  }
}

ModelParams model_params(const RunConfig& config) {
  ModelParams p = config.params;
  if (config.repulsive || config.family == "repulsive4d") p.force_sign = ForceSign::repulsive;
  if (config.family == "global4d" && !(p.big_c < 0.0))
    config_fail("family global4d needs C < 0");
  if (config.family == "blowup4d" && p.force_sign == ForceSign::attractive && p.big_c < 0.0)
    config_fail("family blowup4d needs C > 0 (use global4d for C < 0)");
  p.validate();
  return p;
}

BlowupBuildOptions build_options(const RunConfig& config) {
  BlowupBuildOptions options;
  options.tol = config.tol;
  options.z_max = config.z_max;
  return options;
}

void validate_common(const RunConfig& config) {
  if (!(config.tol > 0.0)) config_fail("--tol must be > 0");
  if (!(config.zero_tol > 0.0)) config_fail("--zero-tol must be > 0");
  for (int q : {config.quad_points, config.q_quad_points})
    if (q < 8 || q % 4 != 0) config_fail("quadrature points must be a multiple of 4, >= 8");
  if (config.z_max && !(*config.z_max > 0.0)) config_fail("--z-max must be > 0");
  if (config.random_samples < 0) config_fail("--random-samples must be >= 0");
}

Json tolerances(const RunConfig& config) {
  Json j;
  j["tol"] = config.tol;
  j["zero_tol"] = config.zero_tol;
  j["quad_points"] = config.quad_points;
  return j;
}

// ---------------------------------------------------------------------------
// profile

int cmd_profile(const RunConfig& config) {
  require_output(config);
  validate_common(config);
  Json meta;
  meta["command"] = "profile";
  meta["family"] = config.family;
  RadialProfile profile = [&]() -> RadialProfile {
    if (config.family == "blowup4d" || config.family == "global4d" ||
        config.family == "repulsive4d") {
      const ModelParams p = model_params(config);
      const auto sol = build_blowup_solution(p, build_options(config));
      meta["family"] = std::string(to_string(sol.family()));
      meta["params"] = to_json(p);
      meta["profile_equation"] = kProfileEquation;
      meta["coefficient"] = profile_coefficient(p);
      meta["coefficient_note"] = kCoefficientNote;
      meta["blowup_time"] = optional_json(sol.blowup_time());
      return sol.profile();
    }
    if (config.family == "lane-emden") {
      const double z_max = config.z_max.value_or(config.n >= 5.0 ? 50.0 : 10.0);
      meta["n"] = config.n;
      return integrate_profile(lane_emden_problem(config.n, z_max),
                               ProfileOptions{config.tol, 0.01, 1e-6, config.zero_tol});
    }
    if (config.family == "polytropic") {
      PolytropicCollapse fam{config.dim, config.big_k, config.lambda_, config.a0, config.a1,
                             config.params.alpha0};
      meta["dim"] = fam.dim;
      meta["K"] = fam.big_k;
      meta["lambda"] = fam.lambda_;
      meta["gamma"] = fam.gamma();
      meta["mu"] = fam.mu();
      return integrate_profile(fam.profile_problem(config.z_max.value_or(10.0)),
                               ProfileOptions{config.tol, 0.01, 1e-6, config.zero_tol});
    }
    if (config.family == "isothermal") {
      IsothermalCollapse fam{config.big_k, config.lambda_, config.a0, config.a1,
                             config.params.alpha0};
      meta["K"] = fam.big_k;
      meta["lambda"] = fam.lambda_;
      meta["mu"] = fam.mu();
      return integrate_profile(fam.profile_problem(config.z_max.value_or(10.0)),
                               ProfileOptions{config.tol, 0.01, 1e-6, config.zero_tol});
    }
    config_fail("unknown family '" + config.family + "'");
  }();
  meta["first_zero"] = optional_json(profile.first_zero());
  meta["z_end"] = profile.z_end();
  meta["stop_reason"] = std::string(to_string(profile.stop_reason()));
  meta["nodes"] = profile.size();
  meta["tolerances"] = tolerances(config);
  emit(config, profile_csv(profile), std::move(meta), profile_arrays(profile));
  return 0;
}

// ---------------------------------------------------------------------------
// lane-emden

int cmd_lane_emden(const RunConfig& config) {
  require_output(config);
  validate_common(config);
  const double z_max = config.z_max.value_or(config.n >= 5.0 ? 50.0 : 10.0);
  const auto profile = integrate_profile(lane_emden_problem(config.n, z_max),
                                         ProfileOptions{config.tol, 0.01, 1e-6, config.zero_tol});
  const bool analytic = config.n == 0.0 || config.n == 1.0 || config.n == 5.0;
  const int index = static_cast<int>(config.n);

  io::CsvTable table({"z", "y", "dy", "analytic"});
  double max_error = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double z = profile.grid()[i];
    std::string exact = "";
    if (analytic) {
      const double e = lane_emden_analytic(index, z);
      if (!profile.first_zero() || z <= *profile.first_zero())
        max_error = std::max(max_error, std::abs(e - profile.y_values()[i]));
      exact = io::format_double(e);
    }
    table.add_row({io::format_double(z), io::format_double(profile.y_values()[i]),
                   io::format_double(profile.dy_values()[i]), exact});
  }

  Json meta;
  meta["command"] = "lane-emden";
  meta["n"] = config.n;
  meta["z_max"] = z_max;
  meta["first_zero"] = optional_json(profile.first_zero());
  if (analytic) {
    meta["max_error_vs_closed_form"] = max_error;
    if (index == 0) meta["closed_form_first_zero"] = std::sqrt(6.0);
    if (index == 1) meta["closed_form_first_zero"] = std::numbers::pi;
    if (index == 5) meta["closed_form_first_zero"] = nullptr;
  }
  meta["tolerances"] = tolerances(config);
  Json arrays = profile_arrays(profile);
  emit(config, table.str(), std::move(meta), std::move(arrays));
  return 0;
}

// ---------------------------------------------------------------------------
// scale-factor

int cmd_scale_factor(const RunConfig& config) {
  require_output(config);
  validate_common(config);
  const auto state =
      integrate_scale_factor(config.lambda_, config.dim, config.a0, config.a1, config.t_max,
                             ScaleFactorOptions{config.tol, 1e-6, 0.0});
  io::CsvTable table({"t", "a", "da", "energy"});
  for (std::size_t i = 0; i < state.t_grid.size(); ++i)
    table.add_row({io::format_double(state.t_grid[i]), io::format_double(state.a_values[i]),
                   io::format_double(state.da_values[i]),
                   io::format_double(state.energy(state.a_values[i], state.da_values[i]))});
  Json meta;
  meta["command"] = "scale-factor";
  meta["lambda"] = config.lambda_;
  meta["dim"] = config.dim;
  meta["a0"] = config.a0;
  meta["a1"] = config.a1;
  meta["t_max"] = config.t_max;
  meta["collapsed"] = state.collapsed;
  if (state.collapse_bracket) {
    meta["collapse_bracket"] = {state.collapse_bracket->first,
                                std::isfinite(state.collapse_bracket->second)
                                    ? Json(state.collapse_bracket->second)
                                    : Json(nullptr)};
  } else {
    meta["collapse_bracket"] = nullptr;
  }
  meta["max_relative_energy_drift"] = state.max_relative_energy_drift();
  meta["tolerances"] = tolerances(config);
  Json arrays;
  arrays["t"] = state.t_grid;
  arrays["a"] = state.a_values;
  arrays["da"] = state.da_values;
  emit(config, table.str(), std::move(meta), std::move(arrays));
  return 0;
}

// ---------------------------------------------------------------------------
// verify

double parse_injection(const std::string& spec) {
  if (spec.empty()) return 5.0;
  static const std::regex pattern(R"(coefficient=([0-9]+(\.[0-9]*)?)Ckappa)");
  std::smatch match;
  if (!std::regex_match(spec, match, pattern))
    config_fail("unknown --inject-error '" + spec + "' (expected coefficient=<k>Ckappa)");
  return parse_number(match[1].str());
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<SamplePoint> random_points(const SelfSimilarSolution& sol, int count,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& p = sol.params();
  std::vector<SamplePoint> points;
  for (int i = 0; i < count; ++i) {
    const double u = unit_uniform(rng);
    const double v = unit_uniform(rng);
    // T - C t log-uniform in [1e-6 T, T] (C > 0) or [T, 128 T] (C < 0).
    const double tau = p.big_c > 0.0 ? p.big_t * std::pow(1e-6, u)
                                     : p.big_t * std::pow(128.0, u);
    const double t = (p.big_t - tau) / p.big_c;
    const double z = sol.support_radius() * (1.0 - v);  // (0, Z]
    points.push_back({t, z * sol.tau(t)});
  }
  return points;
}

Json check_json(const ResidualReport& report, double threshold, bool passed,
                std::optional<double> min_order = std::nullopt) {
  Json j;
  j["name"] = report.name;
  j["grid"] = report.grid_spec;
  j["samples"] = report.values.size();
  j["max_abs"] = report.max_abs;
  j["max_rel"] = report.max_rel;
  j["threshold"] = threshold;
  j["quad_points"] = report.quad_points;
  j["convergence_order"] = optional_json(report.convergence_order);
  if (min_order) j["min_convergence_order"] = *min_order;
  j["passed"] = passed;
  return j;
}

std::vector<int> doubling_levels(int finest_but_one) {
  return {finest_but_one / 4, finest_but_one / 2, finest_but_one, finest_but_one * 2};
}

struct VerifyOutcome {
  Json report;
  bool passed;
};

VerifyOutcome verify_suite(const RunConfig& config) {
  const Thresholds th;
  const double viscous_factor = parse_injection(config.inject_error);
  const ModelParams p = model_params(config);
  const auto sol = build_blowup_solution(p, build_options(config));

  auto points = default_sample_grid(sol);
  const auto extra = random_points(sol, config.random_samples, config.seed);
  points.insert(points.end(), extra.begin(), extra.end());

  Json checks = Json::array();
  bool all = true;
  const auto record = [&](Json j) {
    all = all && j["passed"].get<bool>();
    checks.push_back(std::move(j));
  };

  const auto cont = continuity_residual(sol, points);
  record(check_json(cont, th.continuity, cont.max_rel <= th.continuity));

  const auto levels = doubling_levels(config.quad_points);
  const auto study = convergence_study(
      [&](int q) { return momentum_residual(sol, points, q, viscous_factor).residual; }, levels);
  auto momentum = momentum_residual(sol, points, config.quad_points, viscous_factor);
  momentum.residual.convergence_order = study.min_order;
  const bool order_ok = study.min_order && *study.min_order >= th.min_order;
  record(check_json(momentum.residual, th.momentum,
                    momentum.residual.max_rel <= th.momentum && order_ok, th.min_order));
  record(check_json(momentum.factorization, th.factorization,
                    momentum.factorization.max_rel <= th.factorization));

  const double z_support = sol.support_radius();
  std::vector<double> z_dense;
  for (int j = 1; j <= 64; ++j) z_dense.push_back(z_support * j / 64.0);
  const auto q_id = q_identity_check(sol.profile(), p, z_dense, config.q_quad_points,
                                     viscous_factor);
  record(check_json(q_id, th.q_identity, q_id.max_rel <= th.q_identity));

  std::vector<double> z_coarse;
  for (int j = 1; j <= 16; ++j) z_coarse.push_back(z_support * j / 16.0);
  const auto q_ode = q_ode_check(sol.profile(), p, z_coarse, config.q_quad_points,
                                 viscous_factor);
  record(check_json(q_ode, th.q_ode, q_ode.max_rel <= th.q_ode));

  std::vector<double> times;
  if (p.big_c > 0.0) {
    times = blowup_time_sequence(sol, 16, 1e-6);
  } else {
    for (int k = 0; k < 16; ++k) times.push_back(p.big_t * (std::ldexp(1.0, k) - 1.0) / -p.big_c);
  }
  const auto rate = blowup_rate_check(sol, times);
  record(check_json(rate, th.blowup_rate, rate.max_rel <= th.blowup_rate));

  Json report;
  report["command"] = "verify";
  report["family"] = std::string(to_string(sol.family()));
  report["params"] = to_json(p);
  report["profile_equation"] = kProfileEquation;
  report["coefficient"] = profile_coefficient(p);
  report["coefficient_note"] = kCoefficientNote;
  report["injected_error"] = config.inject_error.empty() ? Json(nullptr) : Json(config.inject_error);
  report["support_radius"] = z_support;
  report["first_zero"] = optional_json(sol.profile().first_zero());
  report["blowup_time"] = optional_json(sol.blowup_time());
  report["seed"] = config.seed;
  report["random_samples"] = config.random_samples;
  report["tolerances"] = tolerances(config);

  if (config.stationary) {
    const StationaryStar star{config.big_k, config.big_a, 3};
    std::vector<double> radii;
    for (int i = 0; i < 50; ++i) radii.push_back(0.1 + 4.9 * i / 49.0);
    const auto hydro_levels = doubling_levels(1024);
    const auto hydro_study = convergence_study(
        [&](int q) { return hydrostatic_check(star, radii, q); }, hydro_levels);
    ResidualReport hydro = hydro_study.reports[hydro_levels.size() - 1];  // 2048 panels
    const bool ok = hydro.max_rel <= th.hydrostatic && hydro_study.min_order &&
                    *hydro_study.min_order >= th.min_order;
    record(check_json(hydro, th.hydrostatic, ok, th.min_order));
    report["stationary"] = {{"K", star.big_k}, {"A", star.big_a},
                            {"central_density", star.central_density()}};
  }

  report["checks"] = std::move(checks);
  report["passed"] = all;
  return {std::move(report), all};
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  validate_common(config);
  if (config.format != "json") config_fail("verify writes JSON reports (--format json)");
  const auto outcome = verify_suite(config);
  for (const auto& check : outcome.report["checks"])
    out << (check["passed"].get<bool>() ? "PASS " : "FAIL ") << check["name"].get<std::string>()
        << " max_rel=" << io::format_double(check["max_rel"].get<double>()) << "\n";
  if (!config.output.empty()) io::write_text_file(config.output, dump(outcome.report));
  return outcome.passed ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRow {
  double c, t, kappa, alpha;
  std::vector<std::string> cells;
};

std::vector<std::string> sweep_cells(const RunConfig& config, double c, double t, double kappa,
                                     double alpha) {
  ModelParams p = config.params;
  p.big_c = c;
  p.big_t = t;
  p.kappa = kappa;
  p.alpha0 = alpha;
  if (config.repulsive) p.force_sign = ForceSign::repulsive;
  std::vector<std::string> cells{io::format_double(c), io::format_double(t),
                                 io::format_double(kappa), io::format_double(alpha)};
  try {
    p.validate();
    const auto sol = build_blowup_solution(p, build_options(config));
    const auto points = default_sample_grid(sol);
    const auto cont = continuity_residual(sol, points);
    const auto mom = momentum_residual(sol, points, config.quad_points);
    std::vector<double> zs;
    for (int j = 1; j <= 16; ++j) zs.push_back(sol.support_radius() * j / 16.0);
    const auto q = q_identity_check(sol.profile(), p, zs, config.q_quad_points);
    const double rate = sol.density(0.0, 0.0) * std::pow(p.big_t, 4);
    const auto zero = sol.profile().first_zero();
    const auto blowup = sol.blowup_time();
    cells.insert(cells.end(),
                 {std::string(to_string(sol.family())), zero ? io::format_double(*zero) : "",
                  io::format_double(sol.support_radius()), io::format_double(cont.max_rel),
                  io::format_double(mom.residual.max_rel), io::format_double(q.max_rel),
                  blowup ? io::format_double(*blowup) : "", io::format_double(rate), "ok", ""});
  } catch (const std::exception& e) {
    cells.insert(cells.end(), {"", "", "", "", "", "", "", "", "error", e.what()});
  }
  return cells;
}

int cmd_sweep(const RunConfig& config) {
  require_output(config);
  validate_common(config);
  if (config.format != "csv") config_fail("sweep writes CSV tables (--format csv)");
  const auto list_or = [](const std::optional<std::string>& list, const std::string& name,
                          double fallback) {
    return list ? parse_list(name, *list) : std::vector<double>{fallback};
  };
  const auto cs = list_or(config.c_list, "C-list", config.params.big_c);
  const auto ts = list_or(config.t_list, "T-list", config.params.big_t);
  const auto kappas = list_or(config.kappa_list, "kappa-list", config.params.kappa);
  const auto alphas = list_or(config.alpha_list, "alpha-list", config.params.alpha0);

  std::vector<SweepRow> rows;
  for (double c : cs)
    for (double t : ts)
      for (double k : kappas)
        for (double a : alphas) rows.push_back({c, t, k, a, {}});

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < rows.size(); i = next++)
      rows[i].cells = sweep_cells(config, rows[i].c, rows[i].t, rows[i].kappa, rows[i].alpha);
  };
  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(sweep_threads(), static_cast<unsigned>(rows.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  io::CsvTable table({"C", "T", "kappa", "alpha", "family", "first_zero", "support_radius",
                      "continuity_max_rel", "momentum_max_rel", "q_max_rel", "blowup_time",
                      "blowup_rate", "status", "message"});
  for (auto& row : rows) table.add_row(std::move(row.cells));
  io::write_text_file(config.output, table.str());
  return 0;
}

// ---------------------------------------------------------------------------

void add_model_flags(CLI::App& cmd, RunConfig& config) {
  cmd.add_option("--family", config.family,
                 "blowup4d | global4d | repulsive4d | lane-emden | polytropic | isothermal");
  cmd.add_option("--C", config.params.big_c, "similarity speed C (nonzero)");
  cmd.add_option("--T", config.params.big_t, "similarity time T (> 0)");
  cmd.add_option("--kappa", config.params.kappa, "viscosity coefficient (> 0)");
  cmd.add_option("--alpha", config.params.alpha0, "profile centre value y(0) (> 0)");
  cmd.add_flag("--repulsive", config.repulsive, "flip the sign of the gravitational force");
  cmd.add_option("--z-max", config.z_max, "profile horizon in the similarity variable");
}

void add_numeric_flags(CLI::App& cmd, RunConfig& config) {
  cmd.add_option("--tol", config.tol, "integrator tolerance");
  cmd.add_option("--zero-tol", config.zero_tol, "first-zero tolerance in |y|");
  cmd.add_option("--quad-points", config.quad_points, "Simpson panels for the momentum check");
  cmd.add_option("--q-quad-points", config.q_quad_points, "Simpson panels for Q");
  cmd.add_option("-o,--output", config.output, "output path");
  cmd.add_option("--format", config.format, "csv | json");
}

}  // namespace

unsigned sweep_threads() {
  if (const char* env = std::getenv("BLOWUP_LAB_THREADS")) {
    unsigned value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  config.format.clear();
  CLI::App app{"Self-similar blowup solutions: profiles, verification, sweeps", "blowup_lab"};
  app.require_subcommand(1);

  auto* profile = app.add_subcommand("profile", "integrate and write a profile y(z)");
  add_model_flags(*profile, config);
  add_numeric_flags(*profile, config);
  profile->add_option("--n", config.n, "Lane-Emden index");
  profile->add_option("--dim", config.dim, "dimension of the collapse background");
  profile->add_option("--K", config.big_k, "pressure coefficient of the collapse background");
  profile->add_option("--lambda", config.lambda_, "scale-factor force constant");

  auto* lane = app.add_subcommand("lane-emden", "Lane-Emden profile against its closed form");
  lane->add_option("--n", config.n, "polytropic index");
  lane->add_option("--z-max", config.z_max, "integration horizon");
  add_numeric_flags(*lane, config);

  auto* scale = app.add_subcommand("scale-factor", "integrate a'' = -lambda / a^(N-1)");
  scale->add_option("--lambda", config.lambda_, "force constant");
  scale->add_option("--dim", config.dim, "dimension N (>= 2)");
  scale->add_option("--a0", config.a0, "a(0) > 0");
  scale->add_option("--a1", config.a1, "a'(0)");
  scale->add_option("--t-max", config.t_max, "integration horizon");
  add_numeric_flags(*scale, config);

  auto* verify = app.add_subcommand("verify", "check every identity of the 4-d solution");
  add_model_flags(*verify, config);
  add_numeric_flags(*verify, config);
  verify->add_flag("--stationary", config.stationary, "also check the gamma = 6/5 star");
  verify->add_option("--K", config.big_k, "stationary star K");
  verify->add_option("--A", config.big_a, "stationary star A");
  verify->add_option("--inject-error", config.inject_error, "negative control, e.g. coefficient=4Ckappa");
  verify->add_option("--seed", config.seed, "seed for --random-samples");
  verify->add_option("--random-samples", config.random_samples, "extra random (t, r) samples");

  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
  add_model_flags(*sweep, config);
  add_numeric_flags(*sweep, config);
  sweep->add_option("--C-list", config.c_list, "comma-separated C values");
  sweep->add_option("--T-list", config.t_list, "comma-separated T values");
  sweep->add_option("--kappa-list", config.kappa_list, "comma-separated kappa values");
  sweep->add_option("--alpha-list", config.alpha_list, "comma-separated alpha values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::config_error);
  }

  try {
    if (config.format.empty()) config.format = verify->parsed() ? "json" : "csv";
    if (profile->parsed()) return cmd_profile(config);
    if (lane->parsed()) return cmd_lane_emden(config);
    if (scale->parsed()) return cmd_scale_factor(config);
    if (verify->parsed()) return cmd_verify(config, out);
    if (sweep->parsed()) return cmd_sweep(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config_error);
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::io_failure);
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return static_cast<int>(ExitCode::numeric_failure);
  }
  return static_cast<int>(ExitCode::config_error);
}

}  // namespace blowup::cli

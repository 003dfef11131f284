#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "blowup/model_core.hpp"

namespace blowup::cli {

enum class ExitCode : int {
  pass = 0,
  verification_failure = 1,
  config_error = 2,
  numeric_failure = 3,
  io_failure = 4,
};

/// Every flag of every subcommand; unused fields keep their defaults.
struct RunConfig {
  std::string command;
  std::string family = "blowup4d";
  ModelParams params;
  bool repulsive = false;

  // Lane-Emden and collapse backgrounds.
  double n = 1.0;
  int dim = 3;
  double big_k = 1.0;
  double big_a = 1.0;
  double lambda_ = 0.0;
  double a0 = 1.0;
  double a1 = 0.0;
  double t_max = 1.0;
  std::optional<double> z_max;

  double tol = 1e-10;
  double zero_tol = 1e-12;
  int quad_points = 1024;
  int q_quad_points = 2048;

  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int random_samples = 0;

  bool stationary = false;
  std::string inject_error;

  // Sweep lists, comma separated.
  std::optional<std::string> c_list;
  std::optional<std::string> t_list;
  std::optional<std::string> kappa_list;
  std::optional<std::string> alpha_list;
};

/// Parses argv (argv[0] is the program name) and runs the subcommand.
/// Returns one of the ExitCode values.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Number of sweep worker threads: BLOWUP_LAB_THREADS if set and positive,
/// otherwise the hardware concurrency.
unsigned sweep_threads();

}  // namespace blowup::cli

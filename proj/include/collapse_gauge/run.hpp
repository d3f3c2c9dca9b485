#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collapse_gauge/search.hpp"

namespace collapse_gauge {

enum class Command { reliability, helstrom, lambda, bounds, mc, search, sweep, verify };
enum class OutputFormat { json, csv };

std::string_view to_string(Command c);

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // numerical failure or a failed verify
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
  Command command = Command::lambda;
  /// Operator file; used as the effect when `effect` is empty.
  std::optional<std::filesystem::path> input_path;
  double p = 0.5;
  int d = 3;
  std::int64_t n = 1'000'000;
  std::uint64_t seed = 0;
  /// Unset: CSV for sweep, JSON for everything else.
  std::optional<OutputFormat> output_format;
  std::optional<std::filesystem::path> out_path;

  std::string effect;  // named effect or operator file
  std::string state;   // named state or state file
  std::optional<std::filesystem::path> rho1;
  std::optional<std::filesystem::path> rho2;
  std::int64_t budget = 10'000;
  SearchStrategy strategy = SearchStrategy::random_restart_local;
  std::vector<double> p_grid;  // sweep; empty means uniform_p_grid(p_step)
  double p_step = 0.05;
};

/// Throws ValidationError unless p ∈ [0, 1], n ≥ 1, d ≥ 2 and budget ≥ 1.
void validate(const RunConfig& config);

/// Executes one command. Results go to `out` (or to config.out_path),
/// diagnostics to `err`. Returns one of the kExit* codes; never throws.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the command line and calls run(). Honors COLLAPSE_GAUGE_THREADS.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace collapse_gauge

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace riskband::cli {

/// Process exit statuses. Library errors map to their ErrorCode value.
enum ExitStatus : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Every option of every subcommand, with its effective default.
struct RunConfig {
  std::string command;

  // loss input: either a loss matrix CSV or a score/label panel
  std::string input;
  std::vector<std::string> inputs;  ///< combine: one loss CSV per component
  std::string scores;
  std::string labels;
  std::string loss = "FNP";
  std::string tradeoff_input;        ///< select/eval: loss CSV of the tradeoff risk
  std::string tradeoff_loss = "FPP"; ///< select/eval on a panel
  long grid_size = 500;              ///< panel grid: linspace(0, 1, grid_size)
  std::string orientation = "auto";
  std::string monotonize = "none";
  long batch = 1;

  // band method
  std::string method = "rr";
  double delta = 0.1;
  std::optional<double> delta_glob;  ///< defaults to delta / 10
  std::optional<double> delta_loc;   ///< defaults to delta - delta_glob
  double r = 0.1;
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  std::string side = "upper";
  bool population = false;

  // select
  std::string scheme = "even-tradeoff";
  std::optional<double> constraint_r = 0.1;

  // suggest-b
  std::size_t initial_replicates = 1000;
  double dkw_alpha = 0.05;
  double relative_tolerance = 0.01;
  std::size_t replicate_cap = std::size_t{1} << 20;

  // simulate / eval
  std::string config;
  std::string family = "equicorrelated";
  double rho = 0.2;
  long batch_size = 5;
  double grid_lo = -3.0;
  double grid_hi = 3.0;
  long sim_grid_size = 1000;
  std::vector<long> n = {1000};
  std::size_t runs = 200;
  std::vector<std::string> methods = {"rr"};
  double selected_r = 0.1;
  std::string trace;

  // combine
  std::string psi = "sum";
  std::vector<double> weights;
  std::optional<double> floor;
  int scan_resolution = 33;

  std::string output;
  std::string dump_sup;
  std::size_t threads = 0;  ///< 0: RISKBAND_THREADS or hardware concurrency
};

/// Executes a parsed configuration. Errors propagate as exceptions.
int execute(const RunConfig& config, std::ostream& out);

/// Parses argv, runs, and maps failures to exit statuses with a diagnostic on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace riskband::cli

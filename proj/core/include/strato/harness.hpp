#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "strato/field.hpp"
#include "strato/fit.hpp"
#include "strato/initdata.hpp"
#include "strato/solver.hpp"

namespace strato::harness {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Quantity { vorticity, velocity, density, pi };

std::string to_string(Quantity q);
Quantity parse_quantity(const std::string& name);

/// Theoretical exponent in mu t: 1/(2p) for vorticity, 1/2 + 1/(2p) otherwise.
double theoretical_exponent(Quantity q, double p);

struct SweepConfig {
  GridSpec grid{256, 8.0};
  init::PatchSpec patch;
  init::DensitySpec density;
  int supersample = 8;
  solver::SimParams params;  // mu is overridden per run
  std::vector<double> mu_ladder;
  std::vector<double> p_list{2.0};
  std::vector<double> sample_times{1.0};
  std::vector<Quantity> quantities{Quantity::vorticity, Quantity::velocity, Quantity::density, Quantity::pi};
  std::vector<std::uint64_t> seeds{0};
  double slope_tolerance = 0.1;
  double max_stderr = 0.05;
  int min_fit_points = 5;
  double min_fit_decades = 2.0;
  /// 0 selects STRATO_WORKERS or the hardware concurrency.
  int workers = 0;
  std::filesystem::path output_dir = "strato-out";

  /// Throws ConfigError when the configuration breaks its invariants.
  void validate() const;
};

/// Parses the JSON layout {grid, patch, density, params, sweep, output}.
SweepConfig parse_config(const nlohmann::json& j);
SweepConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const SweepConfig& config);

solver::SimParams parse_params(const nlohmann::json& j, solver::SimParams base = {});
init::PatchSpec parse_patch(const nlohmann::json& j);
init::DensitySpec parse_density(const nlohmann::json& j);
nlohmann::json to_json(const init::PatchSpec& patch);
nlohmann::json to_json(const init::DensitySpec& density);
nlohmann::json to_json(const solver::SimParams& params);

struct RateRow {
  Quantity quantity;
  double p;
  double mu;
  double t;
  double error;
  bool below_resolution;
};

struct SlopeEntry {
  Quantity quantity;
  double p;
  double t;
  std::optional<fit::FitResult> fit;
  std::string failure;  // set when the fit itself failed
  bool pass = false;
  bool flagged = false;  // stderr above the limit
};

struct RateReport {
  std::vector<RateRow> rows;  // sorted by (quantity, p, mu, t)
  std::vector<SlopeEntry> slopes;
};

struct RunRecord {
  double mu;
  bool ok;
  std::string error;
  double wall_seconds;
  std::size_t steps;
  double dt_min;
  double dt_max;
};

struct RunManifest {
  std::string config_hash;
  std::string code_version;
  std::vector<RunRecord> runs;
  std::vector<std::string> files;
  int workers = 1;
};

/// Worker count from STRATO_WORKERS, else the hardware concurrency (>= 1).
int default_workers();

/// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

std::string code_version();

struct ErrorEntry {
  double p;
  double error;
};

/// |a - b|_{L^p} per p, or |BS(a) - BS(b)|_{L^p} in velocity mode.
std::vector<ErrorEntry> compare_fields(const ScalarField& a, const ScalarField& b, const std::vector<double>& p_list,
                                       bool velocity_mode = false);

/// Runs the mu = 0 reference and every ladder entry, then fits slopes at
/// fixed t against mu t. Per-run solver failures are recorded, not thrown.
std::pair<RateReport, RunManifest> run_sweep(const SweepConfig& config);

/// Writes rates.csv, slopes.json and manifest.json into `dir`; returns the
/// file names written. Throws io::IoError with path context.
std::vector<std::string> emit_report(const RateReport& report, RunManifest manifest, const std::filesystem::path& dir);

nlohmann::json to_json(const std::vector<SlopeEntry>& slopes);

/// Parses a rates.csv back into rows.
std::vector<RateRow> read_rates_csv(const std::filesystem::path& path);

/// Fits every (quantity, p, t) group of rows.
std::vector<SlopeEntry> fit_rows(const std::vector<RateRow>& rows, const fit::FitOptions& options,
                                 double slope_tolerance, double max_stderr);

}  // namespace strato::harness

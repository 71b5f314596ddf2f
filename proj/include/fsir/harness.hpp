#pragma once

// Experiment runners behind the command-line tool. Every runner is a pure
// function of its config: replication r of any experiment draws from the
// random stream seed ^ r, and results are aggregated in replication order,
// so the emitted numbers do not depend on the worker count.

#include "fsir/datagen.hpp"
#include "fsir/result.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fsir {

enum class ExperimentId { OptimalM, ErrorComparison, RealData, WsscDiagnostic, RateCheck };

std::string to_string(ExperimentId id);
ExperimentId parse_experiment(std::string_view text);

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr const char* kDataDirEnv = "FSIR_DATA_DIR";

struct ExperimentConfig {
  ExperimentId experiment = ExperimentId::OptimalM;
  std::vector<ModelId> models;
  std::vector<std::size_t> ns;
  std::vector<std::size_t> ms;
  std::vector<double> rhos;
  std::size_t slices = 10;
  // Structural dimensions to try (real data); synthetic models use their own.
  std::vector<std::size_t> ds;
  std::size_t replications = 1;
  std::uint64_t seed = kDefaultSeed;
  std::size_t grid_size = kDefaultGridSize;
  int kl_terms = kDefaultKlTerms;
  double noise_scale = kDefaultNoiseScale;

  // Truncation rule for the central-space part of rate-check.
  double c_m = 1.0;
  std::optional<double> alpha;
  std::optional<double> beta;

  // real-data
  std::filesystem::path data_path;
  std::size_t train_size = 90;
  std::string temperature_column = "temp";
  int weekday = 6;

  // wssc
  std::vector<std::size_t> slice_grid;
  std::size_t sub_slices = 10;
  int noise_basis_index = 5;

  std::size_t threads = 0;  // 0 = hardware concurrency
  bool record_timing = true;
  bool keep_replications = false;

  std::filesystem::path output;
  OutputFormat format = OutputFormat::Csv;

  void validate() const;
};

/// Desk-scale defaults for each experiment.
ExperimentConfig default_config(ExperimentId id);

/// Overlays settings from a JSON object or from `key = value` lines (lists
/// comma-separated, '#' starts a comment). Unknown keys are a ConfigError.
void apply_config_text(std::string_view text, ExperimentConfig& cfg);
void apply_config_file(const std::filesystem::path& path, ExperimentConfig& cfg);

/// Default location of the hourly bike table: $FSIR_DATA_DIR/hour.csv, or
/// ./hour.csv when the variable is unset.
std::filesystem::path default_bike_path();

ExperimentResult run_optimal_m(const ExperimentConfig& cfg);
ExperimentResult run_error_comparison(const ExperimentConfig& cfg);
ExperimentResult run_real_data(const ExperimentConfig& cfg);
ExperimentResult run_rate_check(const ExperimentConfig& cfg);
ExperimentResult run_wssc(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string library_version();

}  // namespace fsir

#pragma once

// Tabular experiment results and their CSV / JSON / plot-data forms.

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace fsir {

using Value = std::variant<std::int64_t, double, std::string>;

struct ResultRow {
  std::vector<Value> params;  // aligned with ExperimentResult::param_names
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;
  double wall_seconds = 0.0;
  // Per-replication values, kept only when requested.
  std::vector<double> per_replication;
};

struct PlotSeries {
  std::string name;
  std::string x_label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_stderr;
};

struct ResultMetadata {
  std::uint64_t seed = 0;
  std::size_t grid_size = 0;
  std::string version;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<std::string> param_names;
  std::vector<ResultRow> rows;
  std::vector<std::pair<std::string, Value>> summary;
  std::vector<PlotSeries> plots;
  ResultMetadata metadata;

  const Value* find_summary(std::string_view key) const;
  std::optional<double> summary_number(std::string_view key) const;
  // Index of the named parameter column.
  std::size_t param_index(std::string_view name) const;
};

bool operator==(const ResultRow& a, const ResultRow& b);
bool operator==(const PlotSeries& a, const PlotSeries& b);
bool operator==(const ResultMetadata& a, const ResultMetadata& b);
bool operator==(const ExperimentResult& a, const ExperimentResult& b);

double as_number(const Value& v);
std::string format_value(const Value& v);

struct MeanAndError {
  double mean;
  double std_error;
};

/// Mean and sample standard deviation / sqrt(count); std_error is 0 for a
/// single value.
MeanAndError mean_and_error(std::span<const double> values);

struct LineFit {
  double slope;
  double intercept;
  double r_squared;
};

/// Ordinary least squares of y on x; needs at least two distinct x.
std::optional<LineFit> fit_line(std::span<const double> x, std::span<const double> y);

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view text);

inline constexpr int kResultSchemaVersion = 1;

std::string to_csv(const ExperimentResult& result, bool include_timing = true);
nlohmann::ordered_json to_json(const ExperimentResult& result);
ExperimentResult from_json(const nlohmann::json& j);

/// Writes the result to `path` and one plot-data CSV per series next to it
/// (`<stem>.<series>.plot.csv`, columns x, y, y_stderr).
void emit(const ExperimentResult& result, OutputFormat format, const std::filesystem::path& path);
std::vector<std::filesystem::path> emit_plot_data(const ExperimentResult& result,
                                                  const std::filesystem::path& path);
ExperimentResult read_json_result(const std::filesystem::path& path);

}  // namespace fsir

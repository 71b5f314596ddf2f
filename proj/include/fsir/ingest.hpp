#pragma once

// Loader for the hourly bike-sharing table: one temperature curve per day
// (24 hourly values on a uniform grid) and the log of the day's mean hourly
// rental count as the response.

#include "fsir/func_core.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fsir {

struct BikeLoadOptions {
  int weekday = 6;  // Saturday in the public schema
  std::string temperature_column = "temp";
  std::string date_column = "dteday";
  std::string hour_column = "hr";
  std::string weekday_column = "weekday";
  std::string count_column = "cnt";
};

struct BikeDayRecord {
  std::string date;
  std::vector<double> temperatures;  // 24 entries, index = hour
  std::vector<double> counts;        // 24 entries, index = hour
};

struct BikeLoadResult {
  GridPtr grid;
  std::vector<Curve> curves;
  std::vector<double> responses;
  std::vector<std::string> dates;
  std::size_t incomplete_days = 0;
  std::size_t zero_count_days = 0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return curves.size(); }
  // Throws InvalidArgument when fewer than two days were loaded.
  FunctionalSample sample() const { return FunctionalSample(curves, responses); }
};

inline constexpr std::size_t kHoursPerDay = 24;

/// Complete days of the selected weekday, in file order.
std::vector<BikeDayRecord> read_bike_days(const std::filesystem::path& path, const BikeLoadOptions& options,
                                          std::size_t* incomplete_days = nullptr);

BikeLoadResult load_bike_csv(const std::filesystem::path& path, const BikeLoadOptions& options = {});

}  // namespace fsir

#include "fsir/ingest.hpp"

#include "fsir/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace fsir {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

template <typename T>
T parse_number(const std::string& text, std::string_view column, std::size_t line_no) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first != last && *first == ' ') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw SchemaError("line " + std::to_string(line_no) + ": cannot parse " + std::string(column) + " value '" +
                      text + "'");
  }
  return value;
}

struct DayAccumulator {
  std::string date;
  std::vector<std::optional<double>> temperatures = std::vector<std::optional<double>>(kHoursPerDay);
  std::vector<std::optional<double>> counts = std::vector<std::optional<double>>(kHoursPerDay);
};

}  // namespace

std::vector<BikeDayRecord> read_bike_days(const std::filesystem::path& path, const BikeLoadOptions& options,
                                          std::size_t* incomplete_days) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("'" + path.string() + "' is empty");
  }
  const auto header = split_csv_line(line);
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    column.emplace(header[i], i);
  }
  auto index_of = [&](const std::string& name) {
    const auto it = column.find(name);
    if (it == column.end()) {
      throw SchemaError("'" + path.string() + "' has no column '" + name + "'");
    }
    return it->second;
  };
  const std::size_t c_date = index_of(options.date_column);
  const std::size_t c_hour = index_of(options.hour_column);
  const std::size_t c_weekday = index_of(options.weekday_column);
  const std::size_t c_temp = index_of(options.temperature_column);
  const std::size_t c_count = index_of(options.count_column);
  const std::size_t needed = std::max({c_date, c_hour, c_weekday, c_temp, c_count}) + 1;

  std::vector<DayAccumulator> days;
  std::map<std::string, std::size_t> day_index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() < needed) {
      throw SchemaError("line " + std::to_string(line_no) + ": expected at least " + std::to_string(needed) +
                        " fields");
    }
    if (parse_number<int>(f[c_weekday], options.weekday_column, line_no) != options.weekday) continue;
    const int hour = parse_number<int>(f[c_hour], options.hour_column, line_no);
    const double temp = parse_number<double>(f[c_temp], options.temperature_column, line_no);
    const double count = parse_number<double>(f[c_count], options.count_column, line_no);
    if (hour < 0 || hour >= static_cast<int>(kHoursPerDay)) {
      throw SchemaError("line " + std::to_string(line_no) + ": hour out of range");
    }
    if (!(temp >= 0.0 && temp <= 1.0)) {
      throw SchemaError("line " + std::to_string(line_no) + ": normalized temperature outside [0, 1]");
    }
    if (!(count >= 0.0)) {
      throw SchemaError("line " + std::to_string(line_no) + ": negative count");
    }
    auto [it, inserted] = day_index.emplace(f[c_date], days.size());
    if (inserted) {
      days.push_back(DayAccumulator{f[c_date]});
    }
    auto& day = days[it->second];
    day.temperatures[static_cast<std::size_t>(hour)] = temp;
    day.counts[static_cast<std::size_t>(hour)] = count;
  }

  std::vector<BikeDayRecord> out;
  std::size_t incomplete = 0;
  for (const auto& day : days) {
    BikeDayRecord rec{day.date, {}, {}};
    bool complete = true;
    for (std::size_t h = 0; h < kHoursPerDay; ++h) {
      if (!day.temperatures[h] || !day.counts[h]) {
        complete = false;
        break;
      }
      rec.temperatures.push_back(*day.temperatures[h]);
      rec.counts.push_back(*day.counts[h]);
    }
    if (complete) {
      out.push_back(std::move(rec));
    } else {
      ++incomplete;
    }
  }
  if (incomplete_days != nullptr) *incomplete_days = incomplete;
  return out;
}

BikeLoadResult load_bike_csv(const std::filesystem::path& path, const BikeLoadOptions& options) {
  std::size_t incomplete = 0;
  const auto days = read_bike_days(path, options, &incomplete);
  const GridPtr grid = make_grid(kHoursPerDay);

  std::vector<Curve> curves;
  std::vector<double> responses;
  std::vector<std::string> dates;
  std::vector<std::string> warnings;
  std::size_t zero_days = 0;
  if (incomplete > 0) {
    warnings.push_back("dropped " + std::to_string(incomplete) + " day(s) with missing hours");
  }
  for (const auto& day : days) {
    double total = 0.0;
    for (double c : day.counts) total += c;
    const double mean_count = total / static_cast<double>(kHoursPerDay);
    if (!(mean_count > 0.0)) {
      ++zero_days;
      warnings.push_back("dropped " + day.date + ": zero mean count");
      continue;
    }
    curves.emplace_back(grid, Eigen::Map<const Eigen::VectorXd>(day.temperatures.data(),
                                                                static_cast<Eigen::Index>(kHoursPerDay)));
    responses.push_back(std::log(mean_count));
    dates.push_back(day.date);
  }
  return {grid, std::move(curves), std::move(responses), std::move(dates), incomplete, zero_days,
          std::move(warnings)};
}

}  // namespace fsir

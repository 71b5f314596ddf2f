#include "fsir/result.hpp"

#include "fsir/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fsir {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json value_to_json(const Value& v) {
  return std::visit([](const auto& x) { return nlohmann::ordered_json(x); }, v);
}

Value value_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return static_cast<std::int64_t>(j.get<bool>());
  throw SchemaError("result JSON: unsupported parameter value " + j.dump());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

// ---------------------------------------------------------------------------

const Value* ExperimentResult::find_summary(std::string_view key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::optional<double> ExperimentResult::summary_number(std::string_view key) const {
  const Value* v = find_summary(key);
  if (v == nullptr || std::holds_alternative<std::string>(*v)) return std::nullopt;
  return as_number(*v);
}

std::size_t ExperimentResult::param_index(std::string_view name) const {
  for (std::size_t i = 0; i < param_names.size(); ++i) {
    if (param_names[i] == name) return i;
  }
  throw InvalidArgument("result has no parameter '" + std::string(name) + "'");
}

bool operator==(const ResultRow& a, const ResultRow& b) {
  return a.params == b.params && a.mean == b.mean && a.std_error == b.std_error &&
         a.replications == b.replications && a.wall_seconds == b.wall_seconds &&
         a.per_replication == b.per_replication;
}

bool operator==(const PlotSeries& a, const PlotSeries& b) {
  return a.name == b.name && a.x_label == b.x_label && a.x == b.x && a.y == b.y && a.y_stderr == b.y_stderr;
}

bool operator==(const ResultMetadata& a, const ResultMetadata& b) {
  return a.seed == b.seed && a.grid_size == b.grid_size && a.version == b.version;
}

bool operator==(const ExperimentResult& a, const ExperimentResult& b) {
  return a.experiment == b.experiment && a.param_names == b.param_names && a.rows == b.rows &&
         a.summary == b.summary && a.plots == b.plots && a.metadata == b.metadata;
}

double as_number(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw InvalidArgument("value '" + std::get<std::string>(v) + "' is not numeric");
}

std::string format_value(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  return std::get<std::string>(v);
}

MeanAndError mean_and_error(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean_and_error: no values");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

std::optional<LineFit> fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  const double slope = sxy / sxx;
  const double r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return LineFit{slope, my - slope * mx, r2};
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv" || text == "CSV") return OutputFormat::Csv;
  if (text == "json" || text == "JSON") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------

std::string to_csv(const ExperimentResult& result, bool include_timing) {
  std::ostringstream out;
  for (const auto& name : result.param_names) out << csv_escape(name) << ',';
  out << "mean,std_error,replications";
  if (include_timing) out << ",wall_seconds";
  out << '\n';
  for (const auto& row : result.rows) {
    for (const auto& p : row.params) out << csv_escape(format_value(p)) << ',';
    out << format_double(row.mean) << ',' << format_double(row.std_error) << ',' << row.replications;
    if (include_timing) out << ',' << format_double(row.wall_seconds);
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json to_json(const ExperimentResult& result) {
  using oj = nlohmann::ordered_json;
  oj j;
  j["schema_version"] = kResultSchemaVersion;
  j["experiment"] = result.experiment;
  j["metadata"] = {{"seed", result.metadata.seed},
                   {"grid_size", result.metadata.grid_size},
                   {"version", result.metadata.version}};
  j["param_names"] = result.param_names;
  oj rows = oj::array();
  for (const auto& row : result.rows) {
    oj params = oj::array();
    for (const auto& p : row.params) params.push_back(value_to_json(p));
    oj r = {{"params", params},
            {"mean", row.mean},
            {"std_error", row.std_error},
            {"replications", row.replications},
            {"wall_seconds", row.wall_seconds}};
    if (!row.per_replication.empty()) r["per_replication"] = row.per_replication;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  oj summary = oj::array();
  for (const auto& [k, v] : result.summary) summary.push_back({{"key", k}, {"value", value_to_json(v)}});
  j["summary"] = std::move(summary);
  oj plots = oj::array();
  for (const auto& p : result.plots) {
    plots.push_back({{"name", p.name}, {"x_label", p.x_label}, {"x", p.x}, {"y", p.y}, {"y_stderr", p.y_stderr}});
  }
  j["plots"] = std::move(plots);
  return j;
}

ExperimentResult from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kResultSchemaVersion) {
      throw SchemaError("result JSON: unsupported schema version");
    }
    ExperimentResult r;
    r.experiment = j.at("experiment").get<std::string>();
    const auto& meta = j.at("metadata");
    r.metadata = {meta.at("seed").get<std::uint64_t>(), meta.at("grid_size").get<std::size_t>(),
                  meta.at("version").get<std::string>()};
    r.param_names = j.at("param_names").get<std::vector<std::string>>();
    for (const auto& jr : j.at("rows")) {
      ResultRow row;
      for (const auto& p : jr.at("params")) row.params.push_back(value_from_json(p));
      row.mean = jr.at("mean").get<double>();
      row.std_error = jr.at("std_error").get<double>();
      row.replications = jr.at("replications").get<std::size_t>();
      row.wall_seconds = jr.at("wall_seconds").get<double>();
      if (jr.contains("per_replication")) row.per_replication = jr.at("per_replication").get<std::vector<double>>();
      r.rows.push_back(std::move(row));
    }
    for (const auto& js : j.at("summary")) {
      r.summary.emplace_back(js.at("key").get<std::string>(), value_from_json(js.at("value")));
    }
    for (const auto& jp : j.at("plots")) {
      r.plots.push_back({jp.at("name").get<std::string>(), jp.at("x_label").get<std::string>(),
                         jp.at("x").get<std::vector<double>>(), jp.at("y").get<std::vector<double>>(),
                         jp.at("y_stderr").get<std::vector<double>>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("result JSON: ") + e.what());
  }
}

std::vector<std::filesystem::path> emit_plot_data(const ExperimentResult& result,
                                                  const std::filesystem::path& path) {
  std::vector<std::filesystem::path> written;
  for (const auto& series : result.plots) {
    std::filesystem::path p = path;
    p.replace_filename(path.stem().string() + "." + series.name + ".plot.csv");
    std::ostringstream out;
    out << "x,y,y_stderr\n";
    for (std::size_t i = 0; i < series.x.size(); ++i) {
      out << format_double(series.x[i]) << ',' << format_double(series.y[i]) << ','
          << format_double(i < series.y_stderr.size() ? series.y_stderr[i] : 0.0) << '\n';
    }
    write_file(p, out.str());
    written.push_back(std::move(p));
  }
  return written;
}

void emit(const ExperimentResult& result, OutputFormat format, const std::filesystem::path& path) {
  if (format == OutputFormat::Csv) {
    write_file(path, to_csv(result));
  } else {
    write_file(path, to_json(result).dump(2) + "\n");
  }
  emit_plot_data(result, path);
}

ExperimentResult read_json_result(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("result JSON: ") + e.what());
  }
}

}  // namespace fsir

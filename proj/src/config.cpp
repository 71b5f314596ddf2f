#include "fsir/errors.hpp"
#include "fsir/harness.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fsir {

namespace {

using Tokens = std::vector<std::string>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front()) {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

Tokens split_list(std::string_view text) {
  std::string body = trim(text);
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
  Tokens out;
  std::size_t start = 0;
  while (start <= body.size()) {
    const auto comma = body.find(',', start);
    const auto piece = trim(std::string_view(body).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Tokens json_tokens(const std::string& key, const nlohmann::json& v) {
  if (v.is_array()) {
    Tokens out;
    for (const auto& item : v) {
      if (item.is_array() || item.is_object()) throw ConfigError("config: nested value for '" + key + "'");
      out.push_back(item.is_string() ? item.get<std::string>() : item.dump());
    }
    return out;
  }
  if (v.is_object() || v.is_null()) throw ConfigError("config: unsupported value for '" + key + "'");
  return {v.is_string() ? v.get<std::string>() : v.dump()};
}

const std::string& single(const std::string& key, const Tokens& t) {
  if (t.size() != 1) throw ConfigError("config: '" + key + "' takes one value");
  return t.front();
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + s + "'");
  }
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  // Accept integral values written as floats, e.g. 1e5.
  const double d = to_double(key, s);
  if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + s + "'");
  }
  return static_cast<std::uint64_t>(d);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + s + "'");
}

std::vector<std::size_t> to_sizes(const std::string& key, const Tokens& t) {
  std::vector<std::size_t> out;
  for (const auto& s : t) out.push_back(static_cast<std::size_t>(to_unsigned(key, s)));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const Tokens& t) {
  std::vector<double> out;
  for (const auto& s : t) out.push_back(to_double(key, s));
  return out;
}

void apply_key(const std::string& key, const Tokens& t, ExperimentConfig& cfg) {
  using Setter = std::function<void()>;
  const std::map<std::string, Setter> setters = {
      {"experiment", [&] { cfg.experiment = parse_experiment(single(key, t)); }},
      {"models",
       [&] {
         cfg.models.clear();
         for (const auto& s : t) {
           try {
             cfg.models.push_back(parse_model(s));
           } catch (const std::invalid_argument& e) {
             throw ConfigError(std::string("config: ") + e.what());
           }
         }
       }},
      {"ns", [&] { cfg.ns = to_sizes(key, t); }},
      {"ms", [&] { cfg.ms = to_sizes(key, t); }},
      {"rhos", [&] { cfg.rhos = to_doubles(key, t); }},
      {"slices", [&] { cfg.slices = to_unsigned(key, single(key, t)); }},
      {"ds", [&] { cfg.ds = to_sizes(key, t); }},
      {"reps", [&] { cfg.replications = to_unsigned(key, single(key, t)); }},
      {"seed", [&] { cfg.seed = to_unsigned(key, single(key, t)); }},
      {"grid_size", [&] { cfg.grid_size = to_unsigned(key, single(key, t)); }},
      {"kl_terms", [&] { cfg.kl_terms = static_cast<int>(to_unsigned(key, single(key, t))); }},
      {"noise_scale", [&] { cfg.noise_scale = to_double(key, single(key, t)); }},
      {"c_m", [&] { cfg.c_m = to_double(key, single(key, t)); }},
      {"alpha", [&] { cfg.alpha = to_double(key, single(key, t)); }},
      {"beta", [&] { cfg.beta = to_double(key, single(key, t)); }},
      {"data", [&] { cfg.data_path = single(key, t); }},
      {"train_size", [&] { cfg.train_size = to_unsigned(key, single(key, t)); }},
      {"temperature_column", [&] { cfg.temperature_column = single(key, t); }},
      {"weekday", [&] { cfg.weekday = static_cast<int>(to_unsigned(key, single(key, t))); }},
      {"slice_grid", [&] { cfg.slice_grid = to_sizes(key, t); }},
      {"sub_slices", [&] { cfg.sub_slices = to_unsigned(key, single(key, t)); }},
      {"noise_basis_index", [&] { cfg.noise_basis_index = static_cast<int>(to_unsigned(key, single(key, t))); }},
      {"threads", [&] { cfg.threads = to_unsigned(key, single(key, t)); }},
      {"record_timing", [&] { cfg.record_timing = to_bool(key, single(key, t)); }},
      {"keep_replications", [&] { cfg.keep_replications = to_bool(key, single(key, t)); }},
      {"out", [&] { cfg.output = single(key, t); }},
      {"format", [&] { cfg.format = parse_format(single(key, t)); }},
  };
  static const std::map<std::string, std::string> aliases = {
      {"replications", "reps"}, {"H", "slices"},     {"data_path", "data"},   {"output", "out"},
      {"n", "ns"},              {"m", "ms"},         {"rho", "rhos"},         {"d", "ds"},
      {"model", "models"},      {"H_sub", "sub_slices"}, {"grid", "grid_size"},
  };
  std::string name = key;
  if (const auto a = aliases.find(name); a != aliases.end()) name = a->second;
  const auto it = setters.find(name);
  if (it == setters.end()) throw ConfigError("config: unknown key '" + key + "'");
  if (t.empty()) throw ConfigError("config: empty value for '" + key + "'");
  it->second();
}

}  // namespace

void apply_config_text(std::string_view text, ExperimentConfig& cfg) {
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) apply_key(key, json_tokens(key, value), cfg);
    return;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string content = trim(line);
    if (content.empty() || content.front() == '[') continue;  // blank or TOML table header
    const auto eq = content.find_first_of("=:");
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_key(trim(std::string_view(content).substr(0, eq)), split_list(std::string_view(content).substr(eq + 1)), cfg);
  }
}

void apply_config_file(const std::filesystem::path& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(buffer.str(), cfg);
}

}  // namespace fsir

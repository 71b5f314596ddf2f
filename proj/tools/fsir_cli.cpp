// Command-line front end for the simulation and real-data experiments.
#include "fsir/errors.hpp"
#include "fsir/harness.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::string out;
  std::string format;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> grid_size;
  std::string data;
};

fsir::ExperimentConfig build_config(fsir::ExperimentId id, const Overrides& o) {
  auto cfg = fsir::default_config(id);
  if (!o.config.empty()) fsir::apply_config_file(o.config, cfg);
  cfg.experiment = id;
  if (o.seed) cfg.seed = *o.seed;
  if (o.reps) cfg.replications = *o.reps;
  if (!o.out.empty()) cfg.output = o.out;
  if (!o.format.empty()) cfg.format = fsir::parse_format(o.format);
  if (o.threads) cfg.threads = *o.threads;
  if (o.grid_size) cfg.grid_size = *o.grid_size;
  if (!o.data.empty()) cfg.data_path = o.data;
  cfg.validate();
  return cfg;
}

void print_summary(const fsir::ExperimentResult& result) {
  for (const auto& [key, value] : result.summary) {
    std::cout << key << " = " << fsir::format_value(value) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional sliced inverse regression experiments"};
  app.set_version_flag("--version", fsir::library_version());
  app.require_subcommand(1);

  Overrides o;
  const std::vector<fsir::ExperimentId> ids = {fsir::ExperimentId::OptimalM, fsir::ExperimentId::ErrorComparison,
                                              fsir::ExperimentId::RealData, fsir::ExperimentId::RateCheck,
                                              fsir::ExperimentId::WsscDiagnostic};
  std::vector<CLI::App*> subs;
  for (auto id : ids) {
    auto* sub = app.add_subcommand(fsir::to_string(id));
    sub->add_option("--config", o.config, "JSON or key = value config file");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--reps", o.reps, "replications (or train/test splits)");
    sub->add_option("--out", o.out, "output file; summary only when omitted");
    sub->add_option("--format", o.format, "csv or json");
    sub->add_option("--threads", o.threads, "worker threads, 0 for all cores");
    sub->add_option("--grid-size", o.grid_size, "grid points on [0, 1]");
    sub->add_option("--data", o.data, std::string("bike hour.csv; default $") + fsir::kDataDirEnv + "/hour.csv");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  fsir::ExperimentId id = ids.front();
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) id = ids[i];
  }

  try {
    const auto cfg = build_config(id, o);
    const auto result = fsir::run_experiment(cfg);
    if (!cfg.output.empty()) fsir::emit(result, cfg.format, cfg.output);
    print_summary(result);
  } catch (const fsir::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fsir::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fsir::SchemaError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include "fsir/harness.hpp"

#include "fsir/errors.hpp"
#include "fsir/estimators.hpp"
#include "fsir/ingest.hpp"
#include "fsir/metrics.hpp"
#include "fsir/parallel.hpp"
#include "fsir/regression.hpp"
#include "fsir/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#ifndef FSIR_VERSION
#define FSIR_VERSION "0.0.0"
#endif

namespace fsir {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ExperimentResult make_result(const ExperimentConfig& cfg, std::vector<std::string> param_names,
                             std::size_t grid_size) {
  ExperimentResult r;
  r.experiment = to_string(cfg.experiment);
  r.param_names = std::move(param_names);
  r.metadata = {cfg.seed, grid_size, library_version()};
  return r;
}

ResultRow make_row(std::vector<Value> params, std::span<const double> values, double wall_seconds,
                   const ExperimentConfig& cfg) {
  const auto stats = mean_and_error(values);
  ResultRow row;
  row.params = std::move(params);
  row.mean = stats.mean;
  row.std_error = stats.std_error;
  row.replications = values.size();
  row.wall_seconds = cfg.record_timing ? wall_seconds : 0.0;
  if (cfg.keep_replications) row.per_replication.assign(values.begin(), values.end());
  return row;
}

ModelSpec model_spec(const ExperimentConfig& cfg, ModelId model, std::size_t n, const GridPtr& grid,
                     std::size_t replication) {
  return ModelSpec{model, n, grid, replication_stream(cfg.seed, replication), cfg.noise_scale, cfg.kl_terms};
}

std::string format_tag(std::string_view key, std::size_t value) {
  return std::string(key) + "=" + std::to_string(value);
}

// Inverse regression subspace span{Gamma beta_k} of a model.
SubspaceBasis inverse_regression_truth(const GroundTruth& truth, ModelId model, int kl_terms) {
  std::vector<Curve> curves;
  for (const auto& beta : truth.directions.curves()) {
    curves.push_back(gamma_times(beta, model, kl_terms));
  }
  return SubspaceBasis(std::move(curves));
}

void require_nonempty(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("config: ") + what + " must be non-empty");
}

}  // namespace

std::string library_version() { return FSIR_VERSION; }

std::string to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::OptimalM:
      return "optimal-m";
    case ExperimentId::ErrorComparison:
      return "error-comparison";
    case ExperimentId::RealData:
      return "real-data";
    case ExperimentId::WsscDiagnostic:
      return "wssc";
    case ExperimentId::RateCheck:
      return "rate-check";
  }
  return "?";
}

ExperimentId parse_experiment(std::string_view text) {
  if (text == "optimal-m") return ExperimentId::OptimalM;
  if (text == "error-comparison") return ExperimentId::ErrorComparison;
  if (text == "real-data") return ExperimentId::RealData;
  if (text == "wssc" || text == "wssc-diagnostic") return ExperimentId::WsscDiagnostic;
  if (text == "rate-check") return ExperimentId::RateCheck;
  throw ConfigError("unknown experiment '" + std::string(text) + "'");
}

std::filesystem::path default_bike_path() {
  if (const char* dir = std::getenv(kDataDirEnv); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir) / "hour.csv";
  }
  return "hour.csv";
}

// ---------------------------------------------------------------------------
// Defaults and validation

ExperimentConfig default_config(ExperimentId id) {
  ExperimentConfig cfg;
  cfg.experiment = id;
  switch (id) {
    case ExperimentId::OptimalM:
      cfg.models = {ModelId::I};
      cfg.ns = {2000, 20000, 100000};
      for (std::size_t m = 3; m <= 25; ++m) cfg.ms.push_back(m);
      cfg.replications = 50;
      break;
    case ExperimentId::ErrorComparison:
      cfg.models = {ModelId::I, ModelId::II, ModelId::III};
      cfg.ns = {20000};
      for (std::size_t m = 2; m <= 14; ++m) cfg.ms.push_back(m);
      cfg.ms.insert(cfg.ms.end(), {20, 30, 40});
      for (int r = 1; r <= 10; ++r) cfg.rhos.push_back(0.01 * r);
      for (int r : {15, 20, 25, 30}) cfg.rhos.push_back(0.01 * r);
      for (int r = 40; r <= 150; r += 10) cfg.rhos.push_back(0.01 * r);
      cfg.replications = 100;
      break;
    case ExperimentId::RealData:
      cfg.ms = {2, 4, 6, 8, 10, 12};
      for (int k : {-9, -7, -5, -3, -1, 1}) cfg.rhos.push_back(std::exp(static_cast<double>(k)));
      cfg.ds = {1, 2, 3, 4, 5};
      cfg.replications = 100;
      cfg.data_path = default_bike_path();
      break;
    case ExperimentId::WsscDiagnostic:
      cfg.models = {ModelId::III};
      cfg.ns = {10000};
      cfg.slice_grid = {5, 10, 20, 40};
      cfg.replications = 10;
      break;
    case ExperimentId::RateCheck:
      cfg.models = {ModelId::III};
      cfg.ns = {1000, 4000, 16000, 64000};
      cfg.replications = 100;
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw ConfigError("config: reps must be >= 1");
  if (grid_size < 2) throw ConfigError("config: grid_size must be >= 2");
  if (slices < 2) throw ConfigError("config: slices must be >= 2");
  if (kl_terms < 1) throw ConfigError("config: kl_terms must be >= 1");
  if (!(noise_scale >= 0.0)) throw ConfigError("config: noise_scale must be >= 0");
  switch (experiment) {
    case ExperimentId::OptimalM:
      require_nonempty(!models.empty(), "models");
      require_nonempty(!ns.empty(), "ns");
      require_nonempty(!ms.empty(), "ms");
      break;
    case ExperimentId::ErrorComparison:
      require_nonempty(!models.empty(), "models");
      require_nonempty(!ns.empty(), "ns");
      require_nonempty(!ms.empty() || !rhos.empty(), "ms or rhos");
      break;
    case ExperimentId::RealData:
      require_nonempty(!ds.empty(), "ds");
      require_nonempty(!ms.empty() || !rhos.empty(), "ms or rhos");
      if (train_size < 3) throw ConfigError("config: train_size must be >= 3");
      break;
    case ExperimentId::WsscDiagnostic:
      require_nonempty(!models.empty(), "models");
      require_nonempty(!ns.empty(), "ns");
      require_nonempty(!slice_grid.empty(), "slice_grid");
      if (sub_slices < 1) throw ConfigError("config: sub_slices must be >= 1");
      break;
    case ExperimentId::RateCheck:
      require_nonempty(!models.empty(), "models");
      require_nonempty(!ns.empty(), "ns");
      break;
  }
  for (std::size_t n : ns) {
    if (n < slices) throw ConfigError("config: every n must be >= slices");
  }
  for (std::size_t m : ms) {
    if (m < 1 || m > grid_size) throw ConfigError("config: m values must lie in [1, grid_size]");
  }
  for (double rho : rhos) {
    if (!(rho > 0.0)) throw ConfigError("config: rho values must be positive");
  }
  for (std::size_t d : ds) {
    if (d < 1 || d > slices) throw ConfigError("config: d values must lie in [1, slices]");
  }
  if (alpha.has_value() != beta.has_value()) throw ConfigError("config: alpha and beta go together");
}

// ---------------------------------------------------------------------------
// optimal-m

ExperimentResult run_optimal_m(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelId model = cfg.models.front();
  const GridPtr grid = make_grid(cfg.grid_size);
  const GroundTruth truth = ground_truth(model, grid, cfg.kl_terms);
  const std::size_t reps = cfg.replications;
  const std::size_t nm = cfg.ms.size();

  // errors[(ni * reps + r) * nm + mi]
  std::vector<double> errors(cfg.ns.size() * reps * nm, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> task_seconds(cfg.ns.size() * reps, 0.0);
  parallel_for(cfg.ns.size() * reps, cfg.threads, [&](std::size_t task) {
    const auto start = Clock::now();
    const std::size_t ni = task / reps;
    const std::size_t r = task % reps;
    const auto gen = generate(model_spec(cfg, model, cfg.ns[ni], grid, r));
    const FsirPipeline pipeline(gen.sample, cfg.slices);
    for (std::size_t mi = 0; mi < nm; ++mi) {
      if (cfg.ms[mi] < truth.d) continue;
      const auto est = pipeline.truncated(truth.d, cfg.ms[mi]);
      errors[task * nm + mi] = subspace_error(est.span(), gen.truth.directions);
    }
    task_seconds[task] = seconds_since(start);
  });

  ExperimentResult result = make_result(cfg, {"n", "m"}, cfg.grid_size);
  std::vector<double> log_n, log_mstar;
  for (std::size_t ni = 0; ni < cfg.ns.size(); ++ni) {
    const std::size_t n = cfg.ns[ni];
    double wall = 0.0;
    for (std::size_t r = 0; r < reps; ++r) wall += task_seconds[ni * reps + r];
    PlotSeries curve{"error_vs_m_n" + std::to_string(n), "m", {}, {}, {}};
    std::size_t best = nm;
    double best_mean = std::numeric_limits<double>::infinity();
    for (std::size_t mi = 0; mi < nm; ++mi) {
      if (cfg.ms[mi] < truth.d) continue;
      std::vector<double> values(reps);
      for (std::size_t r = 0; r < reps; ++r) values[r] = errors[(ni * reps + r) * nm + mi];
      result.rows.push_back(make_row({static_cast<std::int64_t>(n), static_cast<std::int64_t>(cfg.ms[mi])},
                                     values, wall / static_cast<double>(nm), cfg));
      const auto& row = result.rows.back();
      curve.x.push_back(static_cast<double>(cfg.ms[mi]));
      curve.y.push_back(row.mean);
      curve.y_stderr.push_back(row.std_error);
      if (row.mean < best_mean) {
        best_mean = row.mean;
        best = mi;
      }
    }
    result.plots.push_back(std::move(curve));
    if (best == nm) continue;
    const std::size_t m_star = cfg.ms[best];
    const bool interior = best > 0 && best + 1 < nm;
    result.summary.emplace_back("m_star[" + format_tag("n", n) + "]", static_cast<std::int64_t>(m_star));
    result.summary.emplace_back("min_error[" + format_tag("n", n) + "]", best_mean);
    result.summary.emplace_back("interior_min[" + format_tag("n", n) + "]", static_cast<std::int64_t>(interior));
    log_n.push_back(std::log(static_cast<double>(n)));
    log_mstar.push_back(std::log(static_cast<double>(m_star)));
  }
  result.plots.push_back({"log_mstar_vs_log_n", "log_n", log_n, log_mstar, std::vector<double>(log_n.size(), 0.0)});

  if (const auto fit = fit_line(log_n, log_mstar)) {
    result.summary.emplace_back("slope", fit->slope);
    result.summary.emplace_back("intercept", fit->intercept);
    result.summary.emplace_back("r_squared", fit->r_squared);
    result.summary.emplace_back("one_minus_r_squared", 1.0 - fit->r_squared);
    result.summary.emplace_back("slope_status", std::string(log_n.size() < 3 ? "low-confidence" : "ok"));
  } else {
    result.summary.emplace_back("slope_status", std::string("undefined"));
  }
  if (truth.rate) {
    result.summary.emplace_back("theory_slope", 1.0 / (truth.rate->alpha + 2.0 * truth.rate->beta));
  }
  return result;
}

// ---------------------------------------------------------------------------
// error-comparison

ExperimentResult run_error_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  const GridPtr grid = make_grid(cfg.grid_size);
  const std::size_t n = cfg.ns.front();
  const std::size_t reps = cfg.replications;
  const std::size_t nm = cfg.ms.size();
  const std::size_t nr = cfg.rhos.size();
  const std::size_t width = nm + nr;
  const std::size_t nmodels = cfg.models.size();

  std::vector<double> errors(nmodels * reps * width, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> fsir_seconds(nmodels * reps, 0.0), rfsir_seconds(nmodels * reps, 0.0);
  parallel_for(nmodels * reps, cfg.threads, [&](std::size_t task) {
    auto start = Clock::now();
    const ModelId model = cfg.models[task / reps];
    const std::size_t r = task % reps;
    const auto gen = generate(model_spec(cfg, model, n, grid, r));
    const FsirPipeline pipeline(gen.sample, cfg.slices);
    const std::size_t d = gen.truth.d;
    const double shared = seconds_since(start);
    start = Clock::now();
    for (std::size_t mi = 0; mi < nm; ++mi) {
      if (cfg.ms[mi] < d) continue;
      errors[task * width + mi] = subspace_error(pipeline.truncated(d, cfg.ms[mi]).span(), gen.truth.directions);
    }
    fsir_seconds[task] = shared / 2.0 + seconds_since(start);
    start = Clock::now();
    for (std::size_t ri = 0; ri < nr; ++ri) {
      errors[task * width + nm + ri] = subspace_error(pipeline.ridge(d, cfg.rhos[ri]).span(), gen.truth.directions);
    }
    rfsir_seconds[task] = shared / 2.0 + seconds_since(start);
  });

  ExperimentResult result = make_result(cfg, {"model", "method", "tuning", "is_minimum"}, cfg.grid_size);
  double max_se = 0.0;
  for (std::size_t mo = 0; mo < nmodels; ++mo) {
    const std::string model = to_string(cfg.models[mo]);
    double fsir_wall = 0.0, rfsir_wall = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      fsir_wall += fsir_seconds[mo * reps + r];
      rfsir_wall += rfsir_seconds[mo * reps + r];
    }
    for (const std::string method : {"fsir", "rfsir"}) {
      const bool is_fsir = method == "fsir";
      const std::size_t begin = is_fsir ? 0 : nm;
      const std::size_t end = is_fsir ? nm : width;
      const double wall = (is_fsir ? fsir_wall : rfsir_wall) / static_cast<double>(std::max<std::size_t>(1, end - begin));
      const std::size_t first_row = result.rows.size();
      PlotSeries series{model + "_" + method, is_fsir ? "m" : "rho", {}, {}, {}};
      std::size_t best_row = result.rows.size();
      for (std::size_t c = begin; c < end; ++c) {
        if (std::isnan(errors[(mo * reps) * width + c])) continue;
        std::vector<double> values(reps);
        for (std::size_t r = 0; r < reps; ++r) values[r] = errors[(mo * reps + r) * width + c];
        const double tuning = is_fsir ? static_cast<double>(cfg.ms[c]) : cfg.rhos[c - nm];
        result.rows.push_back(make_row({model, method, tuning, std::int64_t{0}}, values, wall, cfg));
        const auto& row = result.rows.back();
        max_se = std::max(max_se, row.std_error);
        series.x.push_back(tuning);
        series.y.push_back(row.mean);
        series.y_stderr.push_back(row.std_error);
        if (best_row + 1 == result.rows.size() || row.mean < result.rows[best_row].mean) {
          best_row = result.rows.size() - 1;
        }
      }
      if (result.rows.size() > first_row) {
        auto& best = result.rows[best_row];
        best.params[3] = std::int64_t{1};
        const std::string key = "[" + model + "," + method + "]";
        result.summary.emplace_back("min_error" + key, best.mean);
        result.summary.emplace_back("min_std_error" + key, best.std_error);
        result.summary.emplace_back("argmin" + key, best.params[2]);
      }
      result.plots.push_back(std::move(series));
    }
  }
  result.summary.emplace_back("max_std_error", max_se);
  return result;
}

// ---------------------------------------------------------------------------
// rate-check

ExperimentResult run_rate_check(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelId model = cfg.models.front();
  const GridPtr grid = make_grid(cfg.grid_size);
  const GroundTruth truth = ground_truth(model, grid, cfg.kl_terms);
  const SubspaceBasis se_truth = inverse_regression_truth(truth, model, cfg.kl_terms);
  std::optional<RateTruncation> rule;
  if (cfg.alpha) {
    rule = RateTruncation{*cfg.alpha, *cfg.beta, cfg.c_m};
  } else if (truth.rate) {
    rule = RateTruncation{truth.rate->alpha, truth.rate->beta, cfg.c_m};
  }
  const std::size_t d = truth.d;
  const std::size_t reps = cfg.replications;
  const std::size_t nn = cfg.ns.size();

  std::vector<double> se_err(nn * reps), cs_err(nn * reps, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> se_seconds(nn * reps), cs_seconds(nn * reps);
  parallel_for(nn * reps, cfg.threads, [&](std::size_t task) {
    auto start = Clock::now();
    const std::size_t ni = task / reps;
    const auto gen = generate(model_spec(cfg, model, cfg.ns[ni], grid, task % reps));
    const FsirPipeline pipeline(gen.sample, cfg.slices);
    const double e = subspace_error(SubspaceBasis(pipeline.inverse_regression_directions(d)), se_truth);
    se_err[task] = e * e;
    se_seconds[task] = seconds_since(start);
    start = Clock::now();
    if (rule) {
      const std::size_t m = std::max(d, rate_truncation_level(cfg.ns[ni], *rule));
      const double c = subspace_error(pipeline.truncated(d, m).span(), truth.directions);
      cs_err[task] = c * c;
    }
    cs_seconds[task] = seconds_since(start);
  });

  ExperimentResult result = make_result(cfg, {"target", "n", "m"}, cfg.grid_size);
  struct Target {
    const char* name;
    const std::vector<double>* errs;
    const std::vector<double>* secs;
  };
  for (const Target& target : {Target{"inverse_regression", &se_err, &se_seconds},
                               Target{"central_space", &cs_err, &cs_seconds}}) {
    const bool central = std::string_view(target.name) == "central_space";
    if (central && !rule) {
      result.summary.emplace_back("central_space_status", std::string("skipped: no rate constants"));
      continue;
    }
    std::vector<double> log_n, log_mse, log_mean;
    PlotSeries series{target.name, "log_n", {}, {}, {}};
    for (std::size_t ni = 0; ni < nn; ++ni) {
      std::vector<double> values((*target.errs).begin() + static_cast<std::ptrdiff_t>(ni * reps),
                                 (*target.errs).begin() + static_cast<std::ptrdiff_t>((ni + 1) * reps));
      double wall = 0.0;
      for (std::size_t r = 0; r < reps; ++r) wall += (*target.secs)[ni * reps + r];
      const std::int64_t m = central ? static_cast<std::int64_t>(std::max(d, rate_truncation_level(cfg.ns[ni], *rule)))
                                     : std::int64_t{0};
      result.rows.push_back(make_row({std::string(target.name), static_cast<std::int64_t>(cfg.ns[ni]), m}, values, wall, cfg));
      const auto& row = result.rows.back();
      double mean_abs = 0.0;
      for (double v : values) mean_abs += std::sqrt(v);
      mean_abs /= static_cast<double>(values.size());
      log_n.push_back(std::log(static_cast<double>(cfg.ns[ni])));
      log_mse.push_back(std::log(row.mean));
      log_mean.push_back(std::log(mean_abs));
      series.x.push_back(log_n.back());
      series.y.push_back(log_mse.back());
      series.y_stderr.push_back(row.mean > 0.0 ? row.std_error / row.mean : 0.0);
    }
    result.plots.push_back(std::move(series));
    const std::string key = std::string("[") + target.name + "]";
    if (const auto fit = fit_line(log_n, log_mse)) {
      result.summary.emplace_back("slope" + key, fit->slope);
      result.summary.emplace_back("r_squared" + key, fit->r_squared);
      if (const auto fit_abs = fit_line(log_n, log_mean)) {
        result.summary.emplace_back("slope_unsquared" + key, fit_abs->slope);
      }
      result.summary.emplace_back("slope_status" + key, std::string(nn < 3 ? "low-confidence" : "ok"));
    } else {
      result.summary.emplace_back("slope_status" + key, std::string("undefined"));
    }
  }
  result.summary.emplace_back("theory_slope[inverse_regression]", -1.0);
  if (rule) {
    // Rate of the unsquared error; the squared error decays twice as fast.
    result.summary.emplace_back("theory_rate_unsquared[central_space]",
                                -(2.0 * rule->beta - 1.0) / (rule->alpha + 2.0 * rule->beta));
  }
  result.summary.emplace_back("low_confidence", static_cast<std::int64_t>(nn < 3));
  return result;
}

// ---------------------------------------------------------------------------
// wssc

ExperimentResult run_wssc(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelId model = cfg.models.front();
  const std::size_t n = cfg.ns.front();
  const GridPtr grid = make_grid(cfg.grid_size);
  const GroundTruth truth = ground_truth(model, grid, cfg.kl_terms);
  for (std::size_t h : cfg.slice_grid) {
    if (h < 1 || h * cfg.sub_slices > n) throw ConfigError("config: need slices * sub_slices <= n");
  }

  // Index direction: the first true direction. Noise direction: a basis
  // function made L^2-orthogonal to span{Gamma beta_k}, so that its
  // projection of X is uncorrelated with every index.
  const Curve index_dir = (1.0 / l2_norm(truth.directions.curves().front())) * truth.directions.curves().front();
  const auto se = inverse_regression_truth(truth, model, cfg.kl_terms).orthonormal_curves();
  Curve noise_dir = model_basis(model, cfg.noise_basis_index, grid);
  for (const auto& q : se) noise_dir -= inner_product(noise_dir, q) * q;
  noise_dir *= 1.0 / l2_norm(noise_dir);

  const std::size_t reps = cfg.replications;
  const std::size_t nh = cfg.slice_grid.size();
  std::vector<double> ratios(reps * 2 * nh);
  std::vector<double> seconds(reps);
  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    const auto start = Clock::now();
    const auto gen = generate(model_spec(cfg, model, n, grid, r));
    for (std::size_t hi = 0; hi < nh; ++hi) {
      ratios[(r * 2 + 0) * nh + hi] = wssc_ratio(gen.sample, cfg.slice_grid[hi], cfg.sub_slices, index_dir);
      ratios[(r * 2 + 1) * nh + hi] = wssc_ratio(gen.sample, cfg.slice_grid[hi], cfg.sub_slices, noise_dir);
    }
    seconds[r] = seconds_since(start);
  });

  ExperimentResult result = make_result(cfg, {"direction", "H"}, cfg.grid_size);
  double wall = 0.0;
  for (double s : seconds) wall += s;
  for (std::size_t dir = 0; dir < 2; ++dir) {
    const std::string name = dir == 0 ? "index" : "noise";
    PlotSeries series{name, "H", {}, {}, {}};
    std::size_t inversions = 0;
    double lo = std::numeric_limits<double>::infinity(), hi_v = -lo;
    for (std::size_t hi = 0; hi < nh; ++hi) {
      std::vector<double> values(reps);
      for (std::size_t r = 0; r < reps; ++r) values[r] = ratios[(r * 2 + dir) * nh + hi];
      result.rows.push_back(make_row({name, static_cast<std::int64_t>(cfg.slice_grid[hi])}, values,
                                     wall / static_cast<double>(2 * nh), cfg));
      const double mean = result.rows.back().mean;
      if (!series.y.empty() && mean >= series.y.back()) ++inversions;
      lo = std::min(lo, mean);
      hi_v = std::max(hi_v, mean);
      series.x.push_back(static_cast<double>(cfg.slice_grid[hi]));
      series.y.push_back(mean);
      series.y_stderr.push_back(result.rows.back().std_error);
    }
    result.plots.push_back(std::move(series));
    result.summary.emplace_back("inversions[" + name + "]", static_cast<std::int64_t>(inversions));
    result.summary.emplace_back("min_ratio[" + name + "]", lo);
    result.summary.emplace_back("max_ratio[" + name + "]", hi_v);
  }
  return result;
}

// ---------------------------------------------------------------------------
// real-data

ExperimentResult run_real_data(const ExperimentConfig& cfg) {
  cfg.validate();
  BikeLoadOptions options;
  options.temperature_column = cfg.temperature_column;
  options.weekday = cfg.weekday;
  const BikeLoadResult loaded = load_bike_csv(cfg.data_path, options);
  const FunctionalSample sample = loaded.sample();
  const std::size_t total = sample.size();
  if (cfg.train_size >= total) {
    throw ConfigError("config: train_size must be smaller than the " + std::to_string(total) + " loaded curves");
  }
  if (cfg.slices > cfg.train_size) throw ConfigError("config: slices exceed train_size");
  const std::size_t g = sample.grid().size();

  struct Cell {
    std::string method;
    std::size_t d;
    double tuning;
  };
  std::vector<Cell> cells;
  for (std::size_t d : cfg.ds) {
    for (std::size_t m : cfg.ms) {
      if (m >= d && m <= g) cells.push_back({"fsir", d, static_cast<double>(m)});
    }
    for (double rho : cfg.rhos) cells.push_back({"rfsir", d, rho});
  }

  const std::size_t reps = cfg.replications;
  std::vector<double> mses(reps * cells.size());
  std::vector<double> seconds(reps * cells.size());
  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    CounterStream stream(replication_stream(cfg.seed, r));
    const auto perm = permutation(total, stream);
    const std::span<const std::size_t> all(perm);
    const FunctionalSample train = sample.subset(all.first(cfg.train_size));
    const FunctionalSample test = sample.subset(all.subspan(cfg.train_size));
    const FsirPipeline pipeline(train, cfg.slices);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto start = Clock::now();
      const Cell& cell = cells[c];
      const auto est = cell.method == "fsir"
                           ? pipeline.truncated(cell.d, static_cast<std::size_t>(cell.tuning))
                           : pipeline.ridge(cell.d, cell.tuning);
      const GpModel gp = fit_gp(reduce(est, train), train.responses());
      mses[r * cells.size() + c] = mse(gp.predict(reduce(est, test)), test.responses());
      seconds[r * cells.size() + c] = seconds_since(start);
    }
  });

  ExperimentResult result = make_result(cfg, {"method", "d", "tuning"}, g);
  std::map<std::string, std::size_t> best;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> values(reps);
    double wall = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      values[r] = mses[r * cells.size() + c];
      wall += seconds[r * cells.size() + c];
    }
    const Cell& cell = cells[c];
    result.rows.push_back(make_row({cell.method, static_cast<std::int64_t>(cell.d), cell.tuning}, values, wall, cfg));
    auto it = best.find(cell.method);
    if (it == best.end() || result.rows.back().mean < result.rows[it->second].mean) {
      best[cell.method] = result.rows.size() - 1;
    }
  }
  for (std::size_t d : cfg.ds) {
    for (const std::string method : {"fsir", "rfsir"}) {
      PlotSeries series{method + "_d" + std::to_string(d), method == "fsir" ? "m" : "rho", {}, {}, {}};
      for (const auto& row : result.rows) {
        if (std::get<std::string>(row.params[0]) == method && std::get<std::int64_t>(row.params[1]) == static_cast<std::int64_t>(d)) {
          series.x.push_back(as_number(row.params[2]));
          series.y.push_back(row.mean);
          series.y_stderr.push_back(row.std_error);
        }
      }
      if (!series.x.empty()) result.plots.push_back(std::move(series));
    }
  }
  result.summary.emplace_back("curves", static_cast<std::int64_t>(total));
  result.summary.emplace_back("incomplete_days", static_cast<std::int64_t>(loaded.incomplete_days));
  for (const auto& [method, row] : best) {
    const auto& rr = result.rows[row];
    std::ostringstream cell;
    cell << "d=" << format_value(rr.params[1]) << "," << (method == "fsir" ? "m=" : "rho=") << format_value(rr.params[2]);
    result.summary.emplace_back("best_mse[" + method + "]", rr.mean);
    result.summary.emplace_back("best_cell[" + method + "]", cell.str());
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentId::OptimalM:
      return run_optimal_m(cfg);
    case ExperimentId::ErrorComparison:
      return run_error_comparison(cfg);
    case ExperimentId::RealData:
      return run_real_data(cfg);
    case ExperimentId::WsscDiagnostic:
      return run_wssc(cfg);
    case ExperimentId::RateCheck:
      return run_rate_check(cfg);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace fsir

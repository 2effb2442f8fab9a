#include "scenario_sizer/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include "scenario_sizer/experiment.hpp"

namespace scenario_sizer::cli {

namespace {

spdlog::level::level_enum level_from_env() {
  const char* raw = std::getenv("SCENARIO_SIZER_LOG");
  if (raw == nullptr) return spdlog::level::warn;
  const std::string v(raw);
  if (v == "error") return spdlog::level::err;
  if (v == "info") return spdlog::level::info;
  if (v == "debug") return spdlog::level::debug;
  return spdlog::level::warn;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err, const std::filesystem::path* sidecar) {
  auto console = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  console->set_level(level_from_env());
  console->set_pattern("[%l] %v");
  std::vector<spdlog::sink_ptr> sinks{console};
  if (sidecar != nullptr) {
    auto file = std::make_shared<spdlog::sinks::basic_file_sink_mt>(sidecar->string(), true);
    file->set_level(spdlog::level::debug);
    file->set_pattern("%Y-%m-%dT%H:%M:%S.%e [%l] %v");
    sinks.push_back(file);
  }
  auto logger = std::make_shared<spdlog::logger>("scenario_sizer", sinks.begin(), sinks.end());
  logger->set_level(spdlog::level::debug);
  logger->flush_on(spdlog::level::debug);
  return logger;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string trace_name(const ExperimentConfig& cfg, int rep, const char* ext) {
  if (cfg.replications == 1) return fmt::format("trace.{}", ext);
  return fmt::format("trace_rep{}.{}", rep, ext);
}

struct ReplicationResult {
  std::vector<TraceRecord> trace;
  std::string error;
  double seconds = 0.0;
};

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    ConfigMap map = load_config_file(options.config);
    for (const auto& o : options.overrides) apply_override(map, o);
    if (options.seed) map["experiment.seed"] = std::to_string(*options.seed);
    if (options.replications) map["experiment.replications"] = std::to_string(*options.replications);
    if (options.steps) map["experiment.steps"] = std::to_string(*options.steps);
    if (options.output_dir) map["experiment.output_dir"] = options.output_dir->string();
    cfg = experiment_from_config(map);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  if (options.jobs < 1) {
    err << "error: --jobs must be at least 1\n";
    return exit_usage;
  }

  try {
    std::filesystem::create_directories(cfg.output_dir);
    const auto sidecar = cfg.output_dir / "run.log";
    auto log = make_logger(err, &sidecar);
    log->info("problem {} with {} steps, {} replication(s), seed {}", cfg.problem_id, cfg.steps,
              cfg.replications, cfg.seed);

    std::vector<ReplicationResult> results(static_cast<std::size_t>(cfg.replications));
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int r = next++; r < cfg.replications; r = next++) {
        auto& slot = results[static_cast<std::size_t>(r)];
        const auto started = std::chrono::steady_clock::now();
        try {
          const auto problem = make_problem(cfg);
          slot.trace = run(*problem, cfg.controller, cfg.steps, cfg.seed + static_cast<std::uint64_t>(r));
        } catch (const std::exception& e) {
          slot.error = e.what();
        }
        slot.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      }
    };
    const int workers = std::min(options.jobs, cfg.replications);
    std::vector<std::thread> pool;
    for (int k = 1; k < workers; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<ReplicationSummary> rows;
    for (int r = 0; r < cfg.replications; ++r) {
      const auto& res = results[static_cast<std::size_t>(r)];
      if (!res.error.empty()) {
        log->error("replication {} failed: {}", r, res.error);
        return exit_runtime;
      }
      const auto seed = cfg.seed + static_cast<std::uint64_t>(r);
      write_file(cfg.output_dir / trace_name(cfg, r, "csv"),
                 trace_csv(res.trace, cfg.controller.epsilon, options.timing));
      if (options.plot) {
        write_file(cfg.output_dir / trace_name(cfg, r, "svg"),
                   trace_svg(res.trace, cfg.controller.epsilon, cfg.controller.beta));
      }
      rows.push_back(summarize(res.trace, cfg.controller.epsilon, r, seed));
      double step_ms = 0.0;
      for (const auto& rec : res.trace) step_ms += rec.elapsed.count();
      log->info("replication {} (seed {}): {:.3f} s wall, {:.3f} ms in steps, freq(v <= eps) = {}", r, seed,
                res.seconds, step_ms, rows.back().within_tolerance);
    }
    write_file(cfg.output_dir / "summary.csv", summary_csv(rows));

    double mean_freq = 0.0;
    for (const auto& s : rows) mean_freq += s.within_tolerance;
    mean_freq /= static_cast<double>(rows.size());
    out << fmt::format("wrote {} replication(s) to {}\n", rows.size(), cfg.output_dir.string());
    out << fmt::format("mean freq(v <= {}) = {}\n", cfg.controller.epsilon, mean_freq);
    return exit_ok;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}

int cmd_fit(const FitOptions& options, std::ostream& out, std::ostream& err) {
  Dataset data;
  try {
    std::ifstream in(options.csv);
    if (!in) throw ConfigError("cannot read " + options.csv.string());
    data = read_dataset_csv(in);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  try {
    auto log = make_logger(err, nullptr);
    const FitResult result = fit(data);
    for (const auto& iv : result.intervals) {
      if (iv.iteration_cap_hit) log->warn("Newton hit its iteration cap on ({}, {})", iv.lower, iv.upper);
      if (iv.bisection_fallback) log->debug("bisection fallback on ({}, {})", iv.lower, iv.upper);
    }
    out << fmt::format("points {}\n", data.size());
    if (result.flat()) {
      out << "theta flat\n";
      out << fmt::format("loglik {}\n", result.loglik);
      if (options.plot) log->warn("likelihood is flat; no overlay written");
      return exit_ok;
    }
    out << fmt::format("theta {}\n", *result.theta);
    out << fmt::format("loglik {}\n", result.loglik);
    if (options.plot) {
      SampleSize n = 0;
      if (options.overlay_n) {
        n = *options.overlay_n;
      } else {
        // Most frequent sample size in the data.
        std::map<SampleSize, std::size_t> counts;
        for (const auto& p : data) ++counts[p.n];
        n = std::max_element(counts.begin(), counts.end(),
                             [](const auto& a, const auto& b) { return a.second < b.second; })
                ->first;
      }
      write_file(*options.plot, fit_overlay_svg(data, *result.theta, n));
    }
    return exit_ok;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}

int cmd_size(const SizerQuery& query, std::ostream& out, std::ostream& err) {
  try {
    validate(query);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  try {
    out << optimal_sample_size(query) << '\n';
    return exit_ok;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive sample-size selection for repetitive scenario design"};
  app.require_subcommand(1);

  RunOptions run_opts;
  std::uint64_t seed = 0;
  int reps = 0;
  std::int64_t steps = 0;
  std::string out_dir;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a config file");
  run_cmd->add_option("--config", run_opts.config, "Config file (key = value lines or JSON)")->required();
  run_cmd->add_option("--set", run_opts.overrides, "Override a config key: key=value");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Base seed; replication r uses seed + r");
  auto* reps_opt = run_cmd->add_option("--reps", reps, "Number of replications");
  auto* steps_opt = run_cmd->add_option("--steps", steps, "Steps per replication");
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--jobs", run_opts.jobs, "Replications run in parallel")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--plot", run_opts.plot, "Also write SVG trace plots");
  run_cmd->add_flag("--timing", run_opts.timing, "Write wall-clock step times into the trace CSV");

  FitOptions fit_opts;
  SampleSize overlay_n = 0;
  std::string plot_path;
  auto* fit_cmd = app.add_subcommand("fit", "Fit theta to a CSV of v,N[,w] rows");
  fit_cmd->add_option("csv", fit_opts.csv, "Input CSV")->required();
  auto* overlay_opt = fit_cmd->add_option("--overlay-n", overlay_n, "Sample size used for the overlay plot");
  auto* plot_opt = fit_cmd->add_option("--plot", plot_path, "Write a histogram/pdf overlay SVG here");

  SizerQuery query;
  auto* size_cmd = app.add_subcommand("size", "Optimal sample size for a given theta");
  size_cmd->add_option("--theta", query.theta, "Shape parameter theta")->required();
  size_cmd->add_option("--epsilon", query.epsilon, "Risk tolerance");
  size_cmd->add_option("--beta", query.beta, "Required confidence");
  size_cmd->add_option("--n-max", query.n_max, "Upper clamp on N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (*run_cmd) {
      if (*seed_opt) run_opts.seed = seed;
      if (*reps_opt) run_opts.replications = reps;
      if (*steps_opt) run_opts.steps = steps;
      if (*out_opt) run_opts.output_dir = out_dir;
      return cmd_run(run_opts, out, err);
    }
    if (*fit_cmd) {
      if (*overlay_opt) fit_opts.overlay_n = overlay_n;
      if (*plot_opt) fit_opts.plot = plot_path;
      return cmd_fit(fit_opts, out, err);
    }
    if (*size_cmd) return cmd_size(query, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_usage;
}

}  // namespace scenario_sizer::cli

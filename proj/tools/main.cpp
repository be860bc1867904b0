#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "driver.hpp"
#include "levysup/numerics.hpp"
#include "levysup/sample_io.hpp"

namespace {

using levysup::cli::ExperimentConfig;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

template <class T>
void override_if(const CLI::Option* opt, T& dst, const T& value) {
  if (opt->count() > 0) dst = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo checks of supremum identities for spectrally positive Levy processes"};
  app.set_version_flag("--version", "levysup 0.1.0");

  std::string verb, model, config_path, out, sampler, pathwise;
  std::uint64_t seed = 0, event_cap = 0;
  std::size_t reps = 0, paths = 0;
  unsigned workers = 0, level = 0;
  double alpha = 0, z = 0, t = 0, bin_width = 0, y = 0, horizon = 0, gap_k = 0;
  std::vector<unsigned> levels;
  std::vector<double> lambdas;

  app.add_option("experiment", verb, "Experiment to run")->required()->check(CLI::IsMember(levysup::cli::verbs()));
  auto* o_model = app.add_option("--model", model, "Preset (" + join(levysup::preset_names()) + ") or config model name")
                      ->envname("LEVYSUP_MODEL");
  auto* o_config = app.add_option("--config", config_path, "Key-value config file")->envname("LEVYSUP_CONFIG");
  auto* o_seed = app.add_option("--seed", seed, "Master seed (required)")->envname("LEVYSUP_SEED");
  auto* o_reps = app.add_option("--reps", reps, "Replications")->envname("LEVYSUP_REPS");
  auto* o_out = app.add_option("--out", out, "Output directory")->envname("LEVYSUP_OUT");
  auto* o_workers = app.add_option("--workers", workers, "Worker threads (0: all cores)")->envname("LEVYSUP_WORKERS");
  auto* o_alpha = app.add_option("--alpha", alpha, "KS significance level")->envname("LEVYSUP_ALPHA");
  auto* o_z = app.add_option("--z", z, "z multiplier for proportion gates");
  auto* o_level = app.add_option("--level", level, "Truncate an infinite-activity C at 1/n");
  auto* o_levels = app.add_option("--levels", levels, "Convergence levels")->delimiter(',');
  auto* o_lambdas = app.add_option("--lambdas", lambdas, "Laplace transform grid")->delimiter(',');
  auto* o_t = app.add_option("--t", t, "Horizon for takacs");
  auto* o_bin = app.add_option("--bin-width", bin_width, "Bin width for takacs");
  auto* o_y = app.add_option("--y", y, "Level (< 0) for hitting");
  auto* o_gap = app.add_option("--gap-k", gap_k, "Gap truncation K");
  auto* o_cap = app.add_option("--event-cap", event_cap, "Per-replication event cap");
  auto* o_sampler = app.add_option("--sampler", sampler, "sample: sigma | geometric | first-passage");
  auto* o_pathwise = app.add_option("--pathwise", pathwise, "convergence: also run the cpp or truncation path study");
  auto* o_paths = app.add_option("--paths", paths, "Paths for the pathwise study");
  auto* o_horizon = app.add_option("--horizon", horizon, "Path horizon for the pathwise study");
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Only print the final status line");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg;
    if (o_config->count() > 0) levysup::cli::apply_file_settings(cfg, levysup::KeyValueConfig::load(config_path));
    cfg.experiment = verb;
    override_if(o_model, cfg.model, model);
    if (o_seed->count() > 0) cfg.seed = seed;
    override_if(o_reps, cfg.reps, reps);
    if (o_out->count() > 0) cfg.out = out;
    override_if(o_workers, cfg.workers, workers);
    override_if(o_alpha, cfg.alpha, alpha);
    override_if(o_z, cfg.z, z);
    override_if(o_level, cfg.level, level);
    override_if(o_levels, cfg.levels, levels);
    override_if(o_lambdas, cfg.lambdas, lambdas);
    override_if(o_t, cfg.t, t);
    override_if(o_bin, cfg.bin_width, bin_width);
    override_if(o_y, cfg.y, y);
    override_if(o_gap, cfg.gap_K, gap_k);
    override_if(o_cap, cfg.event_cap, event_cap);
    override_if(o_sampler, cfg.sampler, sampler);
    override_if(o_pathwise, cfg.pathwise, pathwise);
    override_if(o_paths, cfg.paths, paths);
    override_if(o_horizon, cfg.horizon, horizon);

    auto result = levysup::cli::run(cfg);
    const auto summary = levysup::cli::write_summary(cfg, result);
    if (!quiet) {
      for (const auto& g : result.gates)
        std::printf("%s  %-34s statistic=%-12s threshold=%-12s (%s, expected %s)\n", g.passed() ? "PASS" : "FAIL",
                    g.report.test.c_str(), levysup::format_double(g.report.statistic).c_str(),
                    levysup::format_double(g.report.threshold).c_str(), to_string(g.report.verdict).c_str(),
                    to_string(g.expected).c_str());
      std::printf("summary: %s\n", summary.string().c_str());
    }
    std::printf("%s: %s\n", verb.c_str(), result.passed() ? "passed" : "failed");
    return result.exit_code();
  } catch (const levysup::cli::RegimeError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 2;
  } catch (const levysup::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

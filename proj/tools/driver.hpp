#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levysup/approx.hpp"
#include "levysup/model_config.hpp"
#include "levysup/pathsim.hpp"
#include "levysup/stats.hpp"

namespace levysup::cli {

/// Raised when a model falls outside the regime an experiment is defined for.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;
  std::string model = "A";
  std::size_t reps = 100'000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;  // 0: available parallelism
  double alpha = 0.05;
  double z = 3.0;
  std::filesystem::path out = "levysup-out";

  double gap_K = 40.0;
  double min_time_T = 0.0;
  std::uint64_t event_cap = 10'000'000;
  double max_bias = 1e-4;
  double max_discard = 1e-3;

  unsigned level = 0;  // truncation 1/n for an infinite-activity C; 0 = none
  std::vector<unsigned> levels;
  std::vector<double> lambdas{0.5, 1.0, 2.0, 5.0};
  std::size_t min_covered = 3;

  double t = 2.0;
  double bin_width = 0.1;
  double takacs_tol = 0.02;
  double y = -2.0;

  std::string sampler = "sigma";  // sample verb: sigma | geometric | first-passage
  std::string pathwise;           // convergence verb: "" | cpp | truncation
  std::size_t paths = 100;
  double horizon = 20.0;
  double final_ks = 0.01;

  KeyValueConfig file;

  unsigned resolved_workers() const;
  std::uint64_t require_seed() const;
  TruncationPolicy policy_for(const ProcessSpec& spec, bool hitting = false) const;
  nlohmann::json to_json() const;
};

/// Applies top-level keys of a config file (reps, seed, alpha, levels, ...).
void apply_file_settings(ExperimentConfig& cfg, const KeyValueConfig& file);

/// One pass/fail condition. A gate passes when the report's verdict equals
/// the expected one.
struct Gate {
  TestReport report;
  Verdict expected = Verdict::consistent;
  bool passed() const { return report.verdict == expected; }
};

struct ExperimentResult {
  std::string verb;
  std::vector<Gate> gates;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::filesystem::path> files;

  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
};

nlohmann::json to_json(const TestReport& r);
nlohmann::json to_json(const SampleSet& s);

/// Gate built from a scalar bound: consistent iff value <= limit.
TestReport bound_report(std::string name, double value, double limit, std::string basis);

/// Model named by cfg.model with C truncated at cfg.level when requested.
ProcessSpec load_model(const ExperimentConfig& cfg);

ExperimentResult verify_theorem(const ExperimentConfig& cfg);
ExperimentResult verify_counterexample(const ExperimentConfig& cfg);
ExperimentResult verify_crossing(const ExperimentConfig& cfg);
ExperimentResult convergence(const ExperimentConfig& cfg);
ExperimentResult takacs(const ExperimentConfig& cfg);
ExperimentResult hitting(const ExperimentConfig& cfg);
ExperimentResult laplace(const ExperimentConfig& cfg);
ExperimentResult sample(const ExperimentConfig& cfg);

/// Dispatch by verb name.
ExperimentResult run(const ExperimentConfig& cfg);
std::vector<std::string> verbs();

/// Writes the summary JSON next to the other artifacts and returns its path.
std::filesystem::path write_summary(const ExperimentConfig& cfg, ExperimentResult& result);

// Pathwise lemma studies on recorded paths.

struct PathwiseStudy {
  std::string scheme;
  std::size_t paths = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  std::size_t sigma_finite = 0;
  unsigned worst_n0 = 0;
  std::vector<unsigned> n0s;  // one per checked path
  std::vector<PathwiseReport> reports;
};

/// Y = -c t + gamma(0.5, 1) jumps approximated by its jumps above 1/n with a
/// compensating drift; C is Model A's. The gamma jumps are recorded above
/// reference_floor, which is also where the level list must end.
PathwiseStudy pathwise_cpp_study(std::size_t paths, double horizon, std::uint64_t seed,
                                 std::span<const unsigned> levels, double reference_floor = 1e-4);
/// Model A's Y with C = gamma(0.2, 1) recorded above reference_floor and
/// truncated at 1/n.
PathwiseStudy pathwise_truncation_study(std::size_t paths, double horizon, std::uint64_t seed,
                                        std::span<const unsigned> levels, double reference_floor = 1e-4);
std::vector<unsigned> default_pathwise_levels();

/// Two-standard-error allowance for an increase of a KS distance between two
/// independent runs: 2 sqrt(2) sd(K) scale, with sd(K) = 0.2603 the standard
/// deviation of the Kolmogorov law and scale = 1/sqrt(n_eff).
double ks_monotone_slack(double scale);

}  // namespace levysup::cli

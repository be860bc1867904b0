#include "driver.hpp"

#include <algorithm>
#include <charconv>
#include <type_traits>
#include <cmath>
#include <fstream>
#include <sstream>

#include "levysup/fluctuation.hpp"
#include "levysup/numerics.hpp"
#include "levysup/runner.hpp"
#include "levysup/sample_io.hpp"

namespace levysup::cli {
namespace {

using nlohmann::json;

constexpr double kKolmogorovSd = 0.2603;

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::stringstream cell(item);
    T v{};
    if (!(cell >> v)) throw ConfigError("config: key '" + key + "' expects a comma separated list, got '" + text + "'");
    out.push_back(v);
  }
  return out;
}

std::uint64_t level_seed(std::uint64_t seed, unsigned n) { return seed + 0x9E3779B97F4A7C15ULL * n; }

std::string stem(const ExperimentConfig& cfg) { return cfg.experiment + "_" + cfg.model; }

std::filesystem::path prepare_out(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out);
  return cfg.out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void save_samples(const ExperimentConfig& cfg, ExperimentResult& result, const SampleSet& s, const std::string& tag) {
  const auto dir = prepare_out(cfg);
  const auto csv = dir / (stem(cfg) + "_" + tag + ".csv");
  const auto side = dir / (stem(cfg) + "_" + tag + ".json");
  write_sample_csv(csv, s);
  write_text(side, to_json(s).dump(2) + "\n");
  result.files.push_back(csv.filename());
  result.files.push_back(side.filename());
}

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : v)
    if (std::isfinite(x)) sum += x, ++n;
  return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> lambda_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 100; ++k) g.push_back(0.1 * k);
  return g;
}

TestReport monotone_report(std::span<const double> ks, std::span<const double> scales) {
  double excess = 0.0;
  for (std::size_t k = 1; k < ks.size(); ++k)
    excess = std::max(excess, ks[k] - ks[k - 1] - ks_monotone_slack(std::max(scales[k], scales[k - 1])));
  return bound_report("ks_nonincreasing", excess, 0.0,
                      "largest increase of the KS distance beyond 2 sqrt(2) 0.2603/sqrt(n_eff) between successive levels");
}

TestReport gaps_report(std::span<const ExponentGap> gaps) {
  double violations = 0.0;
  for (std::size_t k = 1; k < gaps.size(); ++k)
    if (!(gaps[k].sup_gap < gaps[k - 1].sup_gap)) violations += 1.0;
  return bound_report("exponent_gap_strictly_decreasing", violations, 0.0,
                      "count of levels whose sup_lambda |psi_n - psi| on [0,10] does not drop");
}

json gaps_json(std::span<const ExponentGap> gaps, std::span<const unsigned> levels) {
  json out = json::array();
  for (std::size_t k = 0; k < gaps.size(); ++k)
    out.push_back({{"n", levels[k]}, {"sup_gap", gaps[k].sup_gap}, {"at_lambda", gaps[k].at_lambda}});
  return out;
}

void write_convergence(const ExperimentConfig& cfg, ExperimentResult& result, std::span<const ConvergenceRow> rows) {
  const auto path = prepare_out(cfg) / (stem(cfg) + "_levels.csv");
  std::ofstream f(path, std::ios::binary);
  write_convergence_csv(f, rows);
  result.files.push_back(path.filename());
}

ExperimentResult compare_suprema(const ExperimentConfig& cfg, const ProcessSpec& spec, SampleSet& geo, SampleSet& sig,
                                 DistributionReport& cmp) {
  const std::uint64_t seed = cfg.require_seed();
  const unsigned workers = cfg.resolved_workers();
  const TruncationPolicy policy = cfg.policy_for(spec);
  geo = sample_geometric_suprema(spec.without_c(), cfg.reps, seed, workers);
  sig = sample_sigma_suprema(spec, policy, cfg.reps, seed, workers);

  ExperimentResult result;
  result.verb = cfg.experiment;
  const auto usable = sig.usable_values();
  cmp = ks_two_sample(geo.values, usable, cfg.alpha, cfg.z);
  result.details["comparison"] = {{"atom", to_json(cmp.atom)}, {"ks", to_json(cmp.ks)}, {"verdict", to_string(cmp.verdict)}};
  result.details["atom_geometric"] = Ecdf(geo.values).atom_at_zero();
  result.details["atom_sigma"] = Ecdf(usable).atom_at_zero();
  result.details["mean_drift"] = spec.mean_drift();
  result.details["mean_drift_y"] = spec.without_c().mean_drift();
  return result;
}

void add_truncation_gates(const ExperimentConfig& cfg, ExperimentResult& result, const TruncationPolicy& policy,
                          std::size_t capped) {
  result.gates.push_back({bound_report("truncation_bias", policy.bias_bound, cfg.max_bias,
                                       "bound on P(stopped path would still change the outcome)")});
  result.gates.push_back({bound_report("event_cap_discards",
                                       static_cast<double>(capped) / static_cast<double>(cfg.reps), cfg.max_discard,
                                       "fraction of replications stopped by event_cap")});
}

ProcessSpec full_model(const ExperimentConfig& cfg) { return resolve_model(cfg.model, &cfg.file); }

double integrated_tail_cdf(const JumpMeasure& z, double x) {
  if (x <= 0.0) return 0.0;
  const auto kinks = z.kinks();
  const auto rest = numerics::integrate_to_infinity([&](double u) { return z.tail(u); }, x, {}, kinks);
  return std::clamp(1.0 - rest.value / z.mean(), 0.0, 1.0);
}

}  // namespace

unsigned ExperimentConfig::resolved_workers() const { return workers ? workers : default_workers(); }

std::uint64_t ExperimentConfig::require_seed() const {
  if (!seed) throw ConfigError("a seed is required (--seed, LEVYSUP_SEED or `seed =` in the config)");
  return *seed;
}

TruncationPolicy ExperimentConfig::policy_for(const ProcessSpec& spec, bool for_hitting) const {
  return for_hitting ? hitting_policy(spec, gap_K, min_time_T, event_cap) : sigma_policy(spec, gap_K, min_time_T, event_cap);
}

json ExperimentConfig::to_json() const {
  json j = {{"experiment", experiment}, {"model", model},         {"reps", reps},
            {"seed", seed ? json(*seed) : json()}, {"alpha", alpha}, {"z", z},
            {"gap_K", gap_K},           {"min_time_T", min_time_T}, {"event_cap", event_cap},
            {"max_bias", max_bias},     {"max_discard", max_discard}, {"level", level},
            {"levels", levels},         {"lambdas", lambdas},     {"min_covered", min_covered},
            {"t", t},                   {"bin_width", bin_width}, {"takacs_tol", takacs_tol},
            {"y", y},                   {"sampler", sampler},     {"pathwise", pathwise},
            {"paths", paths},           {"horizon", horizon},     {"final_ks", final_ks}};
  json models = json::object();
  for (const auto& [key, value] : file.entries())
    if (key.rfind("model.", 0) == 0) models[key] = value;
  if (!models.empty()) j["model_definitions"] = models;
  return j;
}

void apply_file_settings(ExperimentConfig& cfg, const KeyValueConfig& file) {
  cfg.file = file;
  auto num = [&](const char* key, auto& dst) {
    using T = std::remove_reference_t<decltype(dst)>;
    const auto v = file.number_or(key);
    if (!v) return;
    if constexpr (std::is_integral_v<T>) {
      if (*v < 0.0 || *v != std::floor(*v) || *v > 9.0e15)
        throw ConfigError(std::string("config: key '") + key + "' expects a nonnegative integer");
    }
    dst = static_cast<T>(*v);
  };
  auto str = [&](const char* key, std::string& dst) {
    if (auto v = file.get(key)) dst = *v;
  };
  str("experiment", cfg.experiment);
  str("model", cfg.model);
  num("reps", cfg.reps);
  if (auto v = file.get("seed")) {
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), seed);
    if (ec != std::errc() || ptr != v->data() + v->size())
      throw ConfigError("config: key 'seed' expects an unsigned integer, got '" + *v + "'");
    cfg.seed = seed;
  }
  num("workers", cfg.workers);
  num("alpha", cfg.alpha);
  num("z", cfg.z);
  if (auto v = file.get("out")) cfg.out = *v;
  num("gap_K", cfg.gap_K);
  num("min_time_T", cfg.min_time_T);
  num("event_cap", cfg.event_cap);
  num("max_bias", cfg.max_bias);
  num("max_discard", cfg.max_discard);
  num("level", cfg.level);
  if (auto v = file.get("levels")) cfg.levels = parse_list<unsigned>("levels", *v);
  if (auto v = file.get("lambdas")) cfg.lambdas = parse_list<double>("lambdas", *v);
  num("min_covered", cfg.min_covered);
  num("t", cfg.t);
  num("bin_width", cfg.bin_width);
  num("takacs_tol", cfg.takacs_tol);
  num("y", cfg.y);
  str("sampler", cfg.sampler);
  str("pathwise", cfg.pathwise);
  num("paths", cfg.paths);
  num("horizon", cfg.horizon);
  num("final_ks", cfg.final_ks);
}

bool ExperimentResult::passed() const {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed(); });
}

json to_json(const TestReport& r) {
  return {{"test", r.test}, {"statistic", r.statistic}, {"threshold", r.threshold}, {"n", r.n},
          {"m", r.m},       {"verdict", to_string(r.verdict)}, {"basis", r.basis}};
}

json to_json(const SampleSet& s) {
  const auto c = s.counts();
  return {{"model", s.model},
          {"seed", s.seed},
          {"n", s.values.size()},
          {"policy",
           {{"gap_K", std::isfinite(s.policy.gap_K) ? json(s.policy.gap_K) : json("inf")},
            {"min_time_T", s.policy.min_time_T},
            {"event_cap", s.policy.event_cap}}},
          {"bias_bound", s.policy.bias_bound},
          {"counts",
           {{"sigma_hit", c[0]}, {"truncated_gap", c[1]}, {"event_cap", c[2]}, {"exact", c[3]}}}};
}

TestReport bound_report(std::string name, double value, double limit, std::string basis) {
  return {std::move(name), value, limit, 0, 0, value <= limit ? Verdict::consistent : Verdict::rejected,
          std::move(basis)};
}

ProcessSpec load_model(const ExperimentConfig& cfg) {
  ProcessSpec spec = full_model(cfg);
  if (cfg.level > 0 && spec.has_c())
    spec = spec.with_c(truncate_subordinator(*spec.c(), TruncationLevel(cfg.level)))
               .renamed(spec.name() + "_n" + std::to_string(cfg.level));
  return spec;
}

ExperimentResult verify_theorem(const ExperimentConfig& cfg) {
  const ProcessSpec full = full_model(cfg);
  if (full.mean_drift() > 0.0)
    throw RegimeError("verify-theorem needs E X_1 <= 0 (model " + cfg.model + " has " +
                      format_double(full.mean_drift()) + "); use verify-counterexample");
  if (!(full.without_c().mean_drift() < 0.0)) throw RegimeError("verify-theorem needs E Y_1 < 0");
  const ProcessSpec spec = load_model(cfg);
  SampleSet geo, sig;
  DistributionReport cmp;
  ExperimentResult result = compare_suprema(cfg, spec, geo, sig, cmp);
  result.gates.push_back({cmp.atom});
  result.gates.push_back({cmp.ks});
  add_truncation_gates(cfg, result, sig.policy, sig.count(OutcomeKind::event_cap));
  save_samples(cfg, result, geo, "geometric");
  save_samples(cfg, result, sig, "sigma");
  return result;
}

ExperimentResult verify_counterexample(const ExperimentConfig& cfg) {
  const ProcessSpec spec = load_model(cfg);
  const double mu_z = spec.z().mean();
  const double mu_c = spec.has_c() ? spec.c()->mean() : 0.0;
  if (!(mu_z < spec.drift() && spec.drift() < mu_z + mu_c))
    throw RegimeError("verify-counterexample needs mu_Z < c < mu_Z + mu_C (model " + cfg.model + ")");
  SampleSet geo, sig;
  DistributionReport cmp;
  ExperimentResult result = compare_suprema(cfg, spec, geo, sig, cmp);
  const auto usable = sig.usable_values();
  const double ratio = std::max(cmp.ks.statistic / cmp.ks.threshold, cmp.atom.statistic / cmp.atom.threshold);
  result.gates.push_back({{"equality_of_laws", ratio, 1.0, geo.values.size(), usable.size(), cmp.verdict,
                           "largest statistic/threshold ratio of the atom and KS parts"},
                          Verdict::rejected});

  const CrossingLaw law = crossing_law(spec, false);
  const double atom_sigma = 1.0 - law.p_cross_by_z();
  const double atom_y = 1.0 - mu_z / spec.drift();
  const auto zeros = static_cast<std::size_t>(std::count(usable.begin(), usable.end(), 0.0));
  auto never = proportion_test(zeros, usable.size(), atom_sigma, cfg.z);
  never.test = "sigma_before_crossing";
  never.basis = "fraction of sup_{t<sigma} X = 0 vs 1 - p_cross_by_Z; " + never.basis;
  result.gates.push_back({never});
  result.gates.push_back({bound_report("analytic_atom_gap", atom_y - atom_sigma, -1e-12,
                                       "(1 - mu_Z/c) - (1 - p_cross_by_Z) must be negative")});
  result.details["p_cross_by_z"] = law.p_cross_by_z();
  result.details["phi0"] = law.phi0();
  result.details["analytic_atom_sigma"] = atom_sigma;
  result.details["analytic_atom_y"] = atom_y;
  add_truncation_gates(cfg, result, sig.policy, sig.count(OutcomeKind::event_cap));
  save_samples(cfg, result, geo, "geometric");
  save_samples(cfg, result, sig, "sigma");
  return result;
}

ExperimentResult verify_crossing(const ExperimentConfig& cfg) {
  const ProcessSpec spec = load_model(cfg);
  const std::uint64_t seed = cfg.require_seed();
  const TruncationPolicy policy = cfg.policy_for(spec);
  const CrossingLaw law = crossing_law(spec);
  const auto runs = run_replications<FirstPassage>(cfg.reps, cfg.resolved_workers(), [&](std::size_t i) {
    RandomStream rng(seed, i, static_cast<std::uint32_t>(StreamDomain::first_passage));
    return first_passage_zero(spec, policy, rng);
  });

  SampleSet s{spec.name(), seed, policy, {}, {}, {}, {}};
  std::size_t finite = 0, by_z = 0, capped = 0;
  std::vector<double> overshoot_z;
  for (const auto& r : runs) {
    s.values.push_back(r.finite ? r.overshoot : std::numeric_limits<double>::quiet_NaN());
    s.kinds.push_back(r.kind);
    s.events.push_back(r.events_used);
    s.sigma_times.push_back(std::numeric_limits<double>::quiet_NaN());
    if (r.kind == OutcomeKind::event_cap) ++capped;
    if (!r.finite) continue;
    ++finite;
    if (r.source == JumpSource::z) {
      ++by_z;
      overshoot_z.push_back(r.overshoot);
    }
  }

  ExperimentResult result;
  result.verb = cfg.experiment;
  auto attribution = proportion_test(by_z, cfg.reps, law.p_cross_by_z(), cfg.z);
  attribution.test = "z_attribution";
  result.gates.push_back({attribution});

  const double mu = spec.z().mean() + (spec.has_c() ? spec.c()->mean() : 0.0);
  const double p_finite = spec.mean_drift() >= 0.0 ? 1.0 : mu / spec.drift();
  auto fin = proportion_test(finite, cfg.reps, p_finite, cfg.z);
  fin.test = "crossing_finite";
  result.gates.push_back({fin});

  if (!overshoot_z.empty()) {
    const TabulatedCdf& table = law.conditional_cdf();
    auto ks = ks_one_sample(overshoot_z, [&](double x) { return table(x); }, cfg.alpha);
    ks.ks.test = "overshoot_vs_tabulated";
    result.gates.push_back({ks.ks});
    if (spec.mean_drift() <= 0.0) {
      auto ks2 = ks_one_sample(overshoot_z, [&](double x) { return integrated_tail_cdf(spec.z(), x); }, cfg.alpha);
      ks2.ks.test = "overshoot_vs_integrated_tail";
      result.gates.push_back({ks2.ks});
    }
  }
  add_truncation_gates(cfg, result, policy, capped);
  result.details["p_cross_by_z"] = law.p_cross_by_z();
  result.details["phi0"] = law.phi0();
  result.details["p_finite"] = p_finite;

  const auto dir = prepare_out(cfg);
  std::ofstream table(dir / (stem(cfg) + "_cdf.csv"), std::ios::binary);
  write_cdf_csv(table, law.conditional_cdf());
  result.files.push_back(stem(cfg) + "_cdf.csv");
  save_samples(cfg, result, s, "first_passage");
  return result;
}

ExperimentResult convergence(const ExperimentConfig& cfg) {
  const ProcessSpec spec = full_model(cfg);
  const std::uint64_t seed = cfg.require_seed();
  const unsigned workers = cfg.resolved_workers();
  const auto grid = lambda_grid();
  ExperimentResult result;
  result.verb = cfg.experiment;
  std::vector<ConvergenceRow> rows;
  std::vector<double> ks, scales;

  if (spec.diffusion() > 0.0) {
    if (!spec.z().empty() || spec.has_c())
      throw RegimeError("convergence with a Brownian part is defined for Y = -ct + sqrt(a) B only");
    const std::vector<unsigned> levels = cfg.levels.empty() ? std::vector<unsigned>{1, 16, 256, 4096, 65536} : cfg.levels;
    const LevyTriplet triplet = triplet_of(spec);
    // sup of Brownian motion with drift gamma < 0 is Exp(2|gamma|/a)
    const double rate = -2.0 * triplet.gamma / triplet.diffusion;
    auto target = [rate](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-rate * x); };
    std::vector<CPApproximation> approx;
    for (unsigned n : levels) {
      approx.push_back(compound_poisson_approx(triplet, n));
      const auto s = sample_geometric_suprema(approx.back().spec, cfg.reps, level_seed(seed, n), workers);
      const auto rep = ks_one_sample(s.values, target, cfg.alpha);
      ks.push_back(rep.ks.statistic);
      scales.push_back(1.0 / std::sqrt(static_cast<double>(s.values.size())));
      rows.push_back({n, std::numeric_limits<double>::quiet_NaN(), mean_of(s.values), rep.ks.statistic});
    }
    const auto gaps = exponent_convergence_report(triplet, approx, grid);
    result.gates.push_back({gaps_report(gaps)});
    result.details["exponent_gaps"] = gaps_json(gaps, levels);
    result.details["target"] = "Exp(" + format_double(rate) + ")";
  } else if (spec.has_c() && !spec.c()->finite_activity()) {
    const std::vector<unsigned> levels = cfg.levels.empty() ? std::vector<unsigned>{1, 4, 16, 64} : cfg.levels;
    const auto target = sample_geometric_suprema(spec.without_c(), cfg.reps, seed, workers, StreamDomain::target);
    std::vector<ProcessSpec> specs;
    for (unsigned n : levels) {
      specs.push_back(spec.with_c(truncate_subordinator(*spec.c(), TruncationLevel(n))));
      const auto s = sample_sigma_suprema(specs.back(), cfg.policy_for(specs.back()), cfg.reps, level_seed(seed, n), workers);
      const auto usable = s.usable_values();
      const double d = ks_distance(target.values, usable);
      const double nn = static_cast<double>(target.values.size()), mm = static_cast<double>(usable.size());
      ks.push_back(d);
      scales.push_back(std::sqrt((nn + mm) / (nn * mm)));
      rows.push_back({n, mean_of(s.sigma_times), mean_of(s.values), d});
    }
    const auto gaps = exponent_convergence_report(spec, specs, grid);
    result.gates.push_back({gaps_report(gaps)});
    result.details["exponent_gaps"] = gaps_json(gaps, levels);
    result.details["target"] = "geometric sup Y";
  } else {
    throw RegimeError("convergence needs a Brownian part or an infinite-activity C (model " + cfg.model + ")");
  }

  result.gates.push_back({monotone_report(ks, scales)});
  result.gates.push_back({bound_report("final_level_ks", ks.back(), cfg.final_ks, "KS distance at the last level")});
  write_convergence(cfg, result, rows);

  if (!cfg.pathwise.empty()) {
    const auto levels = default_pathwise_levels();
    PathwiseStudy study;
    if (cfg.pathwise == "cpp")
      study = pathwise_cpp_study(cfg.paths, cfg.horizon, seed, levels);
    else if (cfg.pathwise == "truncation")
      study = pathwise_truncation_study(cfg.paths, cfg.horizon, seed, levels);
    else
      throw ConfigError("pathwise must be 'cpp' or 'truncation'");
    result.gates.push_back({bound_report("pathwise_failures", static_cast<double>(study.failed), 0.0,
                                         "paths meeting the hypotheses where sigma_n or sup_n do not settle")});
    result.gates.push_back({bound_report("pathwise_checked_shortfall",
                                         static_cast<double>(cfg.paths) - static_cast<double>(study.passed + study.failed),
                                         0.0, "paths meeting the hypotheses fewer than requested")});
    result.details["pathwise"] = {{"scheme", study.scheme},   {"passed", study.passed},
                                  {"failed", study.failed},   {"skipped", study.skipped},
                                  {"sigma_finite", study.sigma_finite}, {"worst_n0", study.worst_n0},
                                  {"n0", study.n0s}};
  }
  return result;
}

ExperimentResult takacs(const ExperimentConfig& cfg) {
  const ProcessSpec spec = load_model(cfg);
  const auto rep = takacs_check(spec, cfg.t, cfg.reps, cfg.bin_width, cfg.require_seed(), cfg.resolved_workers());
  ExperimentResult result;
  result.verb = cfg.experiment;
  result.gates.push_back({bound_report("takacs_max_deviation", rep.max_deviation, cfg.takacs_tol,
                                       "max |empirical - (1 - (-x/(ct))^+)| over bins with >= 200 hits")});
  const auto path = prepare_out(cfg) / (stem(cfg) + "_bins.csv");
  std::ofstream f(path, std::ios::binary);
  write_takacs_csv(f, rep);
  result.files.push_back(path.filename());
  return result;
}

ExperimentResult hitting(const ExperimentConfig& cfg) {
  const ProcessSpec spec = load_model(cfg);
  const std::uint64_t seed = cfg.require_seed();
  const TruncationPolicy policy = cfg.policy_for(spec, true);
  const auto runs = run_replications<HittingOutcome>(cfg.reps, cfg.resolved_workers(), [&](std::size_t i) {
    RandomStream rng(seed, i, static_cast<std::uint32_t>(StreamDomain::hitting));
    return sample_hitting_time(spec, cfg.y, policy, rng);
  });
  std::size_t finite = 0, capped = 0;
  for (const auto& r : runs) {
    finite += r.finite ? 1 : 0;
    capped += r.kind == OutcomeKind::event_cap ? 1 : 0;
  }
  ExperimentResult result;
  result.verb = cfg.experiment;
  const double p = hitting_probability(spec, cfg.y);
  auto gate = proportion_test(finite, cfg.reps, p, cfg.z);
  gate.test = "hitting_probability";
  result.gates.push_back({gate});
  add_truncation_gates(cfg, result, policy, capped);
  result.details["analytic"] = p;
  result.details["empirical"] = static_cast<double>(finite) / static_cast<double>(cfg.reps);
  return result;
}

ExperimentResult laplace(const ExperimentConfig& cfg) {
  const ProcessSpec y = load_model(cfg).without_c();
  const auto s = sample_geometric_suprema(y, cfg.reps, cfg.require_seed(), cfg.resolved_workers());
  const auto est = empirical_lt(s.values, cfg.lambdas);
  ExperimentResult result;
  result.verb = cfg.experiment;
  std::size_t covered = 0;
  json rows = json::array();
  for (const auto& e : est) {
    const double exact = sup_laplace_transform(y, e.lambda);
    const bool in = std::abs(e.value - exact) <= e.half_width;
    covered += in ? 1 : 0;
    rows.push_back({{"lambda", e.lambda}, {"empirical", e.value}, {"half_width", e.half_width}, {"analytic", exact},
                    {"covered", in}});
  }
  const double uncovered = static_cast<double>(est.size() - covered);
  const double allowed = static_cast<double>(est.size()) - static_cast<double>(std::min(cfg.min_covered, est.size()));
  result.gates.push_back({bound_report("lt_ci_coverage_misses", uncovered, allowed,
                                       "grid points whose 99% CI misses -gamma lam / psi(lam)")});
  result.details["points"] = rows;
  save_samples(cfg, result, s, "geometric");
  return result;
}

ExperimentResult sample(const ExperimentConfig& cfg) {
  const ProcessSpec spec = load_model(cfg);
  const std::uint64_t seed = cfg.require_seed();
  ExperimentResult result;
  result.verb = cfg.experiment;
  if (cfg.sampler == "sigma") {
    save_samples(cfg, result, sample_sigma_suprema(spec, cfg.policy_for(spec), cfg.reps, seed, cfg.resolved_workers()),
                 "sigma");
  } else if (cfg.sampler == "geometric") {
    save_samples(cfg, result, sample_geometric_suprema(spec, cfg.reps, seed, cfg.resolved_workers()), "geometric");
  } else if (cfg.sampler == "first-passage") {
    ExperimentConfig inner = cfg;
    inner.experiment = "sample";
    auto r = verify_crossing(inner);
    result.files = r.files;
  } else {
    throw ConfigError("sampler must be sigma, geometric or first-passage");
  }
  return result;
}

std::vector<std::string> verbs() {
  return {"verify-theorem", "verify-counterexample", "verify-crossing", "convergence",
          "takacs",         "hitting",               "laplace",         "sample"};
}

ExperimentResult run(const ExperimentConfig& cfg) {
  if (cfg.reps == 0) throw ConfigError("reps must be at least 1");
  const std::string& v = cfg.experiment;
  if (v == "verify-theorem") return verify_theorem(cfg);
  if (v == "verify-counterexample") return verify_counterexample(cfg);
  if (v == "verify-crossing") return verify_crossing(cfg);
  if (v == "convergence") return convergence(cfg);
  if (v == "takacs") return takacs(cfg);
  if (v == "hitting") return hitting(cfg);
  if (v == "laplace") return laplace(cfg);
  if (v == "sample") return sample(cfg);
  throw ConfigError("unknown experiment '" + v + "'");
}

std::filesystem::path write_summary(const ExperimentConfig& cfg, ExperimentResult& result) {
  json gates = json::array();
  for (const auto& g : result.gates) {
    auto j = to_json(g.report);
    j["expected"] = to_string(g.expected);
    j["passed"] = g.passed();
    gates.push_back(j);
  }
  json files = json::array();
  for (const auto& f : result.files) files.push_back(f.string());
  const json doc = {{"verb", result.verb}, {"config", cfg.to_json()}, {"gates", gates},
                    {"details", result.details}, {"files", files}, {"passed", result.passed()}};
  const auto path = prepare_out(cfg) / (stem(cfg) + ".json");
  write_text(path, doc.dump(2) + "\n");
  return path;
}

std::vector<unsigned> default_pathwise_levels() {
  std::vector<unsigned> out;
  for (unsigned n = 1; n <= 16384; n *= 2) out.push_back(n);
  return out;
}

namespace {

template <class CheckFn>
PathwiseStudy run_study(std::string scheme, std::size_t paths, double horizon, std::uint64_t seed,
                        const ProcessSpec& recorder, CheckFn&& check) {
  PathwiseStudy study;
  study.scheme = std::move(scheme);
  // draw until enough paths meet the hypotheses; cap attempts to stay finite
  for (std::size_t i = 0; study.passed + study.failed < paths && i < 10 * paths + 10; ++i) {
    RandomStream rng(seed, i, static_cast<std::uint32_t>(StreamDomain::horizon));
    const PathRecord rec = simulate_horizon(recorder, horizon, rng);
    auto [y, c] = split_record(rec);
    PathwiseReport rep = check(y, c);
    ++study.paths;
    switch (rep.status) {
      case CheckStatus::passed: ++study.passed; break;
      case CheckStatus::failed: ++study.failed; break;
      case CheckStatus::skipped: ++study.skipped; break;
    }
    if (rep.status != CheckStatus::skipped) {
      if (std::isfinite(rep.sigma)) ++study.sigma_finite;
      if (rep.n0) {
        study.worst_n0 = std::max(study.worst_n0, *rep.n0);
        study.n0s.push_back(*rep.n0);
      }
    }
    study.reports.push_back(std::move(rep));
  }
  return study;
}

void require_reference_level(std::span<const unsigned> levels, double floor) {
  if (levels.empty() || 1.0 / static_cast<double>(levels.back()) > floor)
    throw ConfigError("pathwise study: the last level must resolve every recorded jump (1/n <= floor)");
}

}  // namespace

PathwiseStudy pathwise_cpp_study(std::size_t paths, double horizon, std::uint64_t seed,
                                 std::span<const unsigned> levels, double reference_floor) {
  require_reference_level(levels, reference_floor);
  const JumpMeasure z = JumpMeasure::gamma(0.5, 1.0);
  const JumpMeasure z_ref = z.restricted_above(reference_floor);
  // jumps below the floor enter the reference path through their mean
  const double drift_ref = 1.0 - (z.mean() - z_ref.mean());
  const ProcessSpec recorder(drift_ref, z_ref, JumpMeasure::exponential(0.3, 2.0), 0.0, "gammaZ_A");
  std::vector<unsigned> lv(levels.begin(), levels.end());
  return run_study("approx_cpp", paths, horizon, seed, recorder, [&](const DriftJumpPath& y, const JumpPath& c) {
    std::vector<ApproxPath> y_n;
    for (unsigned n : lv) {
      const double thr = std::max(TruncationLevel(n).threshold(), reference_floor);
      y_n.push_back({n, y.compensated_truncation(thr, z_ref.mean() - z.restricted_above(thr).mean())});
    }
    return pathwise_sigma_convergence_check(y, y_n, c);
  });
}

PathwiseStudy pathwise_truncation_study(std::size_t paths, double horizon, std::uint64_t seed,
                                        std::span<const unsigned> levels, double reference_floor) {
  require_reference_level(levels, reference_floor);
  const ProcessSpec recorder(1.0, JumpMeasure::exponential(0.5, 1.0),
                             JumpMeasure::gamma(0.2, 1.0).restricted_above(reference_floor), 0.0, "A_gammaC");
  std::vector<unsigned> lv(levels.begin(), levels.end());
  return run_study("truncated_c", paths, horizon, seed, recorder,
                   [&](const DriftJumpPath& y, const JumpPath& c) { return pathwise_truncation_check(y, c, lv); });
}

double ks_monotone_slack(double scale) { return 2.0 * std::sqrt(2.0) * kKolmogorovSd * scale; }

}  // namespace levysup::cli

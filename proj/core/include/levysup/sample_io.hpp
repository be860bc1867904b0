#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "levysup/approx.hpp"
#include "levysup/fluctuation.hpp"
#include "levysup/pathsim.hpp"
#include "levysup/stats.hpp"

namespace levysup {

/// Round-tripping decimal form ("%.17g"); NaN prints as empty.
std::string format_double(double v);

/// Header `value,kind,events,sigma_time`; an absent sigma time is an empty field.
void write_sample_csv(std::ostream& out, const SampleSet& s);
void write_sample_csv(const std::filesystem::path& path, const SampleSet& s);
/// Reads what write_sample_csv wrote (values, kinds, events, sigma times only).
SampleSet read_sample_csv(std::istream& in);

/// Two columns `x,F`.
void write_cdf_csv(std::ostream& out, const TabulatedCdf& cdf);
void write_takacs_csv(std::ostream& out, const TakacsReport& rep);
/// Columns `n,sigma_n,sup_n,ks_distance`; missing entries are empty.
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);

}  // namespace levysup

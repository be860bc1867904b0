#include "levysup/sample_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace levysup {
namespace {

OutcomeKind parse_kind(const std::string& s) {
  for (auto k : {OutcomeKind::sigma_hit, OutcomeKind::truncated_gap, OutcomeKind::event_cap, OutcomeKind::exact})
    if (to_string(k) == s) return k;
  throw std::runtime_error("sample csv: unknown kind '" + s + "'");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sample_csv(std::ostream& out, const SampleSet& s) {
  out << "value,kind,events,sigma_time\n";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    out << format_double(s.values[i]) << ',' << (i < s.kinds.size() ? to_string(s.kinds[i]) : "") << ','
        << (i < s.events.size() ? s.events[i] : 0) << ','
        << (i < s.sigma_times.size() ? format_double(s.sigma_times[i]) : "") << '\n';
  }
}

void write_sample_csv(const std::filesystem::path& path, const SampleSet& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_sample_csv(out, s);
}

SampleSet read_sample_csv(std::istream& in) {
  SampleSet s;
  std::string line;
  if (!std::getline(in, line) || line != "value,kind,events,sigma_time")
    throw std::runtime_error("sample csv: missing or unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string value, kind, events, sigma;
    std::getline(row, value, ',');
    std::getline(row, kind, ',');
    std::getline(row, events, ',');
    std::getline(row, sigma, ',');
    s.values.push_back(std::stod(value));
    s.kinds.push_back(parse_kind(kind));
    s.events.push_back(std::stoull(events));
    s.sigma_times.push_back(sigma.empty() ? std::nan("") : std::stod(sigma));
  }
  return s;
}

void write_cdf_csv(std::ostream& out, const TabulatedCdf& cdf) {
  out << "x,F\n";
  for (std::size_t i = 0; i < cdf.nodes().size(); ++i)
    out << format_double(cdf.nodes()[i]) << ',' << format_double(cdf.values()[i]) << '\n';
}

void write_takacs_csv(std::ostream& out, const TakacsReport& rep) {
  out << "lo,hi,mean_x,hits,empirical,predicted,deviation\n";
  for (const auto& b : rep.bins)
    out << format_double(b.lo) << ',' << format_double(b.hi) << ',' << format_double(b.mean_x) << ',' << b.hits << ','
        << format_double(b.empirical) << ',' << format_double(b.predicted) << ',' << format_double(b.deviation) << '\n';
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
  out << "n,sigma_n,sup_n,ks_distance\n";
  for (const auto& r : rows)
    out << r.n << ',' << format_double(r.sigma_n) << ',' << format_double(r.sup_n) << ','
        << format_double(r.ks_distance) << '\n';
}

}  // namespace levysup

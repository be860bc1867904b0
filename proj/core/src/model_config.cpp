#include "levysup/model_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace levysup {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError("config: key '" + key + "' expects a finite number, got '" + text + "'");
  return v;
}

JumpMeasure component(const KeyValueConfig& cfg, const std::string& prefix) {
  const std::string family = lower(cfg.require(prefix + ".family"));
  JumpMeasure m;
  if (family == "exp" || family == "exponential") {
    m = JumpMeasure::exponential(cfg.number(prefix + ".rate"), cfg.number(prefix + ".theta"));
  } else if (family == "gamma") {
    m = JumpMeasure::gamma(cfg.number(prefix + ".alpha"), cfg.number(prefix + ".beta"));
  } else if (family == "stable") {
    m = JumpMeasure::stable_like(cfg.number(prefix + ".scale"), cfg.number(prefix + ".index"),
                                 cfg.number(prefix + ".upper"));
  } else if (family == "atom") {
    m = JumpMeasure::atom(cfg.number(prefix + ".location"), cfg.number(prefix + ".mass"));
  } else if (family == "mix") {
    std::vector<JumpMeasure> parts;
    for (int k = 0; cfg.contains(prefix + "." + std::to_string(k) + ".family"); ++k)
      parts.push_back(component(cfg, prefix + "." + std::to_string(k)));
    if (parts.empty()) throw ConfigError("config: mix '" + prefix + "' has no components (" + prefix + ".0.family)");
    m = JumpMeasure::sum(parts);
  } else if (family == "none") {
    return {};
  } else {
    throw ConfigError("config: unknown family '" + family + "' for " + prefix);
  }
  if (const auto cut = cfg.number_or(prefix + ".cutoff")) m = m.restricted_above(*cut);
  return m;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, std::string_view origin) {
  KeyValueConfig cfg;
  std::string line, section;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find_first_of("#;");
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(lineno);
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!section.empty()) key = section + "." + key;
    cfg.values_[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse(in, path.string());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::require(const std::string& key) const {
  auto v = get(key);
  if (!v) throw ConfigError("config: missing key '" + key + "'");
  return *v;
}

double KeyValueConfig::number(const std::string& key) const { return parse_number(key, require(key)); }

std::optional<double> KeyValueConfig::number_or(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  return parse_number(key, *v);
}

std::vector<std::string> KeyValueConfig::model_names() const {
  std::set<std::string> names;
  for (const auto& [key, value] : values_) {
    if (key.rfind("model.", 0) != 0) continue;
    const auto dot = key.find('.', 6);
    if (dot != std::string::npos) names.insert(key.substr(6, dot - 6));
  }
  return {names.begin(), names.end()};
}

ProcessSpec model_from_config(const KeyValueConfig& cfg, const std::string& name) {
  const std::string p = "model." + name;
  const double drift = cfg.number(p + ".drift");
  const double a = cfg.number_or(p + ".a").value_or(0.0);
  try {
    const JumpMeasure z = cfg.contains(p + ".z.family") ? component(cfg, p + ".z") : JumpMeasure{};
    std::optional<JumpMeasure> c;
    if (cfg.contains(p + ".c.family") && lower(cfg.require(p + ".c.family")) != "none") c = component(cfg, p + ".c");
    return ProcessSpec(drift, z, c, a, name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config: model '" + name + "': " + e.what());
  }
}

std::optional<ProcessSpec> preset(std::string_view name) {
  const std::string key = lower(name);
  const auto y_a = JumpMeasure::exponential(0.5, 1.0);
  if (key == "a") return ProcessSpec(1.0, y_a, JumpMeasure::exponential(0.3, 2.0), 0.0, "A");
  if (key == "b") return ProcessSpec(1.0, y_a, JumpMeasure::exponential(1.0, 1.0), 0.0, "B");
  if (key == "c") return ProcessSpec(1.0, y_a, JumpMeasure::exponential(1.0, 2.0), 0.0, "C");
  if (key == "d") return ProcessSpec(1.0, JumpMeasure::exponential(2.0, 1.0), std::nullopt, 0.0, "D");
  if (key == "gammac") return ProcessSpec(1.0, y_a, JumpMeasure::gamma(0.2, 1.0), 0.0, "gammaC");
  if (key == "browniany") return ProcessSpec(0.5, JumpMeasure{}, std::nullopt, 1.0, "brownianY");
  return std::nullopt;
}

std::vector<std::string> preset_names() { return {"A", "B", "C", "D", "gammaC", "brownianY"}; }

ProcessSpec resolve_model(std::string_view name, const KeyValueConfig* cfg) {
  const std::string n(name);
  if (cfg && cfg->contains("model." + n + ".drift")) return model_from_config(*cfg, n);
  if (auto p = preset(name)) return *p;
  std::string known;
  for (const auto& s : preset_names()) known += (known.empty() ? "" : ", ") + s;
  throw ConfigError("unknown model '" + n + "' (presets: " + known + ")");
}

}  // namespace levysup

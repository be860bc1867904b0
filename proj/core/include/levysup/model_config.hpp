#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levysup/process.hpp"

namespace levysup {

/// Error in a model or experiment config file; carries the offending line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat dotted key-value store. Lines are `key = value`; `[section]` headers
/// prefix the keys that follow with `section.`; `#` and `;` start comments.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, std::string_view origin = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(const std::string& key) const { return values_.contains(key); }
  std::optional<std::string> get(const std::string& key) const;
  std::string require(const std::string& key) const;
  double number(const std::string& key) const;
  std::optional<double> number_or(const std::string& key) const;
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  /// Names N for which some key starts with `model.N.`.
  std::vector<std::string> model_names() const;
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Builds the spec described under `model.<name>.`:
///   drift, a, z.family, z.<params>, c.family, c.<params>
/// with families exp (rate, theta), gamma (alpha, beta), stable (scale, index,
/// upper), atom (location, mass) and mix (z.0.*, z.1.*, ...). Every component
/// accepts an optional `cutoff` restricting it to (cutoff, inf).
ProcessSpec model_from_config(const KeyValueConfig& cfg, const std::string& name);

/// Built-in models: A, B, C, D, gammaC (A with C = gamma(0.2, 1)) and
/// brownianY (a = 1, E Y_1 = -0.5).
std::optional<ProcessSpec> preset(std::string_view name);
std::vector<std::string> preset_names();

/// Config section first, then presets.
ProcessSpec resolve_model(std::string_view name, const KeyValueConfig* cfg = nullptr);

}  // namespace levysup

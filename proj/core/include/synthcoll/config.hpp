#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synthcoll {

/// Flat INI-style configuration: "key = value" lines, optional "[section]"
/// headers (keys become "section.key"), '#' or ';' comments. Values may be
/// wrapped in double quotes. Only keys listed as secrets may use
/// ${ENV_VAR} interpolation; elsewhere "${" is rejected so secrets cannot
/// leak into ordinary settings by accident.
class Config {
 public:
  using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

  Config() = default;

  /// Throws ParseError (with line) on malformed lines or duplicate keys.
  static Config parse(std::string_view text,
                      const std::vector<std::string>& secret_keys = default_secret_keys(),
                      const EnvLookup& env = process_env);
  static Config load(const std::string& path,
                     const std::vector<std::string>& secret_keys = default_secret_keys(),
                     const EnvLookup& env = process_env);

  static std::vector<std::string> default_secret_keys();
  static std::optional<std::string> process_env(std::string_view name);

  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string get_string(std::string_view key, std::string fallback) const;
  /// Typed getters throw PreconditionError naming the key on bad values.
  long long get_int(std::string_view key, long long fallback) const;
  double get_double(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  void set(std::string key, std::string value);
  const std::map<std::string, std::string, std::less<>>& values() const noexcept {
    return values_;
  }
  /// Canonical "key=value" lines, sorted, secrets blanked. Used for digests.
  std::string canonical() const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::vector<std::string> secrets_;
};

}  // namespace synthcoll

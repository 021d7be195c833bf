#include "synthcoll/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iterator>

#include "synthcoll/error.hpp"

namespace synthcoll {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string interpolate(std::string_view value, const Config::EnvLookup& env,
                        std::size_t line_no) {
  std::string out;
  std::size_t pos = 0;
  while (pos < value.size()) {
    const auto open = value.find("${", pos);
    if (open == std::string_view::npos) {
      out.append(value.substr(pos));
      break;
    }
    out.append(value.substr(pos, open - pos));
    const auto close = value.find('}', open);
    if (close == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) +
                           ": unterminated ${",
                       line_no);
    }
    const auto name = value.substr(open + 2, close - open - 2);
    const auto v = env(name);
    if (!v) {
      throw PreconditionError("config line " + std::to_string(line_no) +
                              ": environment variable " + std::string(name) +
                              " is not set");
    }
    out += *v;
    pos = close + 1;
  }
  return out;
}

}  // namespace

std::vector<std::string> Config::default_secret_keys() {
  return {"api_key", "provider.api_key", "embedding.api_key", "rerank.api_key"};
}

std::optional<std::string> Config::process_env(std::string_view name) {
  const std::string n(name);
  if (const char* v = std::getenv(n.c_str())) return std::string(v);
  return std::nullopt;
}

Config Config::parse(std::string_view text,
                     const std::vector<std::string>& secret_keys,
                     const EnvLookup& env) {
  Config cfg;
  cfg.secrets_ = secret_keys;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') {
      if (eol == text.size()) break;
      continue;
    }
    const auto fail = [&](const std::string& why) {
      throw ParseError("config line " + std::to_string(line_no) + ": " + why,
                       line_no);
    };
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) fail("empty section name");
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail("expected key = value");
      const auto k = trim(line.substr(0, eq));
      if (k.empty()) fail("empty key");
      auto v = trim(line.substr(eq + 1));
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        v = v.substr(1, v.size() - 2);
      }
      std::string key = section.empty() ? std::string(k) : section + "." + std::string(k);
      const bool secret = std::find(secret_keys.begin(), secret_keys.end(), key) !=
                          secret_keys.end();
      std::string value;
      if (secret) {
        value = interpolate(v, env, line_no);
      } else if (v.find("${") != std::string_view::npos) {
        fail("environment interpolation is only allowed for secret keys");
      } else {
        value = std::string(v);
      }
      if (!cfg.values_.emplace(key, std::move(value)).second) {
        fail("duplicate key '" + key + "'");
      }
    }
    if (eol == text.size()) break;
  }
  return cfg;
}

Config Config::load(const std::string& path,
                    const std::vector<std::string>& secret_keys,
                    const EnvLookup& env) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config '" + path + "'");
  const std::string text{std::istreambuf_iterator<char>(in), {}};
  return parse(text, secret_keys, env);
}

bool Config::has(std::string_view key) const {
  return values_.find(key) != values_.end();
}

std::optional<std::string> Config::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

long long Config::get_int(std::string_view key, long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw PreconditionError("config key " + std::string(key) +
                            ": expected an integer, got '" + *v + "'");
  }
  return out;
}

double Config::get_double(std::string_view key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const double out = std::stod(*v, &used);
    if (used == v->size()) return out;
  } catch (const std::exception&) {
  }
  throw PreconditionError("config key " + std::string(key) +
                          ": expected a number, got '" + *v + "'");
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw PreconditionError("config key " + std::string(key) +
                          ": expected a boolean, got '" + *v + "'");
}

void Config::set(std::string key, std::string value) {
  values_.insert_or_assign(std::move(key), std::move(value));
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    const bool secret = std::find(secrets_.begin(), secrets_.end(), k) != secrets_.end();
    out += k;
    out += '=';
    out += secret ? std::string("<redacted>") : v;
    out += '\n';
  }
  return out;
}

}  // namespace synthcoll

#include "fhd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace fhd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& v, int line, const std::string& key) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(line, "malformed number for '" + key + "': '" + v + "'");
  }
  return out;
}

long long parse_integer(const std::string& v, int line, const std::string& key) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(line, "malformed integer for '" + key + "': '" + v + "'");
  }
  return out;
}

int parse_count(const std::string& v, int line, const std::string& key, int minimum) {
  const long long n = parse_integer(v, line, key);
  if (n < minimum || n > 1'000'000) {
    throw ConfigError(line, "'" + key + "' must be an integer >= " + std::to_string(minimum));
  }
  return static_cast<int>(n);
}

double parse_positive(const std::string& v, int line, const std::string& key) {
  const double x = parse_real(v, line, key);
  if (!(x > 0.0)) throw ConfigError(line, "'" + key + "' must be positive");
  return x;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message : "config: " + message),
      line_(line) {}

StudyOptions RunConfig::study_options() const {
  StudyOptions o;
  o.pair = pair;
  o.levels = levels;
  o.params = params;
  o.picard_iters = picard_iters;
  o.oseen_iters = oseen_iters;
  o.quad_bump = quad_bump;
  return o;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::optional<double> chi0;
  int gamma_line = 0;
  int chi0_line = 0;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "missing key");
    if (value.empty()) throw ConfigError(line, "missing value for '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(line, "duplicate key '" + key + "'");

    if (key == "study") {
      cfg.study = value;
    } else if (key == "pair") {
      try {
        cfg.pair = parse_element_pair(value);
      } catch (const std::invalid_argument&) {
        throw ConfigError(line, "pair must be l0 or l1, got '" + value + "'");
      }
    } else if (key == "levels") {
      cfg.levels.clear();
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) throw ConfigError(line, "empty entry in levels");
        cfg.levels.push_back(parse_count(t, line, "levels", 1));
      }
      for (std::size_t i = 1; i < cfg.levels.size(); ++i) {
        if (cfg.levels[i] <= cfg.levels[i - 1]) throw ConfigError(line, "levels must be ascending");
      }
    } else if (key == "mu0") {
      cfg.params.mu0 = parse_positive(value, line, key);
    } else if (key == "Ms") {
      cfg.params.Ms = parse_positive(value, line, key);
    } else if (key == "gamma") {
      cfg.params.gamma = parse_positive(value, line, key);
      gamma_line = line;
    } else if (key == "chi0") {
      chi0 = parse_positive(value, line, key);
      chi0_line = line;
    } else if (key == "rho") {
      cfg.params.rho = parse_positive(value, line, key);
    } else if (key == "eta") {
      cfg.params.eta = parse_positive(value, line, key);
    } else if (key == "picard_iters") {
      cfg.picard_iters = parse_count(value, line, key, 1);
    } else if (key == "oseen_iters") {
      cfg.oseen_iters = parse_count(value, line, key, 1);
    } else if (key == "quad_bump") {
      cfg.quad_bump = parse_count(value, line, key, 0);
    } else if (key == "seed") {
      const long long s = parse_integer(value, line, key);
      if (s < 0) throw ConfigError(line, "seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "out_csv") {
      cfg.out_csv = value;
    } else if (key == "out_json") {
      cfg.out_json = value;
    } else {
      throw ConfigError(line, "unknown key '" + key + "'");
    }
  }
  if (chi0) {
    if (gamma_line > 0) throw ConfigError(std::max(gamma_line, chi0_line), "gamma and chi0 are mutually exclusive");
    cfg.params.gamma = 3.0 * *chi0 / cfg.params.Ms;
  }
  if (cfg.levels.empty()) throw ConfigError(0, "levels must not be empty");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fhd

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tpsmix/parallel.hpp"

namespace tpsmix {

/// An exponent given as text ("7/3", "3", "0.5") with its nearest double.
struct MuValue {
  std::string text;
  double value = 0.0;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto end = pos == std::string_view::npos ? s.size() : pos;
    if (auto item = trim(s.substr(start, end - start)); !item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

inline int parse_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  return v;
}

}  // namespace detail

/// Parses "p/q" or a plain decimal.
inline MuValue parse_mu(std::string_view text) {
  MuValue mu;
  mu.text = detail::trim(text);
  if (const auto slash = mu.text.find('/'); slash != std::string::npos) {
    const double p = detail::parse_double(detail::trim(mu.text.substr(0, slash)));
    const double q = detail::parse_double(detail::trim(mu.text.substr(slash + 1)));
    if (q == 0.0) throw std::invalid_argument("zero denominator in '" + mu.text + "'");
    mu.value = p / q;
  } else {
    mu.value = detail::parse_double(mu.text);
  }
  if (!(mu.value > 0.0 && mu.value < 4.0)) {
    throw std::invalid_argument("mu must lie in (0, 4), got '" + mu.text + "'");
  }
  return mu;
}

inline std::vector<MuValue> parse_mu_list(std::string_view text) {
  std::vector<MuValue> out;
  for (const auto& item : detail::split(text, ',')) out.push_back(parse_mu(item));
  if (out.empty()) throw std::invalid_argument("empty mu list");
  return out;
}

inline std::vector<int> parse_n_list(std::string_view text) {
  std::vector<int> out;
  for (const auto& item : detail::split(text, ',')) {
    const int n = detail::parse_int(item);
    if (n < 1) throw std::invalid_argument("n must be >= 1, got " + item);
    out.push_back(n);
  }
  if (out.empty()) throw std::invalid_argument("empty n list");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<MuValue> default_mu_list() {
  return parse_mu_list("1/3,2/3,1,4/3,5/3,7/3,8/3,3,10/3,11/3");
}

struct ExperimentConfig {
  std::vector<int> n_list;  ///< empty: each command uses its own default
  std::vector<MuValue> mu_list = default_mu_list();
  int eval_density = 8;  ///< points per knot interval for profiles and the Lebesgue probe
  std::string output_dir = ".";
  unsigned threads = default_thread_count();
  bool deterministic = false;

  unsigned worker_count() const { return deterministic ? 1u : std::max(1u, threads); }

  std::vector<int> n_list_or(std::vector<int> fallback) const {
    return n_list.empty() ? fallback : n_list;
  }
};

/// Applies `key = value` lines; '#' starts a comment. Recognized keys:
/// n_list, mu_list, eval_density, out, threads, deterministic.
inline void apply_config_text(ExperimentConfig& config, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = detail::trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = detail::trim(content.substr(0, eq));
    const std::string value = detail::trim(content.substr(eq + 1));
    if (key == "n_list") {
      config.n_list = parse_n_list(value);
    } else if (key == "mu_list") {
      config.mu_list = parse_mu_list(value);
    } else if (key == "eval_density") {
      config.eval_density = detail::parse_int(value);
      if (config.eval_density < 1) throw std::invalid_argument("eval_density must be >= 1");
    } else if (key == "out" || key == "output_dir") {
      config.output_dir = value;
    } else if (key == "threads") {
      config.threads = static_cast<unsigned>(std::max(1, detail::parse_int(value)));
    } else if (key == "deterministic") {
      config.deterministic = value == "1" || value == "true" || value == "yes";
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
}

inline void apply_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  apply_config_text(config, in);
}

}  // namespace tpsmix

// Copyright 2026 The qmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// @file
/// Experiment configuration: a key-value document, one `key = value` per
/// line, '#' starts a comment, lists are comma separated.
///
///   experiment = scan2x2
///   eta = 0.245
///   grid = 100
///   csi = 1, 2, 3, 4

#include <qmimo/cloner.hpp>
#include <qmimo/purification.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmimo {

/// Configuration error; field() names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"scan2x2", "scan4x4", "tradeoff", "gains", "qr-dump", "validate"};
  return kinds;
}

/// Cloner asymmetry: the symmetric cloner, a line-searched optimum, or a fixed value.
struct AsymmetrySetting {
  enum class Mode { symmetric, optimize, fixed } mode = Mode::symmetric;
  double a = kSymmetricA;

  std::string str() const {
    switch (mode) {
      case Mode::symmetric: return "symmetric";
      case Mode::optimize: return "optimize";
      case Mode::fixed: break;
    }
    std::ostringstream os;
    os.precision(17);
    os << a;
    return os.str();
  }
};

struct ExperimentConfig {
  std::string experiment;

  // 2x2 link.
  double eta = 0.245;
  double lambda1 = 0.1;
  double lambda2 = 0.2;
  /// Cells per depolarising axis for region and gain scans (lambda1 < lambda2 mask).
  int grid = 100;
  std::vector<int> csi{1, 2, 3, 4};
  /// Crosstalk axis of the gain scan: eta_points values evenly covering [0, 0.5].
  int eta_points = 11;

  // Trade-off curves (uniform depolarisation).
  std::vector<double> lambdas{0.1, 0.2, 0.3};
  std::vector<AsymmetrySetting> asymmetry{{AsymmetrySetting::Mode::symmetric, kSymmetricA},
                                          {AsymmetrySetting::Mode::optimize, kSymmetricA}};

  // Cloner for qr-dump.
  AsymmetrySetting a{};

  // 4x4 link.
  std::vector<int> clones{1, 2, 4};
  int grid4x4 = 20;
  int quadrature_theta = 4;
  int quadrature_phi = 8;

  // Solver and searches.
  double p_step = 0.02;
  double search_p_step = 0.1;
  double a_step = 0.01;
  double a_tolerance = 1e-4;
  double tolerance = 1e-9;
  int max_iterations = 200;

  // Monte Carlo oracles.
  std::size_t samples = 100000;
  std::optional<std::uint64_t> seed;
  /// Fault injection for the validation suite: flips the sign of eta inside
  /// the crossing-probability oracle.
  bool corrupt_eta_sign = false;

  std::string out = ".";
  int threads = 1;

  /// Checks every field against its allowed range.
  void validate() const;
  /// True when the experiment draws random numbers.
  bool uses_monte_carlo() const { return experiment == "validate"; }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& key, const std::string& v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    std::string item = trim(v.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (item.empty()) throw ConfigError(key, "empty list item");
    out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(x)) throw ConfigError(key, "expected a number, got '" + v + "'");
  return x;
}

inline long long to_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return x;
}

inline std::uint64_t to_u64(const std::string& key, const std::string& v) {
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ConfigError(key, "expected an unsigned 64-bit integer, got '" + v + "'");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError(key, "value '" + v + "' is out of range");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

inline AsymmetrySetting to_asymmetry(const std::string& key, const std::string& v) {
  if (v == "symmetric") return {AsymmetrySetting::Mode::symmetric, kSymmetricA};
  if (v == "optimize") return {AsymmetrySetting::Mode::optimize, kSymmetricA};
  return {AsymmetrySetting::Mode::fixed, to_double(key, v)};
}

}  // namespace detail

inline void ExperimentConfig::validate() const {
  if (std::find(experiment_kinds().begin(), experiment_kinds().end(), experiment) == experiment_kinds().end()) {
    throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
  }
  auto in = [](const char* key, double v, double lo, double hi) {
    if (!(v >= lo && v <= hi)) {
      std::ostringstream os;
      os << "value " << v << " outside [" << lo << ", " << hi << "]";
      throw ConfigError(key, os.str());
    }
  };
  in("eta", eta, 0.0, 0.5);
  in("lambda1", lambda1, 0.0, 1.0);
  in("lambda2", lambda2, 0.0, 1.0);
  if (grid < 1 || grid > 1000) throw ConfigError("grid", "must be in 1..1000");
  if (csi.empty()) throw ConfigError("csi", "need at least one knowledge level");
  for (int c : csi) {
    if (c < 1 || c > 4) throw ConfigError("csi", "knowledge levels are 1..4");
  }
  if (eta_points < 1 || eta_points > 1000) throw ConfigError("eta_points", "must be in 1..1000");
  if (lambdas.empty()) throw ConfigError("lambdas", "need at least one value");
  for (double l : lambdas) in("lambdas", l, 0.0, 1.0);
  if (asymmetry.empty()) throw ConfigError("asymmetry", "need at least one mode");
  for (const auto& s : asymmetry) {
    if (s.mode == AsymmetrySetting::Mode::fixed) in("asymmetry", s.a, 0.0, 1.0);
  }
  if (a.mode == AsymmetrySetting::Mode::optimize) throw ConfigError("a", "qr-dump needs a fixed or symmetric cloner");
  if (a.mode == AsymmetrySetting::Mode::fixed) in("a", a.a, 0.0, 1.0);
  if (clones.empty()) throw ConfigError("clones", "need at least one clone count");
  for (int m : clones) {
    if (m != 1 && m != 2 && m != 4) throw ConfigError("clones", "clone counts are 1, 2 or 4");
  }
  if (grid4x4 < 1 || grid4x4 > 1000) throw ConfigError("grid4x4", "must be in 1..1000");
  if (quadrature_theta < 1 || quadrature_theta > 64) throw ConfigError("quadrature_theta", "must be in 1..64");
  if (quadrature_phi < 1 || quadrature_phi > 128) throw ConfigError("quadrature_phi", "must be in 1..128");
  in("p_step", p_step, 1e-4, 1.0);
  in("search_p_step", search_p_step, 1e-4, 1.0);
  if (default_p_grid(p_step).size() < 3) throw ConfigError("p_step", "the p grid needs at least three points");
  if (default_p_grid(search_p_step).size() < 3) {
    throw ConfigError("search_p_step", "the p grid needs at least three points");
  }
  in("a_step", a_step, 1e-4, 1.0);
  in("a_tolerance", a_tolerance, 1e-12, 1.0);
  in("tolerance", tolerance, 1e-14, 1e-2);
  if (max_iterations < 1 || max_iterations > 10000) throw ConfigError("max_iterations", "must be in 1..10000");
  if (samples < 2) throw ConfigError("samples", "need at least two samples");
  if (uses_monte_carlo() && !seed) throw ConfigError("seed", "required for Monte Carlo experiments");
  if (out.empty()) throw ConfigError("out", "output directory must not be empty");
  if (threads < 1 || threads > 1024) throw ConfigError("threads", "must be in 1..1024");
}

/// Parses a configuration document. Unknown keys, duplicates and malformed
/// values raise ConfigError naming the key. Ranges are checked by validate().
inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, std::string> seen;
  std::istringstream is(text);
  int lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "missing key");
    if (value.empty()) throw ConfigError(key, "missing value");
    if (!seen.emplace(key, value).second) throw ConfigError(key, "given more than once");

    using namespace detail;
    auto ints = [&] {
      std::vector<int> v;
      for (const auto& s : split_list(key, value)) v.push_back(static_cast<int>(to_integer(key, s)));
      return v;
    };
    if (key == "experiment") cfg.experiment = value;
    else if (key == "eta") cfg.eta = to_double(key, value);
    else if (key == "lambda1") cfg.lambda1 = to_double(key, value);
    else if (key == "lambda2") cfg.lambda2 = to_double(key, value);
    else if (key == "grid") cfg.grid = static_cast<int>(to_integer(key, value));
    else if (key == "csi") cfg.csi = ints();
    else if (key == "eta_points") cfg.eta_points = static_cast<int>(to_integer(key, value));
    else if (key == "lambdas") {
      cfg.lambdas.clear();
      for (const auto& s : split_list(key, value)) cfg.lambdas.push_back(to_double(key, s));
    } else if (key == "asymmetry") {
      cfg.asymmetry.clear();
      for (const auto& s : split_list(key, value)) cfg.asymmetry.push_back(to_asymmetry(key, s));
    } else if (key == "a") cfg.a = to_asymmetry(key, value);
    else if (key == "clones") cfg.clones = ints();
    else if (key == "grid4x4") cfg.grid4x4 = static_cast<int>(to_integer(key, value));
    else if (key == "quadrature_theta") cfg.quadrature_theta = static_cast<int>(to_integer(key, value));
    else if (key == "quadrature_phi") cfg.quadrature_phi = static_cast<int>(to_integer(key, value));
    else if (key == "p_step") cfg.p_step = to_double(key, value);
    else if (key == "search_p_step") cfg.search_p_step = to_double(key, value);
    else if (key == "a_step") cfg.a_step = to_double(key, value);
    else if (key == "a_tolerance") cfg.a_tolerance = to_double(key, value);
    else if (key == "tolerance") cfg.tolerance = to_double(key, value);
    else if (key == "max_iterations") cfg.max_iterations = static_cast<int>(to_integer(key, value));
    else if (key == "samples") {
      const long long n = to_integer(key, value);
      if (n < 2) throw ConfigError(key, "need at least two samples");
      cfg.samples = static_cast<std::size_t>(n);
    } else if (key == "seed") cfg.seed = to_u64(key, value);
    else if (key == "corrupt_eta_sign") cfg.corrupt_eta_sign = to_bool(key, value);
    else if (key == "out") cfg.out = value;
    else if (key == "threads") cfg.threads = static_cast<int>(to_integer(key, value));
    else throw ConfigError(key, "unknown key");
  }
  return cfg;
}

}  // namespace qmimo

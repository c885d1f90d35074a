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

// Command-line experiment runner.
//
//   qmimo <experiment> [--config file] [--out dir] [--seed n] [--threads n]
//
// Exit codes: 0 success, 1 failed validation, 2 configuration error,
// 3 runtime failure.

#include <qmimo/config.hpp>
#include <qmimo/runner.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

qmimo::ExperimentConfig load(const std::string& kind, const Flags& flags) {
  qmimo::ExperimentConfig cfg;
  if (!flags.config.empty()) {
    std::ifstream in(flags.config);
    if (!in) throw qmimo::ConfigError("config", "cannot read '" + flags.config + "'");
    std::stringstream text;
    text << in.rdbuf();
    cfg = qmimo::parse_config(text.str());
  }
  if (!cfg.experiment.empty() && cfg.experiment != kind) {
    throw qmimo::ConfigError("experiment", "file asks for '" + cfg.experiment + "' but the subcommand is '" + kind + "'");
  }
  cfg.experiment = kind;
  if (flags.out) cfg.out = *flags.out;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.threads) cfg.threads = *flags.threads;
  cfg.validate();
  return cfg;
}

void print(const qmimo::RunReport& report, const qmimo::ExperimentConfig& cfg) {
  if (report.summary.contains("oracles")) {
    for (const auto& o : report.summary["oracles"]) {
      std::cout << (o["pass"].get<bool>() ? "PASS " : "FAIL ") << o["name"].get<std::string>()
                << "  value=" << qmimo::io::format_number(o["value"].get<double>())
                << "  bound=" << qmimo::io::format_number(o["bound"].get<double>());
      if (o.contains("detail")) std::cout << "  (" << o["detail"].get<std::string>() << ")";
      std::cout << '\n';
    }
  }
  for (const auto& f : report.files) std::cout << "wrote " << cfg.out << '/' << f << '\n';
  if (report.summary.contains("solver")) {
    const auto& s = report.summary["solver"];
    std::cout << "solver: " << s["solves"].get<int>() << " solves, worst status "
              << s["worst_status"].get<std::string>() << ", max duality gap "
              << qmimo::io::format_number(s["max_duality_gap"].get<double>()) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum MIMO diversity experiments"};
  app.require_subcommand(1);
  Flags flags;
  struct Kind {
    const char* name;
    const char* help;
  };
  const Kind kinds[] = {
      {"scan2x2", "best-strategy maps over (lambda1, lambda2) per CSI level"},
      {"scan4x4", "purified fidelity of 1, 2 and 4 clones over (eta, lambda) on the 4x4 link"},
      {"tradeoff", "success probability versus purified fidelity curves"},
      {"gains", "ensemble fidelity gains over eta"},
      {"qr-dump", "write Q, R and the knee decoder J as a matrix file"},
      {"validate", "run the oracle suite"},
  };
  for (const auto& k : kinds) {
    auto* sub = app.add_subcommand(k.name, k.help);
    sub->add_option("--config", flags.config, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "seed for Monte Carlo sections");
    sub->add_option("--threads", flags.threads, "worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  qmimo::ExperimentConfig cfg;
  try {
    cfg = load(kind, flags);
  } catch (const qmimo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    const auto report = qmimo::run_experiment(cfg);
    print(report, cfg);
    return report.ok ? 0 : 1;
  } catch (const qmimo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

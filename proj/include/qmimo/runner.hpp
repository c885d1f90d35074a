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
/// Experiment runner: turns an ExperimentConfig into CSV tables, matrix
/// files and a JSON summary in the output directory. Outputs depend only on
/// the configuration (and seed), never on thread scheduling or wall time.

#include <qmimo/channel.hpp>
#include <qmimo/cloner.hpp>
#include <qmimo/config.hpp>
#include <qmimo/haar.hpp>
#include <qmimo/io.hpp>
#include <qmimo/parallel.hpp>
#include <qmimo/purification.hpp>
#include <qmimo/strategies.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace qmimo {

using Json = nlohmann::ordered_json;

/// Aggregated solver outcome of a run.
struct SolverStats {
  int solves = 0;
  double max_gap = 0.0;
  PurificationStatus worst = PurificationStatus::optimal;
  std::map<std::string, int> cells_by_status;

  void add(PurificationStatus status, double gap, int solve_count) {
    solves += solve_count;
    max_gap = std::max(max_gap, gap);
    worst = std::max(worst, status);
    ++cells_by_status[to_string(status)];
  }

  Json json() const {
    Json j;
    j["solves"] = solves;
    j["max_duality_gap"] = max_gap;
    j["worst_status"] = to_string(worst);
    j["cells_by_status"] = cells_by_status;
    return j;
  }
};

struct RunReport {
  Json summary;
  std::vector<std::string> files;
  bool ok = true;
};

inline sdp::Settings solver_settings(const ExperimentConfig& c) { return {c.tolerance, c.max_iterations, 0.98}; }

inline StrategyOptions strategy_options(const ExperimentConfig& c) {
  StrategyOptions o;
  o.p_grid = default_p_grid(c.p_step);
  o.search_p_grid = default_p_grid(c.search_p_step);
  o.a_step = c.a_step;
  o.a_tolerance = c.a_tolerance;
  o.solver = solver_settings(c);
  return o;
}

inline Json config_json(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = c.experiment;
  j["eta"] = c.eta;
  j["lambda1"] = c.lambda1;
  j["lambda2"] = c.lambda2;
  j["grid"] = c.grid;
  j["csi"] = c.csi;
  j["eta_points"] = c.eta_points;
  j["lambdas"] = c.lambdas;
  std::vector<std::string> modes;
  for (const auto& s : c.asymmetry) modes.push_back(s.str());
  j["asymmetry"] = modes;
  j["a"] = c.a.str();
  j["clones"] = c.clones;
  j["grid4x4"] = c.grid4x4;
  j["quadrature_theta"] = c.quadrature_theta;
  j["quadrature_phi"] = c.quadrature_phi;
  j["p_step"] = c.p_step;
  j["search_p_step"] = c.search_p_step;
  j["a_step"] = c.a_step;
  j["a_tolerance"] = c.a_tolerance;
  j["tolerance"] = c.tolerance;
  j["max_iterations"] = c.max_iterations;
  j["samples"] = c.samples;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["corrupt_eta_sign"] = c.corrupt_eta_sign;
  return j;
}

/// Crosstalk axis of the gain scan: n points evenly covering [0, 0.5].
inline std::vector<double> eta_axis(int n) {
  if (n < 1) throw std::domain_error("eta_axis: need at least one point");
  if (n == 1) return {0.0};
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) axis[i] = 0.5 * i / (n - 1);
  return axis;
}

/// Cell centres of the 4x4 study: lambda in (0, 1), eta in (0, 0.5).
inline std::vector<double> eta_axis_4x4(int n) {
  auto axis = lambda_axis(n);
  for (auto& e : axis) e *= 0.5;
  return axis;
}

namespace golden {

/// R of the noiseless symmetric 1->2 cloner, tensor order (clone1, clone2, reference).
inline Matrix symmetric_r() {
  Matrix r = Matrix::Zero(8, 8);
  for (int i : {0, 1, 6, 7}) r(i, i) = 1.0 / 3.0;
  for (int i : {2, 3, 4, 5}) r(i, i) = 1.0 / 6.0;
  r(2, 4) = r(4, 2) = r(3, 5) = r(5, 3) = 1.0 / 6.0;
  return r;
}

/// Q of the same cloner, tensor order (reference, clone1, clone2).
inline Matrix symmetric_q() {
  Matrix q = Matrix::Zero(8, 8);
  q(0, 0) = q(7, 7) = 2.0 / 9.0;
  q(3, 3) = q(4, 4) = 1.0 / 9.0;
  for (auto [i, j] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}, {5, 5}, {5, 6}, {6, 5}, {6, 6}}) q(i, j) = 1.0 / 12.0;
  for (auto [i, j] : {std::pair{1, 4}, {2, 4}, {4, 1}, {4, 2}, {3, 5}, {3, 6}, {5, 3}, {6, 3}}) q(i, j) = 1.0 / 18.0;
  return q;
}

}  // namespace golden

// ---------------------------------------------------------------------------
// Validation oracles.

struct OracleResult {
  std::string name;
  bool pass = false;
  /// Observed deviation (or statistic) and the bound it is held to.
  double value = 0.0;
  double bound = 0.0;
  std::string detail;

  Json json() const {
    Json j;
    j["name"] = name;
    j["pass"] = pass;
    j["value"] = value;
    j["bound"] = bound;
    if (!detail.empty()) j["detail"] = detail;
    return j;
  }
};

namespace detail {

inline OracleResult at_most(std::string name, double value, double bound, std::string detail = {}) {
  return {std::move(name), value <= bound, value, bound, std::move(detail)};
}

inline std::vector<PureQubit> probe_states() {
  std::vector<PureQubit> s;
  for (auto [t, p] : {std::pair{0.0, 0.0}, {3.14159265358979, 0.0}, {1.0, 0.3}, {2.2, 4.0}, {0.4, 2.5}, {1.5708, 1.5708}}) {
    s.push_back(PureQubit::from_angles(t, p));
  }
  return s;
}

/// Probability that stream j ends on k with an optionally corrupted eta sign:
/// the corrupted model uses (-eta)^b (1 - eta)^(1 - b).
inline double oracle_crossing(int j, int k, const std::vector<double>& etas, bool corrupt) {
  if (!corrupt) return crossing_probability(j, k, etas);
  const int x = j ^ k;
  double p = 1.0;
  for (std::size_t l = 0; l < etas.size(); ++l) p *= ((x >> l) & 1) ? -etas[l] : 1.0 - etas[l];
  return p;
}

/// Monte Carlo route of stream j through the crosstalk boxes: each box fires
/// with its own coin and moves the stream to its partner.
inline int sample_route(int j, const std::vector<double>& etas, std::mt19937_64& gen) {
  const int m = static_cast<int>(etas.size());
  const int n = 1 << m;
  int pos = j;
  for (int layer = 1; layer <= m; ++layer) {
    for (const auto& box : layer_boxes(m, layer)) {
      const bool fires = detail::unit_uniform(gen) < etas[layer - 1];
      if (fires) pos = detail::swap_permutation(n, box)[pos];
    }
  }
  return pos;
}

}  // namespace detail

/// Runs the oracle suite. Monte Carlo sections draw from seeded generators
/// only, so repeated runs with the same configuration are identical.
inline std::vector<OracleResult> run_oracles(const ExperimentConfig& cfg) {
  const std::uint64_t seed = cfg.seed.value_or(0);
  std::vector<OracleResult> out;

  // Closed-form matrices of the noiseless symmetric cloner.
  {
    const auto qr = analytic_qr_2x2(symmetric_params(), 0.0, 0.0, 0.0);
    out.push_back(detail::at_most("golden-R", (qr.R - golden::symmetric_r()).cwiseAbs().maxCoeff(), 1e-12));
    out.push_back(
        detail::at_most("golden-Q", (qr.q_reference_first() - golden::symmetric_q()).cwiseAbs().maxCoeff(), 1e-12));
  }

  // Cloner marginals and the asymmetric boundary.
  for (int M : {2, 4}) {
    double dev = 0.0;
    for (const auto& psi : detail::probe_states()) {
      const auto rho = symmetric_clone_state(psi, M);
      for (int k = 0; k < M; ++k) {
        dev = std::max(dev, std::abs(fidelity_with_pure(partial_trace(rho, {k}), psi) - symmetric_fidelity(1, M)));
      }
    }
    out.push_back(detail::at_most("clone-fidelity-M" + std::to_string(M), dev, 1e-10));
  }
  {
    double dev = 0.0;
    const auto psi = PureQubit::from_angles(1.0, 0.3);
    for (int i = 1; i <= 100; ++i) {
      const auto p = params_from_a(i / 100.0);
      const auto rho = two_clone_state(psi, p);
      const double fa = fidelity_with_pure(partial_trace(rho, {0}), psi);
      const double fb = fidelity_with_pure(partial_trace(rho, {1}), psi);
      dev = std::max(dev, std::abs(cloning_boundary_residual(fa, fb)));
    }
    out.push_back(detail::at_most("asymmetric-boundary", dev, 1e-10, "100 points a in (0, 1]"));
  }

  // Haar moments.
  {
    const Quadrature rule{};
    double dev = 0.0;
    for (int k = 1; k <= 3; ++k) {
      dev = std::max(dev, std::abs(haar_average([k](const PureQubit& s) { return s.bloch()[k - 1]; }, rule).value));
      for (int m = 1; m <= 3; ++m) {
        const double v =
            haar_average([k, m](const PureQubit& s) { return s.bloch()[k - 1] * s.bloch()[m - 1]; }, rule).value;
        dev = std::max(dev, std::abs(v - (k == m ? 1.0 / 3.0 : 0.0)));
      }
    }
    out.push_back(detail::at_most("haar-moments-quadrature", dev, 1e-12));
    const auto mc = haar_average([](const PureQubit& s) { return s.bloch()[2] * s.bloch()[2]; },
                                 MonteCarlo{cfg.samples, seed});
    out.push_back(detail::at_most("haar-moments-monte-carlo", std::abs(mc.value - 1.0 / 3.0), 4.0 * mc.std_error,
                                  "second moment of r_z, bound is 4 standard errors"));
  }

  // Channels.
  {
    double worst_row = 0.0;
    const std::vector<double> grid{0.0, 0.1, 0.245, 0.5};
    for (double e1 : grid) {
      for (double e2 : grid) {
        for (const auto& etas : {std::vector<double>{e1}, std::vector<double>{e1, e2}}) {
          const int n = 1 << etas.size();
          for (int j = 0; j < n; ++j) {
            double row = 0.0;
            for (int k = 0; k < n; ++k) row += detail::oracle_crossing(j, k, etas, cfg.corrupt_eta_sign);
            worst_row = std::max(worst_row, std::abs(row - 1.0));
          }
        }
      }
    }
    out.push_back(detail::at_most("crossing-row-sums", worst_row, 1e-12,
                                  cfg.corrupt_eta_sign ? "eta sign corrupted" : ""));

    const std::vector<double> etas{0.245, 0.3};
    std::mt19937_64 gen(seed);
    double dev = 0.0;
    for (int j = 0; j < 4; ++j) {
      std::vector<double> counts(4, 0.0);
      for (std::size_t s = 0; s < cfg.samples; ++s) counts[detail::sample_route(j, etas, gen)] += 1.0;
      for (int k = 0; k < 4; ++k) {
        dev = std::max(dev, std::abs(counts[k] / cfg.samples - detail::oracle_crossing(j, k, etas, cfg.corrupt_eta_sign)));
      }
    }
    out.push_back(detail::at_most("crossing-monte-carlo", dev, 1e-2, "eta = (0.245, 0.3)"));

    double worst_psd = 0.0, worst_tp = 0.0;
    for (const auto& spec : {MimoChannelSpec::two_by_two(0.245, 0.1, 0.2), MimoChannelSpec::two_by_two(0.5, 0.0, 1.0),
                             MimoChannelSpec::four_by_four(0.3, 0.1, 0.2)}) {
      const auto rep = cptp_check([&](const Matrix& m) { return apply_mimo_channel(m, spec); }, spec.streams());
      worst_psd = std::max(worst_psd, -rep.choi_min_eigenvalue);
      worst_tp = std::max(worst_tp, rep.trace_preservation_error);
    }
    out.push_back(detail::at_most("cptp-choi-psd", worst_psd, kPsdTol, "negated minimum Choi eigenvalue"));
    out.push_back(detail::at_most("cptp-trace-preserving", worst_tp, kTraceTol));
  }

  // Analytic against numeric Q and R.
  {
    const std::vector<std::array<double, 4>> tuples{{kSymmetricA, 0.245, 0.1, 0.2}, {0.8, 0.4, 0.05, 0.7}};
    double quad = 0.0, z = 0.0;
    for (std::size_t t = 0; t < tuples.size(); ++t) {
      const auto [a, eta, l1, l2] = tuples[t];
      const auto p = params_from_a(a);
      const auto ref = analytic_qr_2x2(p, eta, l1, l2);
      const auto spec = MimoChannelSpec::two_by_two(eta, l1, l2);
      const auto num =
          numeric_qr(two_clone_encoder(p), spec, {0, 1}, RhoSource::channel_output, Quadrature{});
      quad = std::max(quad, compare_qr(num, ref).max_deviation);
      const auto mc = numeric_qr(two_clone_encoder(p), spec, {0, 1}, RhoSource::channel_output,
                                 MonteCarlo{cfg.samples, seed + t});
      const auto agreement = compare_qr(mc, ref);
      z = std::max(z, agreement.max_deviation / agreement.max_std_error);
    }
    out.push_back(detail::at_most("qr-analytic-vs-quadrature", quad, 1e-8));
    out.push_back(detail::at_most("qr-analytic-vs-monte-carlo", z, 3.0,
                                  "max deviation in units of the largest entry standard error"));
  }

  // Purification solver.
  {
    const auto settings = solver_settings(cfg);
    const auto identity_qr =
        qr_from_state_map([](const PureQubit& psi) { return psi.projector(); }, 1, Quadrature{4, 8}).qr;
    const auto ident = solve_purification({identity_qr, 1.0}, settings);
    out.push_back(detail::at_most("sdp-noiseless-identity", std::abs(ident.fidelity - 1.0), 1e-8));

    const auto depol_qr = qr_from_state_map(
        [](const PureQubit& psi) { return Matrix(0.7 * psi.projector() + 0.15 * pauli::identity()); }, 1,
        Quadrature{4, 8}).qr;
    const auto depol = solve_purification({depol_qr, 1.0}, settings);
    out.push_back(detail::at_most("sdp-depolarized-identity", std::abs(depol.fidelity - 0.85), 1e-8));

    const auto curve =
        tradeoff_curve(analytic_qr_2x2(symmetric_params(), 0.245, 0.2, 0.2), default_p_grid(cfg.p_step), settings);
    double gap = 0.0, rise = 0.0;
    bool all_optimal = true;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      gap = std::max(gap, curve[i].solution.duality_gap);
      all_optimal = all_optimal && curve[i].solution.ok();
      if (i > 0) rise = std::max(rise, curve[i].solution.fidelity - curve[i - 1].solution.fidelity);
    }
    auto duality = detail::at_most("sdp-duality-gap", gap, 1e-6);
    duality.pass = duality.pass && all_optimal;
    if (!all_optimal) duality.detail = "non-optimal solver status on the trade-off curve";
    out.push_back(duality);
    out.push_back(detail::at_most("tradeoff-monotone", rise, 2e-6, "largest increase of F_P between grid points"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiments.

namespace detail {

inline std::string fmt(double v) { return io::format_number(v); }

class OutputDir {
 public:
  OutputDir(const std::string& dir, RunReport& report) : dir_(dir), report_(report) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    report_.files.push_back(name);
    return os;
  }

 private:
  std::filesystem::path dir_;
  RunReport& report_;
};

inline void run_scan2x2(const ExperimentConfig& cfg, OutputDir& dir, RunReport& report) {
  StrategyEvaluator evaluator(strategy_options(cfg));
  const auto axis = lambda_axis(cfg.grid);
  SolverStats stats;
  Json regions = Json::object();
  for (int csi : cfg.csi) {
    const auto cells = best_strategy_region(cfg.eta, axis, csi, evaluator, cfg.threads);
    auto os = dir.open("scan2x2_case" + std::to_string(csi) + ".csv");
    io::CsvWriter csv(os, {"lambda1", "lambda2", "F_strategy1", "F_strategy2", "F_strategy3", "argmax",
                           "a_strategy2", "a_strategy3", "p_strategy3", "FP_strategy3", "design_strategy3",
                           "duality_gap", "status"});
    std::array<int, 3> counts{};
    for (const auto& c : cells) {
      const auto& r3 = c.results[2];
      stats.add(r3.status, r3.max_gap, r3.solves);
      ++counts[c.best - 1];
      csv.row({fmt(c.lambda1), fmt(c.lambda2), fmt(c.results[0].fidelity), fmt(c.results[1].fidelity),
               fmt(r3.fidelity), std::to_string(c.best), fmt(c.results[1].a), fmt(r3.a), fmt(r3.p),
               fmt(r3.post_selected), fmt(r3.design_value), fmt(r3.max_gap), to_string(r3.status)});
    }
    Json region;
    region["cells"] = cells.size();
    region["strategy_wins"] = counts;
    regions[std::to_string(csi)] = region;
  }
  report.summary["regions"] = regions;
  report.summary["solver"] = stats.json();
}

inline void run_scan4x4(const ExperimentConfig& cfg, OutputDir& dir, RunReport& report) {
  DistributionOptions opt;
  opt.p_grid = default_p_grid(cfg.p_step);
  opt.quadrature = Quadrature{cfg.quadrature_theta, cfg.quadrature_phi};
  opt.solver = solver_settings(cfg);
  const auto etas = eta_axis_4x4(cfg.grid4x4);
  const auto lambdas = lambda_axis(cfg.grid4x4);
  const std::size_t nm = cfg.clones.size();
  std::vector<DistributionResult> results(etas.size() * lambdas.size() * nm);
  parallel_for(results.size(), cfg.threads, [&](std::size_t i) {
    const std::size_t m = i % nm;
    const std::size_t l = (i / nm) % lambdas.size();
    const std::size_t e = i / (nm * lambdas.size());
    results[i] = distribution_fidelity(cfg.clones[m], etas[e], lambdas[l], opt);
  });
  SolverStats stats;
  auto os = dir.open("scan4x4.csv");
  io::CsvWriter csv(os, {"eta", "lambda", "M", "clone_fidelity", "p", "F_P", "F_effective", "duality_gap", "status"});
  for (const auto& r : results) {
    stats.add(r.purified.status, r.purified.max_gap, r.purified.solves);
    csv.row({fmt(r.eta), fmt(r.lambda), std::to_string(r.M), fmt(r.clone_fidelity), fmt(r.purified.p),
             fmt(r.purified.fidelity), fmt(r.purified.effective), fmt(r.purified.max_gap), to_string(r.purified.status)});
  }
  report.summary["grid_points"] = etas.size() * lambdas.size();
  report.summary["solver"] = stats.json();
}

inline void run_tradeoff(const ExperimentConfig& cfg, OutputDir& dir, RunReport& report) {
  StrategyEvaluator evaluator(strategy_options(cfg));
  const auto grid = default_p_grid(cfg.p_step);
  struct Job {
    double lambda;
    AsymmetrySetting mode;
  };
  std::vector<Job> jobs;
  for (double l : cfg.lambdas) {
    for (const auto& m : cfg.asymmetry) jobs.push_back({l, m});
  }
  std::vector<std::pair<double, std::vector<TradeoffPoint>>> curves(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const auto& job = jobs[i];
    double a = job.mode.a;
    if (job.mode.mode == AsymmetrySetting::Mode::optimize) {
      a = evaluator.optimize_asymmetry(AsymmetryObjective::matched_purifier, {cfg.eta, job.lambda, job.lambda}).x;
    }
    curves[i] = {a, tradeoff_curve(analytic_qr_2x2(params_from_a(a), cfg.eta, job.lambda, job.lambda), grid,
                                   solver_settings(cfg))};
  });
  SolverStats stats;
  Json knees = Json::array();
  auto os = dir.open("tradeoff.csv");
  io::CsvWriter csv(os, {"lambda", "a_mode", "a", "p", "F_P", "knee", "duality_gap", "status"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& [a, curve] = curves[i];
    const std::size_t knee = knee_index(curve);
    for (std::size_t k = 0; k < curve.size(); ++k) {
      const auto& s = curve[k].solution;
      stats.add(s.status, s.duality_gap, 1);
      csv.row({fmt(jobs[i].lambda), jobs[i].mode.str(), fmt(a), fmt(curve[k].p), fmt(s.fidelity), k == knee ? "1" : "0",
               fmt(s.duality_gap), to_string(s.status)});
    }
    Json kj;
    kj["lambda"] = jobs[i].lambda;
    kj["a_mode"] = jobs[i].mode.str();
    kj["a"] = a;
    kj["p"] = curve[knee].p;
    kj["F_P"] = curve[knee].solution.fidelity;
    knees.push_back(kj);
  }
  report.summary["knees"] = knees;
  report.summary["solver"] = stats.json();
}

inline void run_gains(const ExperimentConfig& cfg, OutputDir& dir, RunReport& report) {
  StrategyEvaluator evaluator(strategy_options(cfg));
  const auto points = fidelity_gain_scan(eta_axis(cfg.eta_points), lambda_axis(cfg.grid), cfg.csi, evaluator, cfg.threads);
  SolverStats stats;
  auto os = dir.open("gains.csv");
  io::CsvWriter csv(os, {"eta", "csi", "cells", "mean_strategy1", "mean_strategy2", "mean_strategy3", "clone_gain",
                         "purification_gain", "relative_gain", "duality_gap", "status"});
  double best = -INFINITY;
  Json best_point;
  for (const auto& g : points) {
    stats.add(g.status, g.max_gap, 0);
    csv.row({fmt(g.eta), std::to_string(g.csi), std::to_string(g.cells), fmt(g.mean[0]), fmt(g.mean[1]), fmt(g.mean[2]),
             fmt(g.clone_gain), fmt(g.purification_gain), fmt(g.relative_gain), fmt(g.max_gap), to_string(g.status)});
    if ((g.csi == 1 || g.csi == 3) && g.relative_gain > best) {
      best = g.relative_gain;
      best_point = {{"eta", g.eta}, {"csi", g.csi}, {"relative_gain", g.relative_gain}};
    }
  }
  if (!best_point.is_null()) report.summary["max_relative_gain_without_receiver_csi"] = best_point;
  report.summary["solver"] = stats.json();
}

inline std::string register_layout(int K, const char* last, bool last_first) {
  std::string s = last_first ? std::string(last) : "";
  for (int k = 1; k <= K; ++k) s += (s.empty() ? "" : ",") + std::string("clone") + std::to_string(k);
  if (!last_first) s += std::string(",") + last;
  return s;
}

inline void run_qr_dump(const ExperimentConfig& cfg, OutputDir& dir, RunReport& report) {
  const auto qr = analytic_qr_2x2(params_from_a(cfg.a.a), cfg.eta, cfg.lambda1, cfg.lambda2);
  const auto op = knee_operating_point(qr, default_p_grid(cfg.p_step), solver_settings(cfg));
  auto os = dir.open("qr_dump.txt");
  io::write_matrices(os, {{"Q", register_layout(qr.K, "reference", false), qr.Q},
                          {"R", register_layout(qr.K, "reference", false), qr.R},
                          {"Q_reference_first", register_layout(qr.K, "reference", true), qr.q_reference_first()},
                          {"R_reference_first", register_layout(qr.K, "reference", true), qr.r_reference_first()},
                          {"J", register_layout(qr.K, "output", false), op.J}});
  SolverStats stats;
  stats.add(op.status, op.max_gap, op.solves);
  Json knee;
  knee["p"] = op.p;
  knee["F_P"] = op.fidelity;
  knee["F_effective"] = op.effective;
  report.summary["knee"] = knee;
  report.summary["solver"] = stats.json();
}

inline void run_validate(const ExperimentConfig& cfg, OutputDir& dir, RunReport& report) {
  const auto oracles = run_oracles(cfg);
  Json list = Json::array();
  int failed = 0;
  for (const auto& o : oracles) {
    list.push_back(o.json());
    failed += !o.pass;
  }
  Json doc;
  doc["oracles"] = list;
  doc["failed"] = failed;
  auto os = dir.open("validate.json");
  os << doc.dump(2) << '\n';
  report.summary["oracles"] = list;
  report.summary["failed"] = failed;
  report.ok = failed == 0;
}

}  // namespace detail

/// Runs one experiment into cfg.out and writes <experiment>_summary.json.
inline RunReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunReport report;
  detail::OutputDir dir(cfg.out, report);
  report.summary["experiment"] = cfg.experiment;
  report.summary["parameters"] = config_json(cfg);
  if (cfg.experiment == "scan2x2") detail::run_scan2x2(cfg, dir, report);
  else if (cfg.experiment == "scan4x4") detail::run_scan4x4(cfg, dir, report);
  else if (cfg.experiment == "tradeoff") detail::run_tradeoff(cfg, dir, report);
  else if (cfg.experiment == "gains") detail::run_gains(cfg, dir, report);
  else if (cfg.experiment == "qr-dump") detail::run_qr_dump(cfg, dir, report);
  else detail::run_validate(cfg, dir, report);
  report.summary["ok"] = report.ok;
  report.summary["outputs"] = report.files;
  auto os = dir.open(cfg.experiment + "_summary.json");
  os << report.summary.dump(2) << '\n';
  return report;
}

}  // namespace qmimo

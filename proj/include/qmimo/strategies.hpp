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
/// Transmission strategies over the 2x2 link under the four levels of
/// statistical channel knowledge, plus the 4x4 cloning-degree study.
///
/// Strategy ids are "c.s": c is the knowledge level (1 none, 2 receiver only,
/// 3 transmitter only, 4 both) and s the strategy (1 direct transmission,
/// 2 cloning with single-output selection, 3 cloning with purification).
/// Purifying strategies report the effective fidelity pF + (1 - p)/2 at the
/// knee of the purifier's trade-off curve.

#include <qmimo/channel.hpp>
#include <qmimo/cloner.hpp>
#include <qmimo/haar.hpp>
#include <qmimo/parallel.hpp>
#include <qmimo/purification.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmimo {

inline constexpr double kMaximallyMixedFidelity = 0.5;

/// Crosstalk strength and the two depolarising strengths of the 2x2 link.
/// Channel 1 is the better one whenever lambda1 < lambda2.
struct ChannelParams2x2 {
  double eta = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  void validate() const {
    if (!(eta >= 0.0 && eta <= 0.5)) throw std::domain_error("ChannelParams2x2: eta must lie in [0, 0.5]");
    if (!(lambda1 >= 0.0 && lambda1 <= 1.0 && lambda2 >= 0.0 && lambda2 <= 1.0)) {
      throw std::domain_error("ChannelParams2x2: lambda must lie in [0, 1]");
    }
  }

  MimoChannelSpec spec() const { return MimoChannelSpec::two_by_two(eta, lambda1, lambda2); }
};

/// Average fidelity when the bare qubit enters stream `send` and is read from
/// stream `receive` (1-based); the idle input carries I/2.
inline double direct_fidelity(const ChannelParams2x2& c, int send, int receive) {
  c.validate();
  if (send < 1 || send > 2 || receive < 1 || receive > 2) {
    throw std::out_of_range("direct_fidelity: streams are 1 or 2");
  }
  const double arrive = send == receive ? 1.0 - c.eta : c.eta;
  const double lambda = receive == 1 ? c.lambda1 : c.lambda2;
  return arrive * (1.0 - 0.5 * lambda) + (1.0 - arrive) * 0.5;
}

/// Average fidelity of output `stream` (1-based) when the 1->2 cloner with
/// asymmetry a feeds both inputs.
inline double clone_fidelity(const ChannelParams2x2& c, double a, int stream) {
  c.validate();
  if (stream < 1 || stream > 2) throw std::out_of_range("clone_fidelity: stream is 1 or 2");
  const auto np = noise_process(params_from_a(a), c.eta, c.lambda1, c.lambda2);
  return 0.5 * (1.0 + (stream == 1 ? np.gamma1p : np.gamma2p));
}

struct CaseId {
  int csi = 1;
  int strategy = 1;

  std::string str() const { return std::to_string(csi) + "." + std::to_string(strategy); }

  static CaseId parse(const std::string& s) {
    if (s.size() == 3 && s[1] == '.' && s[0] >= '1' && s[0] <= '4' && s[2] >= '1' && s[2] <= '3') {
      return {s[0] - '0', s[2] - '0'};
    }
    throw std::invalid_argument("unknown strategy id '" + s + "'");
  }

  bool operator==(const CaseId&) const = default;
};

struct StrategyResult {
  CaseId id;
  /// Average end-to-end fidelity of the strategy.
  double fidelity = kMaximallyMixedFidelity;
  /// Cloner asymmetry; NaN for direct transmission.
  double a = std::numeric_limits<double>::quiet_NaN();
  /// Success probability and post-selected fidelity on the true link.
  double p = std::numeric_limits<double>::quiet_NaN();
  double post_selected = std::numeric_limits<double>::quiet_NaN();
  /// Operating point the purifier was designed for and the effective fidelity
  /// it promises under that design assumption.
  double p_design = std::numeric_limits<double>::quiet_NaN();
  double design_value = std::numeric_limits<double>::quiet_NaN();
  PurificationStatus status = PurificationStatus::optimal;
  double max_gap = 0.0;
  int solves = 0;
};

struct LineSearchResult {
  double x = 0.0;
  double value = -std::numeric_limits<double>::infinity();
  int evaluations = 0;
};

/// Maximises f on [lo, hi]: uniform coarse grid of spacing close to `step`
/// (both ends included), then golden-section refinement to width `tol`
/// around the best grid point. Returns the best point evaluated; grid ties
/// keep the smaller x.
inline LineSearchResult line_search_max(const std::function<double(double)>& f, double lo, double hi,
                                        double step, double tol) {
  if (!(hi >= lo) || !(step > 0.0) || !(tol > 0.0)) throw std::domain_error("line_search_max: bad bracket");
  LineSearchResult best;
  auto consider = [&](double x) {
    const double v = f(x);
    ++best.evaluations;
    if (v > best.value) {
      best.value = v;
      best.x = x;
    }
    return v;
  };
  const int n = std::max(1, static_cast<int>(std::lround((hi - lo) / step)));
  const double h = (hi - lo) / n;
  for (int k = 0; k <= n; ++k) consider(k == n ? hi : lo + k * h);
  if (hi == lo) return best;

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(lo, best.x - h);
  double b = std::min(hi, best.x + h);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = consider(c);
  double fd = consider(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = consider(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = consider(d);
    }
  }
  return best;
}

struct StrategyOptions {
  /// p grid of the reported operating point.
  std::vector<double> p_grid = default_p_grid();
  /// p grid used while searching for the cloner asymmetry.
  std::vector<double> search_p_grid = default_p_grid();
  double a_step = 0.01;
  double a_tolerance = 1e-4;
  sdp::Settings solver{1e-9, 200, 0.98};
};

enum class AsymmetryObjective {
  random_output,       // 1/2 (F_c1 + F_c2)
  best_output,         // F_c1
  mismatched_purifier, // purifier designed on the noiseless cloner, applied to the link
  matched_purifier,    // purifier designed on the link
};

/// Evaluates strategies; caches purifiers designed on the noiseless cloner
/// (they do not depend on the link) and is safe to share between threads.
class StrategyEvaluator {
 public:
  explicit StrategyEvaluator(StrategyOptions options = {}) : options_(std::move(options)) {}

  const StrategyOptions& options() const { return options_; }

  /// Knee operating point of the purifier designed for the cloner alone.
  std::shared_ptr<const OperatingPoint> design(double a, bool search) {
    const auto key = std::make_pair(a, search);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = designs_.find(key);
      if (it != designs_.end()) return it->second;
    }
    auto op = std::make_shared<const OperatingPoint>(knee_operating_point(
        analytic_qr_2x2(params_from_a(a), 0.0, 0.0, 0.0), search ? options_.search_p_grid : options_.p_grid,
        options_.solver));
    std::lock_guard<std::mutex> lock(mutex_);
    return designs_.emplace(key, std::move(op)).first->second;
  }

  LineSearchResult optimize_asymmetry(AsymmetryObjective objective, const ChannelParams2x2& c) {
    c.validate();
    return line_search_max([&](double a) { return value(objective, a, c); }, options_.a_step, 1.0,
                           options_.a_step, options_.a_tolerance);
  }

  StrategyResult evaluate(CaseId id, const ChannelParams2x2& c) {
    c.validate();
    const double F1 = direct_fidelity(c, 1, 1);
    const double F2 = direct_fidelity(c, 2, 2);
    StrategyResult r;
    switch (id.csi * 10 + id.strategy) {
      case 11:
        r.fidelity = 0.5 * kMaximallyMixedFidelity + 0.25 * (F1 + F2);
        break;
      case 12:
        r = cloned(kSymmetricA, c, false);
        break;
      case 13:
        r = mismatched(kSymmetricA, c, false);
        break;
      case 21:
        r.fidelity = 0.5 * (F1 + F2);
        break;
      case 22:
        r = cloned(kSymmetricA, c, true);
        break;
      case 23:
        r = matched(kSymmetricA, c, false);
        break;
      case 31:
        r.fidelity = 0.5 * (F1 + kMaximallyMixedFidelity);
        break;
      case 32:
        r = cloned(optimize_asymmetry(AsymmetryObjective::random_output, c).x, c, false);
        break;
      case 33:
        r = mismatched(optimize_asymmetry(AsymmetryObjective::mismatched_purifier, c).x, c, false);
        break;
      case 41:
        r.fidelity = F1;
        break;
      case 42:
        r = cloned(optimize_asymmetry(AsymmetryObjective::best_output, c).x, c, true);
        break;
      case 43: {
        const double a = optimize_asymmetry(AsymmetryObjective::matched_purifier, c).x;
        r = matched(a, c, false);
        break;
      }
      default:
        throw std::invalid_argument("unknown strategy id '" + id.str() + "'");
    }
    r.id = id;
    return r;
  }

  std::array<StrategyResult, 3> evaluate_csi(int csi, const ChannelParams2x2& c) {
    if (csi < 1 || csi > 4) throw std::out_of_range("evaluate_csi: knowledge level must be 1..4");
    return {evaluate({csi, 1}, c), evaluate({csi, 2}, c), evaluate({csi, 3}, c)};
  }

 private:
  double value(AsymmetryObjective objective, double a, const ChannelParams2x2& c) {
    switch (objective) {
      case AsymmetryObjective::random_output:
        return 0.5 * (clone_fidelity(c, a, 1) + clone_fidelity(c, a, 2));
      case AsymmetryObjective::best_output:
        return clone_fidelity(c, a, 1);
      case AsymmetryObjective::mismatched_purifier:
        return mismatched(a, c, true).fidelity;
      case AsymmetryObjective::matched_purifier:
        return matched(a, c, true).fidelity;
    }
    return 0.0;
  }

  StrategyResult cloned(double a, const ChannelParams2x2& c, bool best_only) {
    StrategyResult r;
    r.a = a;
    const double f1 = clone_fidelity(c, a, 1);
    r.fidelity = best_only ? f1 : 0.5 * (f1 + clone_fidelity(c, a, 2));
    return r;
  }

  StrategyResult mismatched(double a, const ChannelParams2x2& c, bool search) {
    const auto op = design(a, search);
    StrategyResult r;
    r.a = a;
    r.p_design = op->p;
    r.design_value = op->effective;
    r.status = op->status;
    r.max_gap = op->max_gap;
    r.solves = op->solves;
    const auto v = evaluate_purifier(op->J, analytic_qr_2x2(params_from_a(a), c.eta, c.lambda1, c.lambda2));
    r.p = v.p;
    r.post_selected = v.defined ? v.fidelity : kMaximallyMixedFidelity;
    r.fidelity = effective_fidelity(r.post_selected, v.p);
    return r;
  }

  StrategyResult matched(double a, const ChannelParams2x2& c, bool search) {
    const auto op = knee_operating_point(analytic_qr_2x2(params_from_a(a), c.eta, c.lambda1, c.lambda2),
                                         search ? options_.search_p_grid : options_.p_grid, options_.solver);
    StrategyResult r;
    r.a = a;
    r.p = r.p_design = op.p;
    r.post_selected = op.fidelity;
    r.fidelity = r.design_value = op.effective;
    r.status = op.status;
    r.max_gap = op.max_gap;
    r.solves = op.solves;
    return r;
  }

  StrategyOptions options_;
  std::mutex mutex_;
  std::map<std::pair<double, bool>, std::shared_ptr<const OperatingPoint>> designs_;
};

/// Cell centres (i + 1/2)/n of a depolarising axis.
inline std::vector<double> lambda_axis(int n) {
  if (n < 1) throw std::domain_error("lambda_axis: need at least one point");
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) axis[i] = (i + 0.5) / n;
  return axis;
}

/// All (lambda1, lambda2) pairs of the axis with lambda1 < lambda2, row-major in lambda1.
inline std::vector<std::pair<double, double>> masked_pairs(const std::vector<double>& axis) {
  std::vector<std::pair<double, double>> out;
  for (double l1 : axis) {
    for (double l2 : axis) {
      if (l1 < l2) out.emplace_back(l1, l2);
    }
  }
  return out;
}

struct RegionCell {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::array<StrategyResult, 3> results;
  /// 1-based index of the strategy with the highest fidelity; ties keep the lower index.
  int best = 1;
};

/// Fidelities closer than this are treated as a tie in region maps, so solver
/// noise cannot flip the winner between equivalent strategies.
inline constexpr double kRegionTieTolerance = 1e-8;

inline int argmax_strategy(const std::array<StrategyResult, 3>& r, double tol = kRegionTieTolerance) {
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (r[k].fidelity > r[best].fidelity + tol) best = k;
  }
  return best + 1;
}

inline std::vector<RegionCell> best_strategy_region(double eta, const std::vector<double>& axis, int csi,
                                                    StrategyEvaluator& evaluator, int threads = 1) {
  const auto pairs = masked_pairs(axis);
  std::vector<RegionCell> cells(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    RegionCell cell;
    cell.lambda1 = pairs[i].first;
    cell.lambda2 = pairs[i].second;
    cell.results = evaluator.evaluate_csi(csi, {eta, cell.lambda1, cell.lambda2});
    cell.best = argmax_strategy(cell.results);
    cells[i] = std::move(cell);
  });
  return cells;
}

struct GainPoint {
  double eta = 0.0;
  int csi = 1;
  int cells = 0;
  /// Ensemble means of strategies c.1, c.2, c.3.
  std::array<double, 3> mean{};
  double clone_gain = 0.0;         // <F_c.2 - F_c.1>
  double purification_gain = 0.0;  // <F_c.3 - F_c.1>
  double relative_gain = 0.0;      // purification_gain / <F_c.1>
  PurificationStatus status = PurificationStatus::optimal;
  double max_gap = 0.0;
};

/// Ensemble-mean gains over the masked (lambda1, lambda2) grid, one point per (eta, csi).
inline std::vector<GainPoint> fidelity_gain_scan(const std::vector<double>& etas, const std::vector<double>& axis,
                                                 const std::vector<int>& csi_levels, StrategyEvaluator& evaluator,
                                                 int threads = 1) {
  std::vector<GainPoint> out;
  for (double eta : etas) {
    for (int csi : csi_levels) {
      const auto cells = best_strategy_region(eta, axis, csi, evaluator, threads);
      GainPoint g;
      g.eta = eta;
      g.csi = csi;
      g.cells = static_cast<int>(cells.size());
      for (const auto& cell : cells) {
        for (int k = 0; k < 3; ++k) {
          g.mean[k] += cell.results[k].fidelity;
          g.max_gap = std::max(g.max_gap, cell.results[k].max_gap);
          if (g.status == PurificationStatus::optimal) g.status = cell.results[k].status;
        }
      }
      if (g.cells > 0) {
        for (auto& m : g.mean) m /= g.cells;
      }
      g.clone_gain = g.mean[1] - g.mean[0];
      g.purification_gain = g.mean[2] - g.mean[0];
      g.relative_gain = g.mean[0] > 0.0 ? g.purification_gain / g.mean[0] : 0.0;
      out.push_back(g);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// 4x4 link: symmetric 1->M clones on streams 0..M-1, I/2 on the rest, both
// crosstalk layers at strength eta, uniform depolarisation lambda. The
// receiver keeps outputs 0..M-1 and traces out the others.

struct DistributionOptions {
  std::vector<double> p_grid = default_p_grid();
  /// Integrands are quadratic in the Bloch vector, so a small rule is exact.
  Quadrature quadrature{4, 8};
  sdp::Settings solver{1e-9, 200, 0.98};
};

struct DistributionResult {
  int M = 1;
  double eta = 0.0;
  double lambda = 0.0;
  /// Average fidelity of output stream 0 without any purification.
  double clone_fidelity = 0.5;
  OperatingPoint purified;
};

inline std::vector<int> first_streams(int M) {
  std::vector<int> s(M);
  for (int k = 0; k < M; ++k) s[k] = k;
  return s;
}

inline QROperators distribution_qr(int M, double eta, double lambda, const Quadrature& rule) {
  if (M != 1 && M != 2 && M != 4) throw std::domain_error("distribution_qr: M must be 1, 2 or 4");
  return numeric_qr(symmetric_clone_encoder(M, 4), MimoChannelSpec::four_by_four(eta, eta, lambda),
                    first_streams(M), RhoSource::channel_output, rule)
      .qr;
}

inline DistributionResult distribution_fidelity(int M, double eta, double lambda,
                                                const DistributionOptions& options = {}) {
  DistributionResult r;
  r.M = M;
  r.eta = eta;
  r.lambda = lambda;
  const QROperators qr = distribution_qr(M, eta, lambda, options.quadrature);
  // Fidelity of stream 0 alone: Tr[(rho_0 (x) psi) SWAP] integrated = Tr[Q_{0,ref} SWAP].
  std::vector<int> keep{0, M};
  const Matrix q0 = partial_trace(qr.Q, qr.dims(), keep);
  const Matrix swap = permutation_operator(qubit_dims(2), {1, 0});
  r.clone_fidelity = trace_product(q0, swap);
  r.purified = knee_operating_point(qr, options.p_grid, options.solver);
  return r;
}

}  // namespace qmimo

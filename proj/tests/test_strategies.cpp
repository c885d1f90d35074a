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

#include <qmimo/strategies.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace qmimo {
namespace {

StrategyOptions fast_options() {
  StrategyOptions o;
  o.p_grid = default_p_grid(0.05);
  o.search_p_grid = default_p_grid(0.1);
  o.a_step = 0.05;
  o.a_tolerance = 1e-3;
  return o;
}

TEST(Direct, Examples) {
  EXPECT_NEAR(direct_fidelity({0.0, 0.0, 0.0}, 1, 1), 1.0, 1e-15);
  EXPECT_NEAR(direct_fidelity({0.0, 0.3, 0.9}, 1, 1), 1.0 - 0.3 / 2.0, 1e-15);
  EXPECT_NEAR(direct_fidelity({0.5, 0.0, 0.0}, 1, 2), 0.75, 1e-15);
  EXPECT_THROW(direct_fidelity({0.1, 0.1, 0.1}, 0, 1), std::out_of_range);
  EXPECT_THROW(direct_fidelity({0.6, 0.1, 0.1}, 1, 1), std::domain_error);
}

TEST(Direct, AgreesWithDensityMatrixSimulation) {
  const ChannelParams2x2 c{0.3, 0.2, 0.5};
  for (int send : {1, 2}) {
    for (int receive : {1, 2}) {
      const auto avg = haar_average(
          [&](const PureQubit& psi) {
            const std::vector<int> streams{send - 1};
            const Matrix out = apply_mimo_channel(embed_streams(psi.projector(), streams, 2), c.spec());
            return fidelity_with_pure(partial_trace(out, qubit_dims(2), {receive - 1}), psi);
          },
          Quadrature{4, 8});
      EXPECT_NEAR(avg.value, direct_fidelity(c, send, receive), 1e-12) << send << "->" << receive;
    }
  }
}

TEST(Strategies, FormulaExamples) {
  StrategyEvaluator ev(fast_options());
  EXPECT_NEAR(ev.evaluate({1, 1}, {0.0, 1e-12, 1e-12}).fidelity, 0.75, 1e-10);
  const ChannelParams2x2 c{0.245, 0.1, 0.4};
  EXPECT_NEAR(ev.evaluate({4, 1}, c).fidelity, direct_fidelity(c, 1, 1), 1e-15);
  EXPECT_NEAR(ev.evaluate({2, 1}, c).fidelity, 0.5 * (direct_fidelity(c, 1, 1) + direct_fidelity(c, 2, 2)), 1e-15);
  EXPECT_NEAR(ev.evaluate({3, 1}, c).fidelity, 0.5 * (direct_fidelity(c, 1, 1) + 0.5), 1e-15);
  EXPECT_NEAR(ev.evaluate({2, 2}, c).fidelity, clone_fidelity(c, kSymmetricA, 1), 1e-15);
  EXPECT_NEAR(ev.evaluate({1, 2}, c).fidelity,
              0.5 * (clone_fidelity(c, kSymmetricA, 1) + clone_fidelity(c, kSymmetricA, 2)), 1e-15);
  EXPECT_THROW(CaseId::parse("5.1"), std::invalid_argument);
  EXPECT_EQ(CaseId::parse("3.2"), (CaseId{3, 2}));
  EXPECT_EQ((CaseId{4, 3}).str(), "4.3");
}

TEST(Strategies, MismatchedCaseRecordsDesign) {
  StrategyEvaluator ev(fast_options());
  const auto r = ev.evaluate({1, 3}, {0.245, 0.1, 0.2});
  EXPECT_NEAR(r.a, kSymmetricA, 1e-15);
  // The noiseless design promises exactly the clone fidelity.
  EXPECT_NEAR(r.design_value, effective_fidelity(5.0 / 6.0, r.p_design), 1e-7);
  EXPECT_NEAR(r.fidelity, effective_fidelity(r.post_selected, r.p), 1e-15);
  EXPECT_EQ(r.status, PurificationStatus::optimal);
  EXPECT_LE(r.max_gap, 1e-6);
}

TEST(Asymmetry, SymmetricLinkPicksSymmetricCloner) {
  StrategyEvaluator ev;
  const auto r = ev.optimize_asymmetry(AsymmetryObjective::random_output, {0.0, 0.2, 0.2});
  // 1/2 (F_c1 + F_c2) is flat in a only to second order; compare values.
  EXPECT_NEAR(r.value, 0.5 * (clone_fidelity({0.0, 0.2, 0.2}, kSymmetricA, 1) +
                              clone_fidelity({0.0, 0.2, 0.2}, kSymmetricA, 2)), 1e-8);
  EXPECT_NEAR(r.x, kSymmetricA, 2e-4);
}

TEST(Asymmetry, GoodChannelAttractsEverything) {
  StrategyEvaluator ev;
  const auto r = ev.optimize_asymmetry(AsymmetryObjective::best_output, {0.0, 0.01, 0.9});
  EXPECT_NEAR(r.x, 1.0, 1e-12);
}

TEST(Asymmetry, LineSearchMatchesExhaustiveGrid) {
  const ChannelParams2x2 c{0.245, 0.1, 0.3};
  auto f = [&](double a) { return 0.5 * (clone_fidelity(c, a, 1) + clone_fidelity(c, a, 2)); };
  const auto r = line_search_max(f, 0.01, 1.0, 0.01, 1e-4);
  double best = -1.0;
  for (int i = 1; i <= 1000; ++i) best = std::max(best, f(i / 1000.0));
  EXPECT_GE(r.value, best - 1e-8);
}

TEST(Asymmetry, PurificationObjectiveMatchesGrid) {
  StrategyEvaluator ev(fast_options());
  const ChannelParams2x2 c{0.245, 0.1, 0.3};
  const auto r = ev.optimize_asymmetry(AsymmetryObjective::matched_purifier, c);
  // Exhaustive grid oracle on the same search objective.
  double grid_best = -1.0;
  const auto options = fast_options();
  for (int i = 1; i <= 100; ++i) {
    const double a = i / 100.0;
    const auto op = knee_operating_point(analytic_qr_2x2(params_from_a(a), c.eta, c.lambda1, c.lambda2),
                                         options.search_p_grid, options.solver);
    grid_best = std::max(grid_best, op.effective);
  }
  EXPECT_GE(r.value, grid_best - 5e-3);
}

TEST(Asymmetry, ArgmaxInvariantUnderPositiveScaling) {
  const ChannelParams2x2 c{0.1, 0.2, 0.6};
  auto f = [&](double a) { return clone_fidelity(c, a, 1) + 0.3 * clone_fidelity(c, a, 2); };
  const auto r1 = line_search_max(f, 0.01, 1.0, 0.01, 1e-4);
  const auto r2 = line_search_max([&](double a) { return 7.5 * f(a); }, 0.01, 1.0, 0.01, 1e-4);
  EXPECT_EQ(r1.x, r2.x);
}

TEST(Invariants, RangesSelectionAndDominance) {
  StrategyEvaluator ev(fast_options());
  std::mt19937_64 gen(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 6; ++t) {
    double l1 = u(gen), l2 = u(gen);
    if (l1 > l2) std::swap(l1, l2);
    const ChannelParams2x2 c{0.49 * u(gen), l1, l2};
    EXPECT_GE(direct_fidelity(c, 1, 1), direct_fidelity(c, 2, 2) - 1e-10);
    const auto case1 = ev.evaluate_csi(1, c);
    const auto case4 = ev.evaluate_csi(4, c);
    for (int k = 0; k < 3; ++k) {
      for (const auto& r : {case1[k], case4[k]}) {
        EXPECT_GE(r.fidelity, 0.5 - 1e-10);
        EXPECT_LE(r.fidelity, 1.0);
      }
      EXPECT_GE(case4[k].fidelity, case1[k].fidelity - 1e-8)
          << "strategy " << k + 1 << " eta=" << c.eta << " l=(" << l1 << "," << l2 << ")";
    }
  }
}

TEST(Region, ArgmaxAndTies) {
  std::array<StrategyResult, 3> r;
  r[0].fidelity = 0.7;
  r[1].fidelity = 0.7 + 1e-10;
  r[2].fidelity = 0.6;
  EXPECT_EQ(argmax_strategy(r), 1);
  r[2].fidelity = 0.8;
  EXPECT_EQ(argmax_strategy(r), 3);

  StrategyEvaluator ev(fast_options());
  const auto cells = best_strategy_region(0.245, {0.05, 0.5}, 4, ev);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].best, argmax_strategy(cells[0].results));
}

TEST(Region, MaskAndAxis) {
  const auto axis = lambda_axis(4);
  EXPECT_EQ(axis, (std::vector<double>{0.125, 0.375, 0.625, 0.875}));
  const auto pairs = masked_pairs(axis);
  EXPECT_EQ(pairs.size(), 6u);
  for (const auto& [l1, l2] : pairs) EXPECT_LT(l1, l2);
}

TEST(Region, ParallelMatchesSerial) {
  StrategyEvaluator a(fast_options()), b(fast_options());
  const auto axis = lambda_axis(4);
  const auto serial = best_strategy_region(0.245, axis, 3, a, 1);
  const auto parallel = best_strategy_region(0.245, axis, 3, b, 3);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    for (int k = 0; k < 3; ++k) EXPECT_EQ(serial[i].results[k].fidelity, parallel[i].results[k].fidelity);
  }
}

TEST(Gains, FullKnowledgeAtZeroCrosstalk) {
  StrategyEvaluator ev(fast_options());
  const auto g = fidelity_gain_scan({0.0}, lambda_axis(4), {2, 4}, ev);
  ASSERT_EQ(g.size(), 2u);
  // Receiver knows the link but the transmitter does not: symmetric cloning costs fidelity.
  EXPECT_LT(g[0].clone_gain, 0.0);
  // Selecting the better channel already saturates: purification adds nothing.
  EXPECT_NEAR(g[1].purification_gain, 0.0, 1e-3);
  EXPECT_EQ(g[1].cells, 6);
}

TEST(Gains, TransmitterKnowledgeAtZeroCrosstalk) {
  StrategyEvaluator ev(fast_options());
  const auto g = fidelity_gain_scan({0.0}, lambda_axis(4), {3}, ev);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_NEAR(g[0].relative_gain, g[0].purification_gain / g[0].mean[0], 1e-15);
  EXPECT_GT(g[0].relative_gain, 0.0);
}

TEST(Distribution, SingleCloneMatchesDirectTransmission) {
  DistributionOptions opt;
  opt.p_grid = default_p_grid(0.1);
  const auto r = distribution_fidelity(1, 0.2, 0.3, opt);
  // Only (1 - eta)^2 of the signal stays on stream 0; depolarisation shrinks the rest.
  const double keep = 0.8 * 0.8;
  EXPECT_NEAR(r.clone_fidelity, keep * (1.0 - 0.15) + (1.0 - keep) * 0.5, 1e-12);
  EXPECT_NEAR(r.purified.effective, r.clone_fidelity, 1e-7);
}

TEST(Distribution, NoiselessCloneFidelities) {
  DistributionOptions opt;
  opt.p_grid = default_p_grid(0.25);
  EXPECT_NEAR(distribution_fidelity(2, 0.0, 0.0, opt).clone_fidelity, 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(distribution_fidelity(4, 0.0, 0.0, opt).clone_fidelity, 0.75, 1e-12);
  EXPECT_THROW(distribution_qr(3, 0.1, 0.1, Quadrature{4, 8}), std::domain_error);
}

}  // namespace
}  // namespace qmimo

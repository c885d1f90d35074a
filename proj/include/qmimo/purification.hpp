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
/// Optimal probabilistic purification of K clone registers into one qubit.
///
/// The decoder is described by its Choi operator
///   J = sum_ij |i><j| (x) D(|i><j|)
/// on [clone registers, output qubit]. For Haar operators (Q, R),
///   maximise   Tr[J Q^T] / p
///   subject to Tr[J R^T] = p,  Tr_out J <= I,  J >= 0,
/// where ^T transposes the clone registers only.

#include <qmimo/block_sdp.hpp>
#include <qmimo/haar.hpp>
#include <qmimo/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmimo {

enum class PurificationStatus { optimal, max_iterations, infeasible, numerical_failure };

inline const char* to_string(PurificationStatus s) {
  switch (s) {
    case PurificationStatus::optimal:
      return "optimal";
    case PurificationStatus::max_iterations:
      return "max-iter";
    case PurificationStatus::infeasible:
      return "infeasible";
    case PurificationStatus::numerical_failure:
      return "numerical-failure";
  }
  return "unknown";
}

struct PurificationProblem {
  QROperators qr;
  double p = 1.0;
};

struct PurificationSolution {
  Matrix J;
  /// Post-selected fidelity Tr[J Q^T] / p.
  double fidelity = 0.0;
  /// Tr[J R^T] of the returned operator.
  double p_achieved = 0.0;
  /// |primal - dual| in fidelity units.
  double duality_gap = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  int iterations = 0;
  PurificationStatus status = PurificationStatus::max_iterations;

  bool ok() const { return status == PurificationStatus::optimal; }
};

/// Transpose over every clone register; the last factor is the reference.
inline Matrix clone_transpose(const Matrix& m, int K) {
  return partial_transpose(m, Dims{1 << K, 2}, 0);
}

/// Largest success probability the constraints allow, Tr R / 2.
inline double max_success_probability(const QROperators& qr) { return 0.5 * qr.R.trace().real(); }

namespace detail {

/// Orthonormal Hermitian basis of r x r matrices as sparse entry lists.
inline std::vector<std::vector<sdp::Entry>> hermitian_basis(int r, int block) {
  std::vector<std::vector<sdp::Entry>> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < r; ++i) {
    out.push_back({{block, i, i, cplx(1.0, 0.0)}});
    for (int j = i + 1; j < r; ++j) {
      out.push_back({{block, i, j, cplx(s, 0.0)}, {block, j, i, cplx(s, 0.0)}});
      out.push_back({{block, i, j, cplx(0.0, s)}, {block, j, i, cplx(0.0, -s)}});
    }
  }
  return out;
}

inline std::vector<sdp::Entry> dense_entries(const Matrix& m, int block) {
  std::vector<sdp::Entry> e;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > 0.0) e.push_back({block, static_cast<int>(i), static_cast<int>(j), m(i, j)});
    }
  }
  return e;
}

/// Isometry onto the support of the clone-register average (transposed).
inline Matrix support_isometry(const QROperators& qr) {
  const Matrix rho_t = qr.average_state().transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rho_t));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = 1e-10 * std::max(ev.maxCoeff(), 1e-300);
  std::vector<int> cols;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > cut) cols.push_back(static_cast<int>(i));
  }
  Matrix P(rho_t.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) P.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]);
  return P;
}

}  // namespace detail

struct PurifierValue {
  double fidelity = 0.0;
  double p = 0.0;
  bool defined = false;
};

/// Applies a fixed decoder to (possibly different) true operators.
inline PurifierValue evaluate_purifier(const Matrix& J, const QROperators& qr) {
  if (J.rows() != qr.Q.rows() || J.cols() != qr.Q.cols()) {
    throw DimensionError("evaluate_purifier: Choi operator does not match the operators");
  }
  PurifierValue v;
  v.p = trace_product(J, clone_transpose(qr.R, qr.K));
  if (v.p <= 1e-12) return v;
  v.fidelity = trace_product(J, clone_transpose(qr.Q, qr.K)) / v.p;
  v.defined = true;
  return v;
}

/// pF + (1 - p)/2: a failed attempt is replaced by the maximally mixed state.
inline double effective_fidelity(double fidelity, double p) { return p * fidelity + (1.0 - p) * 0.5; }

inline PurificationSolution solve_purification(const PurificationProblem& prob,
                                               const sdp::Settings& settings = {1e-9, 200, 0.98}) {
  const QROperators& qr = prob.qr;
  const int K = qr.K;
  if (K < 1 || qr.Q.rows() != (2 << K) || qr.R.rows() != (2 << K)) {
    throw DimensionError("solve_purification: operators must have side 2^(K+1)");
  }
  if (!(prob.p > 0.0)) throw std::domain_error("solve_purification: p must be positive");
  const double p_max = max_success_probability(qr);

  PurificationSolution sol;
  const int d = 1 << K;
  if (prob.p > p_max + 1e-12) {
    sol.status = PurificationStatus::infeasible;
    sol.J = Matrix::Zero(2 * d, 2 * d);
    return sol;
  }
  const bool trace_preserving = prob.p >= p_max - 1e-12;

  const Matrix P = detail::support_isometry(qr);
  const int r = static_cast<int>(P.cols());
  const Matrix P2 = kron(P, pauli::identity());
  const Matrix Qt = clone_transpose(qr.Q, K);
  const Matrix Rt = clone_transpose(qr.R, K);
  const Matrix Qr = hermitian_part(P2.adjoint() * Qt * P2);
  const Matrix Rr = hermitian_part(P2.adjoint() * Rt * P2);

  sdp::Problem sp;
  sp.block_sizes = {2 * r};
  sp.cost = {-Qr / prob.p};
  if (!trace_preserving) {
    sp.block_sizes.push_back(r);
    sp.cost.push_back(Matrix::Zero(r, r));
    sp.constraints.push_back({detail::dense_entries(Rr, 0), prob.p});
  }
  // Tr_out J (+ S) = I, one equation per Hermitian basis element E: <E (x) I, J> (+ <E, S>) = Tr E.
  for (const auto& basis : detail::hermitian_basis(r, 0)) {
    sdp::Constraint c;
    cplx tr = 0.0;
    for (const auto& e : basis) {
      if (e.row == e.col) tr += e.value;
      for (int o = 0; o < 2; ++o) c.entries.push_back({0, 2 * e.row + o, 2 * e.col + o, e.value});
      if (!trace_preserving) c.entries.push_back({1, e.row, e.col, e.value});
    }
    c.rhs = tr.real();
    sp.constraints.push_back(std::move(c));
  }

  const sdp::Result res = sdp::solve(sp, settings);
  sol.iterations = res.iterations;
  switch (res.status) {
    case sdp::Status::optimal:
      sol.status = PurificationStatus::optimal;
      break;
    case sdp::Status::max_iterations:
      sol.status = PurificationStatus::max_iterations;
      break;
    case sdp::Status::numerical_failure:
      sol.status = PurificationStatus::numerical_failure;
      break;
  }
  sol.J = hermitian_part(P2 * res.X[0] * P2.adjoint());
  sol.primal_objective = -res.primal_objective;
  sol.dual_objective = -res.dual_objective;
  sol.duality_gap = std::abs(res.primal_objective - res.dual_objective);
  sol.p_achieved = trace_product(sol.J, Rt);
  sol.fidelity = trace_product(sol.J, Qt) / prob.p;
  return sol;
}

struct TradeoffPoint {
  double p = 0.0;
  PurificationSolution solution;
};

/// {0.02, 0.04, ..., 1.0}.
inline std::vector<double> default_p_grid(double step = 0.02) {
  if (!(step > 0.0 && step <= 1.0)) throw std::domain_error("default_p_grid: step must lie in (0, 1]");
  std::vector<double> g;
  const int n = static_cast<int>(std::floor(1.0 / step + 1e-9));
  for (int i = 1; i <= n; ++i) g.push_back(i * step);
  if (std::abs(g.back() - 1.0) > 1e-12) g.push_back(1.0);
  g.back() = std::min(g.back(), 1.0);
  return g;
}

inline std::vector<TradeoffPoint> tradeoff_curve(const QROperators& qr, const std::vector<double>& p_grid,
                                                 const sdp::Settings& settings = {1e-9, 200, 0.98}) {
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] > 0.0 && p_grid[i] <= 1.0)) throw std::domain_error("tradeoff_curve: p must lie in (0, 1]");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) throw std::domain_error("tradeoff_curve: grid must increase");
  }
  std::vector<TradeoffPoint> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) out.push_back({p, solve_purification({qr, p}, settings)});
  return out;
}

/// Distances below this are solver noise: a curve whose points all lie within
/// it of the chord counts as flat, and points within it of the best tie.
inline constexpr double kKneeTolerance = 1e-7;

/// Index of the point farthest above the chord joining the curve's end points;
/// ties go to the larger p and a flat curve yields the last index.
inline std::size_t knee_index(const std::vector<double>& p, const std::vector<double>& f,
                              double tol = kKneeTolerance) {
  if (p.size() != f.size()) throw std::invalid_argument("knee_index: size mismatch");
  if (p.size() < 3) throw std::invalid_argument("knee_index: need at least three points");
  const std::size_t n = p.size();
  const double dx = p[n - 1] - p[0];
  const double dy = f[n - 1] - f[0];
  const double len = std::hypot(dx, dy);
  std::size_t best = n - 1;
  if (len == 0.0) return best;
  double best_d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Signed distance, positive above the chord.
    const double dist = (dx * (f[i] - f[0]) - dy * (p[i] - p[0])) / len;
    if (dist > best_d) {
      best_d = dist;
      best = i;
    }
  }
  if (best_d <= tol) return n - 1;
  for (std::size_t i = n; i-- > best + 1;) {
    if ((dx * (f[i] - f[0]) - dy * (p[i] - p[0])) / len >= best_d - tol) return i;
  }
  return best;
}

inline double knee_point(const std::vector<double>& p, const std::vector<double>& f) {
  return p[knee_index(p, f)];
}

inline std::size_t knee_index(const std::vector<TradeoffPoint>& curve) {
  std::vector<double> p, f;
  for (const auto& pt : curve) {
    p.push_back(pt.p);
    f.push_back(pt.solution.fidelity);
  }
  return knee_index(p, f);
}

/// The knee of a solved trade-off curve together with curve-wide solver stats.
struct OperatingPoint {
  double p = 0.0;
  double fidelity = 0.0;
  double effective = 0.5;
  Matrix J;
  /// Largest duality gap and first non-optimal status along the whole curve.
  double max_gap = 0.0;
  PurificationStatus status = PurificationStatus::optimal;
  int solves = 0;
};

inline OperatingPoint operating_point(const std::vector<TradeoffPoint>& curve) {
  OperatingPoint op;
  for (const auto& pt : curve) {
    op.max_gap = std::max(op.max_gap, pt.solution.duality_gap);
    if (op.status == PurificationStatus::optimal && !pt.solution.ok()) op.status = pt.solution.status;
  }
  op.solves = static_cast<int>(curve.size());
  const auto& knee = curve[knee_index(curve)];
  op.p = knee.p;
  op.fidelity = knee.solution.fidelity;
  op.effective = effective_fidelity(op.fidelity, op.p);
  op.J = knee.solution.J;
  return op;
}

inline OperatingPoint knee_operating_point(const QROperators& qr, const std::vector<double>& p_grid,
                                           const sdp::Settings& settings = {1e-9, 200, 0.98}) {
  return operating_point(tradeoff_curve(qr, p_grid, settings));
}

}  // namespace qmimo

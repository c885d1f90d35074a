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
/// Dense primal-dual interior-point solver for small complex Hermitian SDPs
/// over a block-diagonal PSD cone:
///
///   primal:  min <C, X>   s.t.  <A_i, X> = b_i,  X >= 0
///   dual:    max b^T y    s.t.  sum_i y_i A_i + Z = C,  Z >= 0
///
/// with <A, B> = Re Tr[A B]. Search directions use Nesterov-Todd scaling and
/// a Mehrotra predictor-corrector; the start point is infeasible (X = Z = I).

#include <qmimo/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmimo::sdp {

/// One nonzero of a constraint matrix. Hermitian matrices list both (r, c)
/// and (c, r).
struct Entry {
  int block = 0;
  int row = 0;
  int col = 0;
  cplx value;
};

struct Constraint {
  std::vector<Entry> entries;
  double rhs = 0.0;
};

struct Problem {
  std::vector<int> block_sizes;
  std::vector<Matrix> cost;
  std::vector<Constraint> constraints;
};

struct Settings {
  /// Relative gap and relative primal/dual residual targets.
  double tolerance = 1e-10;
  int max_iterations = 200;
  double step_fraction = 0.98;
};

enum class Status { optimal, max_iterations, numerical_failure };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal:
      return "optimal";
    case Status::max_iterations:
      return "max-iter";
    case Status::numerical_failure:
      return "numerical-failure";
  }
  return "unknown";
}

struct Result {
  std::vector<Matrix> X;
  std::vector<Matrix> Z;
  Eigen::VectorXd y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
  Status status = Status::max_iterations;
};

namespace detail {

using Blocks = std::vector<Matrix>;

inline double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += trace_product(a[k], b[k]);
  return s;
}

inline double frobenius(const Blocks& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

inline double apply(const Constraint& c, const Blocks& x) {
  // Re Tr[A X] = Re sum A(r, c) X(c, r)
  double s = 0.0;
  for (const auto& e : c.entries) s += (e.value * x[e.block](e.col, e.row)).real();
  return s;
}

inline void add_adjoint(const Constraint& c, double coeff, Blocks& out) {
  for (const auto& e : c.entries) out[e.block](e.row, e.col) += coeff * e.value;
}

/// The entries of one constraint that fall in one block.
struct Part {
  int block = 0;
  std::vector<Entry> entries;
  Matrix dense;  // materialised when the part has more entries than rows
};

inline std::vector<Part> split(const Constraint& c, const std::vector<int>& sizes) {
  std::vector<Part> parts;
  for (const auto& e : c.entries) {
    auto it = std::find_if(parts.begin(), parts.end(), [&](const Part& p) { return p.block == e.block; });
    if (it == parts.end()) {
      parts.push_back({e.block, {}, {}});
      it = parts.end() - 1;
    }
    it->entries.push_back(e);
  }
  for (auto& p : parts) {
    const int n = sizes[p.block];
    if (static_cast<int>(p.entries.size()) > n) {
      p.dense = Matrix::Zero(n, n);
      for (const auto& e : p.entries) p.dense(e.row, e.col) += e.value;
    }
  }
  return parts;
}

inline double apply(const Part& p, const Matrix& x) {
  double s = 0.0;
  for (const auto& e : p.entries) s += (e.value * x(e.col, e.row)).real();
  return s;
}

/// W A W for one part.
inline Matrix sandwich(const Part& p, const Matrix& W) {
  if (p.dense.size() > 0) return W * p.dense * W;
  Matrix out = Matrix::Zero(W.rows(), W.cols());
  for (const auto& e : p.entries) {
    for (Eigen::Index c = 0; c < W.cols(); ++c) out.col(c) += (e.value * W(e.col, c)) * W.col(e.row);
  }
  return out;
}

/// NT scaling data of one block: W = G G^dagger, V = diag(d) = G^-1 X G^-dagger = G^dagger Z G.
struct Scaling {
  Matrix G;
  Matrix G_inv;
  Matrix W;
  Eigen::VectorXd d;
};

inline bool nt_scaling(const Matrix& X, const Matrix& Z, Scaling& out) {
  Eigen::LLT<Matrix> llt(X);
  if (llt.info() != Eigen::Success) return false;
  const Matrix L = llt.matrixL();
  const Matrix T = hermitian_part(L.adjoint() * Z * L);
  Eigen::SelfAdjointEigenSolver<Matrix> es(T);
  if (es.info() != Eigen::Success) return false;
  const Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() <= 0.0) return false;
  const Matrix& U = es.eigenvectors();
  const Eigen::VectorXd q = lam.array().pow(-0.25);
  out.G = L * U * q.asDiagonal();
  const Matrix L_inv = L.triangularView<Eigen::Lower>().solve(Matrix::Identity(X.rows(), X.cols()));
  out.G_inv = lam.array().pow(0.25).matrix().asDiagonal() * U.adjoint() * L_inv;
  out.W = hermitian_part(out.G * out.G.adjoint());
  out.d = lam.array().sqrt();
  return true;
}

/// Largest alpha <= cap with M + alpha dM >= 0.
inline double max_step(const Matrix& M, const Matrix& dM) {
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) return 0.0;
  const Matrix L = llt.matrixL();
  const Matrix Linv = L.triangularView<Eigen::Lower>().solve(Matrix::Identity(M.rows(), M.cols()));
  const double lmin = min_eigenvalue(Linv * dM * Linv.adjoint());
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

}  // namespace detail

inline Result solve(const Problem& prob, const Settings& settings = {}) {
  using detail::Blocks;
  const std::size_t nb = prob.block_sizes.size();
  const std::size_t m = prob.constraints.size();
  if (prob.cost.size() != nb) throw std::invalid_argument("sdp::solve: cost block count mismatch");
  int n_total = 0;
  for (std::size_t k = 0; k < nb; ++k) {
    if (prob.cost[k].rows() != prob.block_sizes[k] || prob.cost[k].cols() != prob.block_sizes[k]) {
      throw std::invalid_argument("sdp::solve: cost block has wrong size");
    }
    n_total += prob.block_sizes[k];
  }
  for (const auto& c : prob.constraints) {
    for (const auto& e : c.entries) {
      if (e.block < 0 || e.block >= static_cast<int>(nb) || e.row < 0 || e.col < 0 ||
          e.row >= prob.block_sizes[e.block] || e.col >= prob.block_sizes[e.block]) {
        throw std::invalid_argument("sdp::solve: constraint entry out of range");
      }
    }
  }

  // Per-constraint, per-block pieces; blocks with many entries are kept dense
  // so that W A W is two matrix products instead of a sum of outer products.
  std::vector<std::vector<detail::Part>> parts(m);
  for (std::size_t i = 0; i < m; ++i) parts[i] = detail::split(prob.constraints[i], prob.block_sizes);

  Eigen::VectorXd b(m);
  for (std::size_t i = 0; i < m; ++i) b[i] = prob.constraints[i].rhs;
  const double b_norm = b.norm();
  const double c_norm = detail::frobenius(prob.cost);

  Blocks X(nb), Z(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    X[k] = Matrix::Identity(prob.block_sizes[k], prob.block_sizes[k]);
    Z[k] = X[k];
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));

  Result res;
  std::vector<detail::Scaling> scal(nb);
  Eigen::MatrixXd schur(m, m);

  for (int iter = 0; iter <= settings.max_iterations; ++iter) {
    // Residuals.
    Eigen::VectorXd rp(m);
    for (std::size_t i = 0; i < m; ++i) rp[i] = b[i] - detail::apply(prob.constraints[i], X);
    Blocks rd = prob.cost;
    for (std::size_t k = 0; k < nb; ++k) rd[k] -= Z[k];
    for (std::size_t i = 0; i < m; ++i) detail::add_adjoint(prob.constraints[i], -y[i], rd);

    res.primal_objective = detail::inner(prob.cost, X);
    res.dual_objective = b.dot(y);
    res.primal_infeasibility = rp.norm() / (1.0 + b_norm);
    res.dual_infeasibility = detail::frobenius(rd) / (1.0 + c_norm);
    res.relative_gap = std::abs(res.primal_objective - res.dual_objective) /
                       (1.0 + std::abs(res.primal_objective) + std::abs(res.dual_objective));
    res.iterations = iter;
    const double mu = detail::inner(X, Z) / n_total;

    if (res.relative_gap < settings.tolerance && res.primal_infeasibility < settings.tolerance &&
        res.dual_infeasibility < settings.tolerance) {
      res.status = Status::optimal;
      break;
    }
    if (iter == settings.max_iterations) {
      res.status = Status::max_iterations;
      break;
    }

    for (std::size_t k = 0; k < nb; ++k) {
      if (!detail::nt_scaling(X[k], Z[k], scal[k])) {
        res.status = Status::numerical_failure;
        goto done;
      }
    }

    // Schur complement M_ij = <A_i, W A_j W>.
    {
      // Dense parts get W A W explicitly; sparse pairs use
      // <A, W B W> = Re sum_{e in A, f in B} a_e b_f W(c_e, r_f) W(c_f, r_e).
      std::vector<std::vector<Matrix>> sandwiched(m);
      for (std::size_t j = 0; j < m; ++j) {
        for (const auto& part : parts[j]) {
          sandwiched[j].push_back(part.dense.size() > 0 ? detail::sandwich(part, scal[part.block].W) : Matrix());
        }
      }
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = j; i < m; ++i) {
          double v = 0.0;
          for (std::size_t qi = 0; qi < parts[i].size(); ++qi) {
            const auto& pi = parts[i][qi];
            for (std::size_t qj = 0; qj < parts[j].size(); ++qj) {
              const auto& pj = parts[j][qj];
              if (pj.block != pi.block) continue;
              if (sandwiched[j][qj].size() > 0) {
                v += detail::apply(pi, sandwiched[j][qj]);
              } else if (sandwiched[i][qi].size() > 0) {
                v += detail::apply(pj, sandwiched[i][qi]);
              } else {
                const Matrix& W = scal[pi.block].W;
                cplx s = 0.0;
                for (const auto& e : pi.entries) {
                  for (const auto& f : pj.entries) s += e.value * f.value * W(e.col, f.row) * W(f.col, e.row);
                }
                v += s.real();
              }
            }
          }
          schur(i, j) = v;
          schur(j, i) = v;
        }
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt_fact(schur);
    Eigen::LDLT<Eigen::MatrixXd> ldlt_fact;
    const bool use_llt = llt_fact.info() == Eigen::Success;
    if (!use_llt) {
      ldlt_fact.compute(schur);
      if (ldlt_fact.info() != Eigen::Success) {
        res.status = Status::numerical_failure;
        break;
      }
    }
    auto schur_solve = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
      return use_llt ? Eigen::VectorXd(llt_fact.solve(rhs)) : Eigen::VectorXd(ldlt_fact.solve(rhs));
    };

    // W R_d W is shared by predictor and corrector.
    Blocks w_rd_w(nb);
    for (std::size_t k = 0; k < nb; ++k) w_rd_w[k] = scal[k].W * rd[k] * scal[k].W;

    auto direction = [&](const Blocks& rc, Blocks& dX, Blocks& dZ, Eigen::VectorXd& dy) {
      // rc lives in the scaled (V) space; apply L_V^{-1}.
      Blocks g_rt_g(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        const auto& d = scal[k].d;
        Matrix rt = rc[k];
        for (Eigen::Index i = 0; i < rt.rows(); ++i) {
          for (Eigen::Index j = 0; j < rt.cols(); ++j) rt(i, j) *= 2.0 / (d[i] + d[j]);
        }
        g_rt_g[k] = scal[k].G * rt * scal[k].G.adjoint();
      }
      Eigen::VectorXd rhs(m);
      for (std::size_t i = 0; i < m; ++i) {
        rhs[i] = rp[i] - detail::apply(prob.constraints[i], g_rt_g) +
                 detail::apply(prob.constraints[i], w_rd_w);
      }
      dy = schur_solve(rhs);
      dZ = rd;
      for (std::size_t i = 0; i < m; ++i) detail::add_adjoint(prob.constraints[i], -dy[i], dZ);
      dX.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        dZ[k] = hermitian_part(dZ[k]);
        dX[k] = hermitian_part(g_rt_g[k] - scal[k].W * dZ[k] * scal[k].W);
      }
    };

    auto step_lengths = [&](const Blocks& dX, const Blocks& dZ) {
      double ap = std::numeric_limits<double>::infinity();
      double ad = ap;
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, detail::max_step(X[k], dX[k]));
        ad = std::min(ad, detail::max_step(Z[k], dZ[k]));
      }
      return std::pair<double, double>{ap, ad};
    };

    // Predictor.
    Blocks rc(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      const auto& d = scal[k].d;
      rc[k] = Matrix::Zero(d.size(), d.size());
      for (Eigen::Index i = 0; i < d.size(); ++i) rc[k](i, i) = -d[i] * d[i];
    }
    Blocks dX, dZ;
    Eigen::VectorXd dy;
    direction(rc, dX, dZ, dy);
    auto [ap_max, ad_max] = step_lengths(dX, dZ);
    const double ap_aff = std::min(1.0, ap_max);
    const double ad_aff = std::min(1.0, ad_max);
    double mu_aff = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      mu_aff += trace_product(X[k] + ap_aff * dX[k], Z[k] + ad_aff * dZ[k]);
    }
    mu_aff /= n_total;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (std::size_t k = 0; k < nb; ++k) {
      const auto& d = scal[k].d;
      const Matrix dx_s = scal[k].G_inv * dX[k] * scal[k].G_inv.adjoint();
      const Matrix dz_s = scal[k].G.adjoint() * dZ[k] * scal[k].G;
      rc[k] = -hermitian_part(dx_s * dz_s);
      for (Eigen::Index i = 0; i < d.size(); ++i) rc[k](i, i) += sigma * mu - d[i] * d[i];
    }
    direction(rc, dX, dZ, dy);
    std::tie(ap_max, ad_max) = step_lengths(dX, dZ);
    const double ap = std::min(1.0, settings.step_fraction * ap_max);
    const double ad = std::min(1.0, settings.step_fraction * ad_max);

    for (std::size_t k = 0; k < nb; ++k) {
      X[k] = hermitian_part(X[k] + ap * dX[k]);
      Z[k] = hermitian_part(Z[k] + ad * dZ[k]);
    }
    y += ad * dy;
  }
done:
  res.X = std::move(X);
  res.Z = std::move(Z);
  res.y = std::move(y);
  return res;
}

}  // namespace qmimo::sdp

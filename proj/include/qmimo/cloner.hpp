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
/// Universal qubit cloners: the asymmetric 1->2 family parameterised by a
/// single amplitude a, and the optimal symmetric 1->M cloner.

#include <qmimo/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qmimo {

/// Asymmetry record of the 1->2 cloner. Clone 1 carries Bloch contraction
/// gamma1, clone 2 carries gamma2, and kappa is the isotropic two-clone
/// correlation.
struct CloneParams {
  double a = 0.0;
  double b = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double kappa = 0.0;

  /// Marginal cloning fidelities 1/2 (1 + gamma_j).
  double fidelity1() const { return 0.5 * (1.0 + gamma1); }
  double fidelity2() const { return 0.5 * (1.0 + gamma2); }
};

inline const double kSymmetricA = 1.0 / std::sqrt(3.0);

/// Positive root b(a) of a^2 + ab + b^2 = 1.
inline CloneParams params_from_a(double a) {
  if (!(a > 0.0 && a <= 1.0)) {
    throw std::domain_error("params_from_a: a must lie in (0, 1]");
  }
  CloneParams p;
  p.a = a;
  p.b = std::max(0.0, 0.5 * (-a + std::sqrt(4.0 - 3.0 * a * a)));
  p.gamma1 = a * (a + p.b);
  p.gamma2 = p.b * (a + p.b);
  p.kappa = a * p.b;
  return p;
}

inline CloneParams symmetric_params() { return params_from_a(kSymmetricA); }

/// Joint state of the two clones,
///   rho_0 + sum_k r_k A_k,
///   rho_0 = 1/4 (I(x)I + kappa sum_k s_k (x) s_k),
///   A_k   = gamma1/4 s_k (x) I + gamma2/4 I (x) s_k.
/// Works for any real r; unit norm is required only for the checked overload.
inline Matrix two_clone_operator(const Bloch& r, const CloneParams& p) {
  Matrix out = 0.25 * kron(pauli::identity(), pauli::identity());
  for (int k = 1; k <= 3; ++k) {
    const Matrix s = pauli::sigma(k);
    out += 0.25 * p.kappa * kron(s, s);
    out += r[k - 1] * (0.25 * p.gamma1 * kron(s, pauli::identity()) +
                       0.25 * p.gamma2 * kron(pauli::identity(), s));
  }
  return out;
}

inline DensityMatrix two_clone_state(const Bloch& r, const CloneParams& p) {
  const double norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  if (std::abs(norm - 1.0) > 1e-10) {
    throw std::domain_error("two_clone_state: Bloch vector must have unit norm");
  }
  return {two_clone_operator(r, p), qubit_dims(2)};
}

inline DensityMatrix two_clone_state(const PureQubit& psi, const CloneParams& p) {
  return two_clone_state(psi.bloch(), p);
}

/// Optimal symmetric fidelity of K -> M universal cloning.
inline double symmetric_fidelity(int K, int M) {
  if (K < 1 || M < 1) throw std::domain_error("symmetric_fidelity: K and M must be positive");
  if (K > M) throw std::domain_error("symmetric_fidelity: requires K <= M");
  const double k = K;
  const double m = M;
  return (k * m + k + m) / (m * (k + 2.0));
}

/// Fidelity pair (F_A, F_B) satisfies
///   sqrt((1-F_A)(1-F_B)) >= 1/2 - (1-F_A) - (1-F_B),
/// with equality on the optimal boundary. The residual is LHS - RHS;
/// membership admits 1e-12 slack.
inline double cloning_boundary_residual(double fa, double fb) {
  if (fa < 0.0 || fa > 1.0 || fb < 0.0 || fb > 1.0) {
    throw std::domain_error("cloning region: fidelities must lie in [0, 1]");
  }
  const double ea = 1.0 - fa;
  const double eb = 1.0 - fb;
  return std::sqrt(ea * eb) - (0.5 - ea - eb);
}

inline bool in_cloning_region(double fa, double fb) { return cloning_boundary_residual(fa, fb) >= -1e-12; }

namespace detail {

inline Matrix build_symmetric_projector(int n) {
  const int d = 1 << n;
  Matrix proj = Matrix::Zero(d, d);
  std::vector<int> perm(n);
  for (int k = 0; k < n; ++k) perm[k] = k;
  int count = 0;
  do {
    proj += permutation_operator(qubit_dims(n), perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return proj / static_cast<double>(count);
}

/// Projector onto the symmetric subspace of n <= 4 qubits.
inline const Matrix& symmetric_projector(int n) {
  static const std::vector<Matrix> cache = [] {
    std::vector<Matrix> c;
    for (int k = 0; k <= 4; ++k) c.push_back(k == 0 ? Matrix::Identity(1, 1) : build_symmetric_projector(k));
    return c;
  }();
  return cache.at(static_cast<std::size_t>(n));
}

}  // namespace detail

/// Optimal universal 1 -> M cloner: the symmetric-subspace projection of
/// |psi><psi| (x) (I/2)^(M-1), scaled by 2^M / (M + 1).
inline DensityMatrix symmetric_clone_state(const PureQubit& psi, int M) {
  if (M < 1 || M > 4) throw std::domain_error("symmetric_clone_state: M must be in 1..4");
  if (M == 1) return DensityMatrix::pure(psi);
  Matrix input = psi.projector();
  for (int k = 1; k < M; ++k) input = kron(input, 0.5 * pauli::identity());
  const Matrix& proj = detail::symmetric_projector(M);
  const double scale = std::ldexp(1.0, M) / (M + 1.0);
  return {scale * proj * input * proj, qubit_dims(M)};
}

}  // namespace qmimo

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
/// N = 2^m stream crosstalk channel: layered probabilistic block swaps
/// followed by independent depolarisation on every stream.
///
/// Layer l (1-based) is built from boxes of 2^l consecutive streams; each box
/// exchanges its lower half with its upper half with probability eta_l, using
/// one coin per box. For m = 2 this gives independent swaps (q0,q1) and
/// (q2,q3) at strength eta_1, then the joint block swap {q0,q1} <-> {q2,q3}
/// at strength eta_2. A stream j therefore reaches output k iff layer l
/// fired for every set bit l-1 of j XOR k.

#include <qmimo/linalg.hpp>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmimo {

/// Layered crosstalk strengths plus per-stream depolarising strengths.
struct MimoChannelSpec {
  int m = 1;
  std::vector<double> etas;
  std::vector<double> lambdas;

  int streams() const { return 1 << m; }

  void validate() const {
    if (m < 1 || m > 2) throw std::domain_error("MimoChannelSpec: m must be 1 or 2");
    if (static_cast<int>(etas.size()) != m) {
      throw std::domain_error("MimoChannelSpec: need exactly m crosstalk strengths");
    }
    if (static_cast<int>(lambdas.size()) != streams()) {
      throw std::domain_error("MimoChannelSpec: need exactly 2^m depolarising strengths");
    }
    for (double e : etas) {
      if (!(e >= 0.0 && e <= 0.5)) {
        throw std::domain_error("MimoChannelSpec: eta must lie in [0, 0.5]");
      }
    }
    for (double l : lambdas) {
      if (!(l >= 0.0 && l <= 1.0)) {
        throw std::domain_error("MimoChannelSpec: lambda must lie in [0, 1]");
      }
    }
  }

  static MimoChannelSpec two_by_two(double eta, double lambda1, double lambda2) {
    return {1, {eta}, {lambda1, lambda2}};
  }

  static MimoChannelSpec four_by_four(double eta1, double eta2, double lambda) {
    return {2, {eta1, eta2}, {lambda, lambda, lambda, lambda}};
  }

  static MimoChannelSpec identity(int m) {
    return {m, std::vector<double>(m, 0.0), std::vector<double>(1u << m, 0.0)};
  }
};

/// Streams exchanged jointly by one crosstalk box: first[i] <-> second[i].
struct BlockSwap {
  std::vector<int> first;
  std::vector<int> second;
};

/// N_lambda on one stream: (1 - lambda) rho + lambda (I/2 on that stream).
inline Matrix depolarize(const Matrix& rho, const Dims& dims, int stream, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::domain_error("depolarize: lambda must lie in [0, 1]");
  }
  if (stream < 0 || stream >= static_cast<int>(dims.size())) {
    throw DimensionError("depolarize: stream index out of range");
  }
  if (lambda == 0.0) return rho;
  return (1.0 - lambda) * rho + lambda * replace_with_maximally_mixed(rho, dims, stream);
}

inline DensityMatrix depolarize(const DensityMatrix& rho, int stream, double lambda) {
  return {depolarize(rho.data(), rho.dims(), stream, lambda), rho.dims()};
}

namespace detail {

inline std::vector<int> swap_permutation(int n, const BlockSwap& swap) {
  if (swap.first.size() != swap.second.size() || swap.first.empty()) {
    throw DimensionError("cswap: both halves of a box must have the same nonzero size");
  }
  std::vector<int> perm(n);
  for (int k = 0; k < n; ++k) perm[k] = k;
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < swap.first.size(); ++i) {
    const int a = swap.first[i];
    const int b = swap.second[i];
    if (a < 0 || a >= n || b < 0 || b >= n) throw DimensionError("cswap: stream out of range");
    if (a == b || used[a] || used[b]) throw DimensionError("cswap: overlapping stream pairs");
    used[a] = used[b] = true;
    perm[a] = b;
    perm[b] = a;
  }
  return perm;
}

}  // namespace detail

/// C_eta(rho) = (1 - eta) rho + eta S rho S^dagger, S the joint swap of all
/// listed pairs (one coin for the whole box).
inline Matrix cswap_layer(const Matrix& rho, const Dims& dims, const BlockSwap& swap, double eta) {
  if (!(eta >= 0.0 && eta <= 0.5)) throw std::domain_error("cswap_layer: eta must lie in [0, 0.5]");
  const auto perm = detail::swap_permutation(static_cast<int>(dims.size()), swap);
  if (eta == 0.0) return rho;
  return (1.0 - eta) * rho + eta * permute_subsystems(rho, dims, perm);
}

inline DensityMatrix cswap_layer(const DensityMatrix& rho, const BlockSwap& swap, double eta) {
  return {cswap_layer(rho.data(), rho.dims(), swap, eta), rho.dims()};
}

/// Crosstalk boxes of layer `layer` (1-based) for 2^m streams.
inline std::vector<BlockSwap> layer_boxes(int m, int layer) {
  if (layer < 1 || layer > m) throw std::out_of_range("layer_boxes: layer out of range");
  const int n = 1 << m;
  const int half = 1 << (layer - 1);
  std::vector<BlockSwap> boxes;
  for (int start = 0; start < n; start += 2 * half) {
    BlockSwap box;
    for (int i = 0; i < half; ++i) {
      box.first.push_back(start + i);
      box.second.push_back(start + half + i);
    }
    boxes.push_back(std::move(box));
  }
  return boxes;
}

/// Crosstalk layers only (no depolarisation).
inline Matrix apply_crosstalk(const Matrix& rho, const MimoChannelSpec& spec) {
  const Dims dims = qubit_dims(spec.streams());
  Matrix out = rho;
  for (int layer = 1; layer <= spec.m; ++layer) {
    for (const auto& box : layer_boxes(spec.m, layer)) {
      out = cswap_layer(out, dims, box, spec.etas[layer - 1]);
    }
  }
  return out;
}

/// Full link: every crosstalk layer in order, then local depolarisation.
inline Matrix apply_mimo_channel(const Matrix& rho, const MimoChannelSpec& spec) {
  spec.validate();
  const int n = spec.streams();
  if (rho.rows() != (1 << n) || rho.cols() != (1 << n)) {
    throw DimensionError("apply_mimo_channel: input must act on " + std::to_string(n) + " qubits");
  }
  const Dims dims = qubit_dims(n);
  Matrix out = apply_crosstalk(rho, spec);
  for (int s = 0; s < n; ++s) out = depolarize(out, dims, s, spec.lambdas[s]);
  return out;
}

inline DensityMatrix apply_mimo_channel(const DensityMatrix& rho, const MimoChannelSpec& spec) {
  if (rho.subsystems() != spec.streams()) {
    throw DimensionError("apply_mimo_channel: state has the wrong number of streams");
  }
  return {apply_mimo_channel(rho.data(), spec), rho.dims()};
}

/// Probability that input stream j ends on output stream k (0-based),
///   prod_l eta_l^{b_l} (1 - eta_l)^{1 - b_l},  b_l = bit l-1 of (j XOR k).
inline double crossing_probability(int j, int k, const std::vector<double>& etas) {
  const int m = static_cast<int>(etas.size());
  const int n = 1 << m;
  if (j < 0 || j >= n || k < 0 || k >= n) {
    throw std::out_of_range("crossing_probability: stream index out of range");
  }
  const int x = j ^ k;
  double p = 1.0;
  for (int l = 0; l < m; ++l) p *= ((x >> l) & 1) ? etas[l] : 1.0 - etas[l];
  return p;
}

inline Eigen::MatrixXd crossing_matrix(const std::vector<double>& etas) {
  const int n = 1 << etas.size();
  Eigen::MatrixXd p(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) p(j, k) = crossing_probability(j, k, etas);
  }
  return p;
}

/// Product input: `rhos` on the listed streams, I/2 everywhere else.
inline Matrix embed_streams(const Matrix& joint, const std::vector<int>& streams, int n) {
  const int k = static_cast<int>(streams.size());
  if (joint.rows() != (1 << k)) throw DimensionError("embed_streams: state size mismatch");
  Matrix full = joint;
  for (int s = k; s < n; ++s) full = kron(full, 0.5 * pauli::identity());
  // Factors are currently ordered [streams..., unused...]; move them into place.
  std::vector<int> order(streams);
  for (int s = 0; s < n; ++s) {
    if (std::find(streams.begin(), streams.end(), s) == streams.end()) order.push_back(s);
  }
  if (static_cast<int>(order.size()) != n) throw DimensionError("embed_streams: bad stream list");
  // order[f] = target stream of current factor f; output factor t is input factor inv[t].
  std::vector<int> inv(n, -1);
  for (int f = 0; f < n; ++f) {
    if (order[f] < 0 || order[f] >= n || inv[order[f]] != -1) {
      throw DimensionError("embed_streams: bad stream list");
    }
    inv[order[f]] = f;
  }
  return permute_subsystems(full, qubit_dims(n), inv);
}

/// Choi matrix sum_ij |i><j| (x) Phi(|i><j|) of a linear map on `qubits` qubits.
inline Matrix choi_matrix(const std::function<Matrix(const Matrix&)>& channel, int qubits) {
  const int d = 1 << qubits;
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      const Matrix out = channel(e);
      if (out.rows() != d || out.cols() != d) {
        throw DimensionError("choi_matrix: channel must preserve dimension");
      }
      choi.block(i * d, j * d, d, d) = out;
    }
  }
  return choi;
}

struct CptpReport {
  double choi_min_eigenvalue = 0.0;
  double trace_preservation_error = 0.0;
  double hermiticity_error = 0.0;

  bool completely_positive() const { return choi_min_eigenvalue >= -kPsdTol; }
  bool trace_preserving() const { return trace_preservation_error <= kTraceTol; }
  bool ok() const { return completely_positive() && trace_preserving() && hermiticity_error <= kHermitianTol; }
};

inline CptpReport cptp_check(const std::function<Matrix(const Matrix&)>& channel, int qubits) {
  const int d = 1 << qubits;
  const Matrix choi = choi_matrix(channel, qubits);
  CptpReport r;
  r.hermiticity_error = hermiticity_error(choi);
  r.choi_min_eigenvalue = min_eigenvalue(choi);
  // Tr_out of the Choi matrix: input factor first, output factor second.
  const Matrix reduced = partial_trace(choi, Dims{d, d}, {0});
  r.trace_preservation_error = (reduced - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace qmimo

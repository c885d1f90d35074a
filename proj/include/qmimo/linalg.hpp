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
/// Dense complex matrix engine for few-qubit density operators.
///
/// Subsystems are ordered big-endian: the first entry of a dims list is the
/// leftmost tensor factor, so the basis index of |b_0 b_1 ... b_{n-1}> is
/// sum_k b_k * (d_{k+1} * ... * d_{n-1}).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmimo {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Dims = std::vector<int>;
using Bloch = std::array<double, 3>;

/// Largest supported Hilbert-space dimension (six qubits).
inline constexpr int kMaxDimension = 64;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace pauli {

inline Matrix identity() { return Matrix::Identity(2, 2); }

inline Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

inline Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// sigma_0 .. sigma_3 with sigma_0 = I.
inline Matrix sigma(int k) {
  switch (k) {
    case 0:
      return identity();
    case 1:
      return x();
    case 2:
      return y();
    case 3:
      return z();
    default:
      throw std::out_of_range("pauli index must be in 0..3");
  }
}

}  // namespace pauli

inline int product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

inline Dims qubit_dims(int n) { return Dims(static_cast<std::size_t>(n), 2); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Matrix kron_all(std::span<const Matrix> factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

namespace detail {

inline std::vector<int> strides(const Dims& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) {
    s[k] = s[k + 1] * dims[k + 1];
  }
  return s;
}

/// Linear offsets of every multi-index over the listed subsystems.
inline std::vector<int> offsets(const Dims& dims, const std::vector<int>& subsystems) {
  const auto st = strides(dims);
  std::vector<int> out{0};
  for (int s : subsystems) {
    std::vector<int> next;
    next.reserve(out.size() * dims[s]);
    for (int base : out) {
      for (int d = 0; d < dims[s]; ++d) next.push_back(base + d * st[s]);
    }
    out = std::move(next);
  }
  return out;
}

inline void check_square(const Matrix& m, const Dims& dims) {
  if (m.rows() != m.cols()) throw DimensionError("matrix is not square");
  if (product(dims) != m.rows()) {
    throw DimensionError("subsystem dimensions do not match matrix size " +
                         std::to_string(m.rows()));
  }
}

}  // namespace detail

/// Reduced operator on the subsystems listed in keep (any order; the result
/// keeps them in ascending order).
inline Matrix partial_trace(const Matrix& m, const Dims& dims, std::vector<int> keep) {
  detail::check_square(m, dims);
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw DimensionError("partial_trace: repeated subsystem index");
  }
  for (int k : keep) {
    if (k < 0 || k >= static_cast<int>(dims.size())) {
      throw DimensionError("partial_trace: subsystem index out of range");
    }
  }
  std::vector<int> traced;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s) {
    if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);
  }
  const auto kept_off = detail::offsets(dims, keep);
  const auto traced_off = detail::offsets(dims, traced);
  const auto n = static_cast<Eigen::Index>(kept_off.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      cplx acc = 0.0;
      for (int t : traced_off) acc += m(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

inline Matrix partial_transpose(const Matrix& m, const Dims& dims, int subsystem) {
  detail::check_square(m, dims);
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size())) {
    throw DimensionError("partial_transpose: subsystem index out of range");
  }
  const int stride = detail::strides(dims)[subsystem];
  const int d = dims[subsystem];
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const int di = static_cast<int>(i / stride) % d;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const int dj = static_cast<int>(j / stride) % d;
      out(i, j) = m(i + (dj - di) * stride, j + (di - dj) * stride);
    }
  }
  return out;
}

/// Partial transpose over every subsystem in the list.
inline Matrix partial_transpose(const Matrix& m, const Dims& dims, std::span<const int> subsystems) {
  Matrix out = m;
  for (int s : subsystems) out = partial_transpose(out, dims, s);
  return out;
}

namespace detail {

/// For each basis index of the relabelled space, the matching index of the original.
inline std::vector<int> permutation_map(const Dims& dims, const std::vector<int>& perm) {
  const auto n = dims.size();
  if (perm.size() != n) throw DimensionError("permutation size mismatch");
  std::vector<int> check(perm);
  std::sort(check.begin(), check.end());
  for (std::size_t k = 0; k < n; ++k) {
    if (check[k] != static_cast<int>(k)) throw DimensionError("not a permutation");
  }
  Dims new_dims(n);
  for (std::size_t k = 0; k < n; ++k) new_dims[k] = dims[perm[k]];
  const auto old_st = strides(dims);
  const auto new_st = strides(new_dims);
  const int total = product(dims);
  std::vector<int> map(total);
  for (int idx = 0; idx < total; ++idx) {
    int old_idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const int digit = (idx / new_st[k]) % new_dims[k];
      old_idx += digit * old_st[perm[k]];
    }
    map[idx] = old_idx;
  }
  return map;
}

}  // namespace detail

/// Relabels subsystems: output factor k is input factor perm[k].
inline Matrix permute_subsystems(const Matrix& m, const Dims& dims, const std::vector<int>& perm) {
  detail::check_square(m, dims);
  const auto map = detail::permutation_map(dims, perm);
  const int total = static_cast<int>(map.size());
  Matrix out(total, total);
  for (int i = 0; i < total; ++i) {
    for (int j = 0; j < total; ++j) out(i, j) = m(map[i], map[j]);
  }
  return out;
}

/// Unitary P with P M P^dagger = permute_subsystems(M, dims, perm).
inline Matrix permutation_operator(const Dims& dims, const std::vector<int>& perm) {
  const auto map = detail::permutation_map(dims, perm);
  const int total = static_cast<int>(map.size());
  Matrix P = Matrix::Zero(total, total);
  for (int i = 0; i < total; ++i) P(i, map[i]) = 1.0;
  return P;
}

/// Replaces subsystem s by the maximally mixed state, keeping the rest.
inline Matrix replace_with_maximally_mixed(const Matrix& m, const Dims& dims, int s) {
  detail::check_square(m, dims);
  const int stride = detail::strides(dims)[s];
  const int d = dims[s];
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const int di = static_cast<int>(i / stride) % d;
    const Eigen::Index i0 = i - di * stride;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const int dj = static_cast<int>(j / stride) % d;
      if (di != dj) continue;
      const Eigen::Index j0 = j - dj * stride;
      cplx acc = 0.0;
      for (int t = 0; t < d; ++t) acc += m(i0 + t * stride, j0 + t * stride);
      out(i, j) = acc / static_cast<double>(d);
    }
  }
  return out;
}

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline double hermiticity_error(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double max_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

struct ValidityReport {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool hermitian() const { return hermiticity_error <= kHermitianTol; }
  bool unit_trace() const { return trace_error <= kTraceTol; }
  bool positive() const { return min_eigenvalue >= -kPsdTol; }
  bool ok() const { return hermitian() && unit_trace() && positive(); }
};

inline ValidityReport check_state(const Matrix& m) {
  ValidityReport r;
  r.hermiticity_error = hermiticity_error(m);
  r.trace_error = std::abs(m.trace() - cplx(1.0, 0.0));
  r.min_eigenvalue = min_eigenvalue(m);
  return r;
}

/// Pure qubit alpha|0> + beta|1>.
class PureQubit {
 public:
  PureQubit(cplx alpha, cplx beta) : alpha_(alpha), beta_(beta) {
    const double norm = std::norm(alpha) + std::norm(beta);
    if (std::abs(norm - 1.0) > 1e-12) {
      throw std::invalid_argument("PureQubit: amplitudes are not normalised");
    }
  }

  /// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
  static PureQubit from_angles(double theta, double phi) {
    return {std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)};
  }

  static PureQubit from_bloch(const Bloch& r) {
    const double norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    if (std::abs(norm - 1.0) > 1e-10) {
      throw std::invalid_argument("PureQubit: Bloch vector must have unit norm");
    }
    const double theta = std::acos(std::clamp(r[2] / norm, -1.0, 1.0));
    const double phi = std::atan2(r[1], r[0]);
    return from_angles(theta, phi);
  }

  cplx alpha() const { return alpha_; }
  cplx beta() const { return beta_; }

  Bloch bloch() const {
    const cplx ab = std::conj(alpha_) * beta_;
    return {2 * ab.real(), 2 * ab.imag(), std::norm(alpha_) - std::norm(beta_)};
  }

  Vector ket() const {
    Vector v(2);
    v << alpha_, beta_;
    return v;
  }

  /// Orthogonal partner -conj(beta)|0> + alpha|1>.
  PureQubit orthogonal() const { return {-std::conj(beta_), alpha_}; }

  Matrix projector() const {
    const Vector v = ket();
    return v * v.adjoint();
  }

 private:
  cplx alpha_;
  cplx beta_;
};

inline Matrix bloch_operator(const Bloch& r) {
  return 0.5 * (pauli::identity() + r[0] * pauli::x() + r[1] * pauli::y() + r[2] * pauli::z());
}

/// Density operator with subsystem bookkeeping. Construction through
/// `checked` enforces Hermiticity, unit trace and positivity; the plain
/// constructor only checks dimensions.
class DensityMatrix {
 public:
  DensityMatrix(Matrix data, Dims dims) : data_(std::move(data)), dims_(std::move(dims)) {
    detail::check_square(data_, dims_);
    if (data_.rows() > kMaxDimension) {
      throw DimensionError("dimension exceeds the supported maximum of 64");
    }
  }

  static DensityMatrix checked(Matrix data, Dims dims) {
    DensityMatrix rho(std::move(data), std::move(dims));
    const auto report = rho.validity();
    if (!report.ok()) {
      throw std::domain_error("DensityMatrix: not a valid state (herm err " +
                              std::to_string(report.hermiticity_error) + ", trace err " +
                              std::to_string(report.trace_error) + ", min eig " +
                              std::to_string(report.min_eigenvalue) + ")");
    }
    return rho;
  }

  static DensityMatrix maximally_mixed(int qubits) {
    const int d = 1 << qubits;
    return {Matrix::Identity(d, d) / static_cast<double>(d), qubit_dims(qubits)};
  }

  static DensityMatrix pure(const PureQubit& psi) { return {psi.projector(), {2}}; }

  const Matrix& data() const { return data_; }
  const Dims& dims() const { return dims_; }
  int subsystems() const { return static_cast<int>(dims_.size()); }
  Eigen::Index dimension() const { return data_.rows(); }

  ValidityReport validity() const { return check_state(data_); }

 private:
  Matrix data_;
  Dims dims_;
};

inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return {kron(a.data(), b.data()), std::move(dims)};
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  std::sort(keep.begin(), keep.end());
  Dims kept;
  for (int k : keep) {
    if (k < 0 || k >= rho.subsystems()) {
      throw DimensionError("partial_trace: subsystem index out of range");
    }
    kept.push_back(rho.dims()[k]);
  }
  return {partial_trace(rho.data(), rho.dims(), keep), std::move(kept)};
}

/// <psi| rho |psi> for a single-qubit rho, clamped against rounding to [0,1].
inline double fidelity_with_pure(const Matrix& rho, const PureQubit& psi) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw DimensionError("fidelity_with_pure expects a single-qubit operator");
  }
  const Vector v = psi.ket();
  const double f = (v.adjoint() * rho * v)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

inline double fidelity_with_pure(const DensityMatrix& rho, const PureQubit& psi) {
  return fidelity_with_pure(rho.data(), psi);
}

/// Re Tr[A B], the real inner product for Hermitian operands.
inline double trace_product(const Matrix& a, const Matrix& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

}  // namespace qmimo

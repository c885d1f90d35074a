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
/// Haar averages over pure qubit states and the operators
///   Q = int rho_x(psi) (x) |psi><psi| dpsi,   R = int rho_x(psi) (x) I_2 dpsi
/// that feed the purification program. Register order is always
/// [clone registers..., reference qubit].

#include <qmimo/channel.hpp>
#include <qmimo/cloner.hpp>
#include <qmimo/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace qmimo {

/// Product rule: Gauss-Legendre in cos(theta) times a uniform periodic
/// trapezoid in phi.
struct Quadrature {
  int theta_order = 20;
  int phi_order = 40;
};

/// Plain Monte Carlo over Haar-random states. The generator contract is
/// std::mt19937_64 seeded with `seed`; each sample draws u = cos(theta) and
/// then phi from the top 53 bits of one 64-bit output each.
struct MonteCarlo {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};

using HaarMethod = std::variant<Quadrature, MonteCarlo>;

struct HaarEstimate {
  double value = 0.0;
  /// Standard error of the mean for Monte Carlo, zero for quadrature.
  double std_error = 0.0;
  std::size_t evaluations = 0;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::domain_error("gauss_legendre: order must be positive");
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

namespace detail {

inline double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Haar-random qubit from the documented generator contract.
inline PureQubit sample_haar(std::mt19937_64& gen) {
  const double u = 2.0 * detail::unit_uniform(gen) - 1.0;
  const double phi = 2.0 * std::numbers::pi * detail::unit_uniform(gen);
  return PureQubit::from_angles(std::acos(u), phi);
}

/// Visits (state, weight) pairs of a quadrature rule; weights sum to one.
template <class Visit>
void for_each_quadrature_point(const Quadrature& rule, Visit&& visit) {
  if (rule.theta_order < 1 || rule.phi_order < 1) {
    throw std::domain_error("quadrature orders must be positive");
  }
  const auto [nodes, weights] = gauss_legendre(rule.theta_order);
  for (int i = 0; i < rule.theta_order; ++i) {
    const double theta = std::acos(nodes[i]);
    for (int j = 0; j < rule.phi_order; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / rule.phi_order;
      visit(PureQubit::from_angles(theta, phi), 0.5 * weights[i] / rule.phi_order);
    }
  }
}

/// Average of a bounded scalar function over Haar-random pure states.
inline HaarEstimate haar_average(const std::function<double(const PureQubit&)>& f,
                                 const HaarMethod& method) {
  HaarEstimate est;
  if (const auto* q = std::get_if<Quadrature>(&method)) {
    double acc = 0.0;
    for_each_quadrature_point(*q, [&](const PureQubit& psi, double w) {
      acc += w * f(psi);
      ++est.evaluations;
    });
    est.value = acc;
    return est;
  }
  const auto& mc = std::get<MonteCarlo>(method);
  if (mc.samples < 2) throw std::domain_error("haar_average: need at least two samples");
  std::mt19937_64 gen(mc.seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t n = 1; n <= mc.samples; ++n) {
    const double v = f(sample_haar(gen));
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  est.value = mean;
  est.evaluations = mc.samples;
  est.std_error = std::sqrt(m2 / static_cast<double>(mc.samples - 1) / static_cast<double>(mc.samples));
  return est;
}

/// Haar-averaged pair (Q, R) for K clone registers plus one reference qubit.
struct QROperators {
  Matrix Q;
  Matrix R;
  int K = 0;

  Dims dims() const { return qubit_dims(K + 1); }

  /// Q with the reference qubit moved to the leftmost tensor factor.
  Matrix q_reference_first() const { return reference_first(Q); }
  Matrix r_reference_first() const { return reference_first(R); }

  /// Haar average of rho_x itself, i.e. R with the reference identity traced out / 2.
  Matrix average_state() const {
    std::vector<int> keep(K);
    for (int k = 0; k < K; ++k) keep[k] = k;
    return 0.5 * partial_trace(R, dims(), keep);
  }

 private:
  Matrix reference_first(const Matrix& m) const {
    std::vector<int> perm{K};
    for (int k = 0; k < K; ++k) perm.push_back(k);
    return permute_subsystems(m, dims(), perm);
  }
};

struct QrReport {
  double q_hermiticity_error = 0.0;
  double r_hermiticity_error = 0.0;
  double q_trace_error = 0.0;
  double r_trace_error = 0.0;
  /// max |R - (Tr_ref R / 2) (x) I|.
  double r_factorization_error = 0.0;

  bool ok(double tol = 1e-10) const {
    return q_hermiticity_error <= tol && r_hermiticity_error <= tol && q_trace_error <= tol &&
           r_trace_error <= tol && r_factorization_error <= tol;
  }
};

inline QrReport check_qr(const QROperators& qr) {
  QrReport rep;
  rep.q_hermiticity_error = hermiticity_error(qr.Q);
  rep.r_hermiticity_error = hermiticity_error(qr.R);
  rep.q_trace_error = std::abs(qr.Q.trace() - cplx(1.0, 0.0));
  rep.r_trace_error = std::abs(qr.R.trace() - cplx(2.0, 0.0));
  const Matrix factored = kron(qr.average_state(), pauli::identity());
  rep.r_factorization_error = (qr.R - factored).cwiseAbs().maxCoeff();
  return rep;
}

/// Bloch contraction and residual correlation of the 1->2 cloner after the
/// 2x2 link.
struct NoiseProcessedCloner {
  double gamma1p = 0.0;
  double gamma2p = 0.0;
  double kappap = 0.0;
};

inline NoiseProcessedCloner noise_process(const CloneParams& p, double eta, double lambda1,
                                          double lambda2) {
  return {(1.0 - lambda1) * ((1.0 - eta) * p.gamma1 + eta * p.gamma2),
          (1.0 - lambda2) * ((1.0 - eta) * p.gamma2 + eta * p.gamma1),
          p.kappa * (1.0 - lambda1) * (1.0 - lambda2)};
}

/// Closed-form Q and R for the 1->2 cloner through the 2x2 link, using
///   int r_k dpsi = 0,  int r_k r_m dpsi = delta_km / 3:
///   R = Gamma_0 (x) I,  Q = 1/2 Gamma_0 (x) I + 1/6 sum_k Gamma_k (x) sigma_k,
/// with Gamma_0 = 1/4 (I + kappa' sum_k s_k (x) s_k) and
/// Gamma_k = gamma1'/4 s_k (x) I + gamma2'/4 I (x) s_k.
inline QROperators analytic_qr_2x2(const CloneParams& p, double eta, double lambda1, double lambda2) {
  if (!(eta >= 0.0 && eta <= 0.5)) throw std::domain_error("analytic_qr_2x2: eta must lie in [0, 0.5]");
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0 && lambda2 >= 0.0 && lambda2 <= 1.0)) {
    throw std::domain_error("analytic_qr_2x2: lambda must lie in [0, 1]");
  }
  const auto np = noise_process(p, eta, lambda1, lambda2);
  const Matrix id = pauli::identity();
  Matrix gamma0 = 0.25 * kron(id, id);
  for (int k = 1; k <= 3; ++k) gamma0 += 0.25 * np.kappap * kron(pauli::sigma(k), pauli::sigma(k));
  QROperators qr;
  qr.K = 2;
  qr.R = kron(gamma0, id);
  qr.Q = 0.5 * qr.R;
  for (int k = 1; k <= 3; ++k) {
    const Matrix s = pauli::sigma(k);
    const Matrix gamma_k = 0.25 * np.gamma1p * kron(s, id) + 0.25 * np.gamma2p * kron(id, s);
    qr.Q += kron(gamma_k, s) / 6.0;
  }
  return qr;
}

/// Which state the purifier is designed on.
enum class RhoSource {
  cloner_output,   // rho_c: the encoder output before the link
  channel_output,  // rho_o: the link output
};

/// Maps a pure input to the K-register state rho_x(psi).
using StateMap = std::function<Matrix(const PureQubit&)>;
/// Maps a pure input to the full N-stream channel input.
using Encoder = std::function<Matrix(const PureQubit&)>;

struct QrEstimate {
  QROperators qr;
  /// Entrywise standard errors of the real and imaginary parts (zero for quadrature).
  Eigen::MatrixXd q_stderr_re;
  Eigen::MatrixXd q_stderr_im;
  Eigen::MatrixXd r_stderr_re;
  Eigen::MatrixXd r_stderr_im;
  std::size_t evaluations = 0;
};

/// Haar integral of rho_x (x) rho and rho_x (x) I for an arbitrary state map.
inline QrEstimate qr_from_state_map(const StateMap& state, int K, const HaarMethod& method) {
  if (K < 1 || K > 5) throw std::domain_error("qr_from_state_map: K must be in 1..5");
  const int d = 1 << (K + 1);
  const Matrix id = pauli::identity();
  QrEstimate est;
  est.qr.K = K;
  est.qr.Q = Matrix::Zero(d, d);
  est.qr.R = Matrix::Zero(d, d);
  est.q_stderr_re = est.q_stderr_im = est.r_stderr_re = est.r_stderr_im = Eigen::MatrixXd::Zero(d, d);

  auto terms = [&](const PureQubit& psi) {
    const Matrix rho_x = state(psi);
    if (rho_x.rows() != (1 << K)) throw DimensionError("qr_from_state_map: state has wrong size");
    return std::pair<Matrix, Matrix>{kron(rho_x, psi.projector()), kron(rho_x, id)};
  };

  if (const auto* q = std::get_if<Quadrature>(&method)) {
    for_each_quadrature_point(*q, [&](const PureQubit& psi, double w) {
      const auto [qt, rt] = terms(psi);
      est.qr.Q += w * qt;
      est.qr.R += w * rt;
      ++est.evaluations;
    });
    return est;
  }

  const auto& mc = std::get<MonteCarlo>(method);
  if (mc.samples < 2) throw std::domain_error("qr_from_state_map: need at least two samples");
  std::mt19937_64 gen(mc.seed);
  Matrix q_sum = Matrix::Zero(d, d), r_sum = Matrix::Zero(d, d);
  Eigen::MatrixXd q_re2 = Eigen::MatrixXd::Zero(d, d), q_im2 = q_re2, r_re2 = q_re2, r_im2 = q_re2;
  for (std::size_t n = 0; n < mc.samples; ++n) {
    const auto [qt, rt] = terms(sample_haar(gen));
    q_sum += qt;
    r_sum += rt;
    q_re2 += qt.real().cwiseAbs2();
    q_im2 += qt.imag().cwiseAbs2();
    r_re2 += rt.real().cwiseAbs2();
    r_im2 += rt.imag().cwiseAbs2();
  }
  const double n = static_cast<double>(mc.samples);
  est.qr.Q = q_sum / n;
  est.qr.R = r_sum / n;
  auto stderr_of = [n](const Eigen::MatrixXd& sum_sq, const Eigen::MatrixXd& mean) {
    Eigen::MatrixXd var = (sum_sq / n - mean.cwiseAbs2()) * (n / (n - 1.0));
    return Eigen::MatrixXd(var.cwiseMax(0.0).cwiseSqrt() / std::sqrt(n));
  };
  est.q_stderr_re = stderr_of(q_re2, est.qr.Q.real());
  est.q_stderr_im = stderr_of(q_im2, est.qr.Q.imag());
  est.r_stderr_re = stderr_of(r_re2, est.qr.R.real());
  est.r_stderr_im = stderr_of(r_im2, est.qr.R.imag());
  est.evaluations = mc.samples;
  return est;
}

/// Numeric Q and R: encode, optionally pass through the link, keep the listed
/// output streams (the rest are traced out), then Haar-integrate.
inline QrEstimate numeric_qr(const Encoder& encode, const MimoChannelSpec& channel,
                             std::vector<int> keep, RhoSource source, const HaarMethod& method) {
  channel.validate();
  const int n = channel.streams();
  std::sort(keep.begin(), keep.end());
  if (keep.empty() || keep.front() < 0 || keep.back() >= n ||
      std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw DimensionError("numeric_qr: keep must be a nonempty set of distinct streams");
  }
  const Dims dims = qubit_dims(n);
  StateMap state = [&](const PureQubit& psi) {
    Matrix in = encode(psi);
    if (in.rows() != (1 << n)) throw DimensionError("numeric_qr: encoder output has wrong size");
    if (source == RhoSource::channel_output) in = apply_mimo_channel(in, channel);
    return static_cast<int>(keep.size()) == n ? in : partial_trace(in, dims, keep);
  };
  return qr_from_state_map(state, static_cast<int>(keep.size()), method);
}

/// Deviation of an estimate from reference operators. For Monte Carlo the
/// matrix-level criterion is max |delta| <= z * max standard error.
struct QrAgreement {
  double max_deviation = 0.0;
  double max_std_error = 0.0;
  /// Share of real/imaginary entry components within z standard errors.
  double fraction_within = 1.0;

  bool within(double absolute_tol) const { return max_deviation <= absolute_tol; }
  bool within_std_errors(double z) const { return max_deviation <= z * max_std_error; }
};

inline QrAgreement compare_qr(const QrEstimate& est, const QROperators& ref, double z = 3.0) {
  if (est.qr.K != ref.K || est.qr.Q.rows() != ref.Q.rows()) {
    throw DimensionError("compare_qr: operators have different sizes");
  }
  QrAgreement a;
  std::size_t inside = 0, total = 0;
  auto visit = [&](const Matrix& m, const Matrix& r, const Eigen::MatrixXd& se_re, const Eigen::MatrixXd& se_im) {
    const Matrix d = m - r;
    a.max_deviation = std::max(a.max_deviation, d.cwiseAbs().maxCoeff());
    a.max_std_error = std::max({a.max_std_error, se_re.maxCoeff(), se_im.maxCoeff()});
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      for (Eigen::Index j = 0; j < d.cols(); ++j) {
        inside += std::abs(d(i, j).real()) <= z * se_re(i, j) + 1e-12;
        inside += std::abs(d(i, j).imag()) <= z * se_im(i, j) + 1e-12;
        total += 2;
      }
    }
  };
  visit(est.qr.Q, ref.Q, est.q_stderr_re, est.q_stderr_im);
  visit(est.qr.R, ref.R, est.r_stderr_re, est.r_stderr_im);
  a.fraction_within = static_cast<double>(inside) / static_cast<double>(total);
  return a;
}

/// Encoder for the 2x2 link: the 1->2 cloner output on streams (0, 1).
inline Encoder two_clone_encoder(const CloneParams& p) {
  return [p](const PureQubit& psi) { return two_clone_operator(psi.bloch(), p); };
}

/// Encoder for a 2^m link: symmetric 1->M clones on streams 0..M-1, I/2 elsewhere.
inline Encoder symmetric_clone_encoder(int M, int streams) {
  if (M < 1 || M > streams) throw std::domain_error("symmetric_clone_encoder: need 1 <= M <= N");
  std::vector<int> used(M);
  for (int k = 0; k < M; ++k) used[k] = k;
  return [M, streams, used](const PureQubit& psi) {
    return embed_streams(symmetric_clone_state(psi, M).data(), used, streams);
  };
}

}  // namespace qmimo

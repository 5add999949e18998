/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cekit/channels.hpp"

#include <cmath>
#include <utility>

namespace cekit {

namespace {

CMatrix matrix_unit(int d, int i, int j) {
  CMatrix e = CMatrix::Zero(d, d);
  e(i, j) = Complex(1, 0);
  return e;
}

CMatrix swap_operator(int d) {
  CMatrix s = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(i * d + j, j * d + i) = Complex(1, 0);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

KrausChannel::KrausChannel(int d_in, int d_out, std::vector<CMatrix> ops)
    : dim_in(d_in), dim_out(d_out), kraus(std::move(ops)) {
  check_dimension(dim_in, "KrausChannel(in)");
  check_dimension(dim_out, "KrausChannel(out)");
  if (kraus.empty()) throw validation_error("KrausChannel: Kraus list is empty");
  for (const CMatrix& k : kraus)
    if (k.rows() != dim_out || k.cols() != dim_in)
      throw dimension_error("KrausChannel: Kraus operator has wrong shape");
  CMatrix sum = CMatrix::Zero(dim_in, dim_in);
  for (const CMatrix& k : kraus) sum += k.adjoint() * k;
  if (max_abs(CMatrix(sum - CMatrix::Identity(dim_in, dim_in))) > kHermTol)
    throw validation_error(
        "KrausChannel: not trace-preserving (sum K†K differs from I beyond 1e-8)");
}

CMatrix KrausChannel::apply(const CMatrix& m) const {
  if (m.rows() != dim_in || m.cols() != dim_in)
    throw dimension_error("KrausChannel::apply: input has wrong dimension");
  CMatrix out = CMatrix::Zero(dim_out, dim_out);
  for (const CMatrix& k : kraus) out += k * m * k.adjoint();
  return out;
}

CMatrix KrausChannel::apply_adjoint(const CMatrix& x) const {
  if (x.rows() != dim_out || x.cols() != dim_out)
    throw dimension_error("KrausChannel::apply_adjoint: input has wrong dimension");
  CMatrix out = CMatrix::Zero(dim_in, dim_in);
  for (const CMatrix& k : kraus) out += k.adjoint() * x * k;
  return out;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  CMatrix out = ch.apply(rho.matrix);
  // Scrub round-off so the output satisfies the DensityMatrix invariants.
  out = CMatrix((out + out.adjoint()) / 2.0);
  out /= out.trace().real();
  return DensityMatrix(out);
}

StochasticChannel::StochasticChannel(int in, int out, RMatrix probs)
    : n_in(in), n_out(out), q(std::move(probs)) {
  check_dimension(n_in, "StochasticChannel(in)");
  check_dimension(n_out, "StochasticChannel(out)");
  if (q.rows() != n_out || q.cols() != n_in)
    throw dimension_error("StochasticChannel: q must be n_out x n_in");
  for (int a = 0; a < n_in; ++a) {
    double col = 0.0;
    for (int b = 0; b < n_out; ++b) {
      if (q(b, a) < -kStochasticTol)
        throw validation_error("StochasticChannel: negative probability q(b|a)");
      col += q(b, a);
    }
    if (std::abs(col - 1.0) > kStochasticTol)
      throw validation_error(
          "StochasticChannel: column " + std::to_string(a) + " sums to " +
          std::to_string(col) + ", violating trace preservation");
  }
}

PathChannelSpec::PathChannelSpec(KrausChannel base_ch, CVector vacuum_amplitudes,
                                 int paths, DensityMatrix path_state)
    : base(std::move(base_ch)),
      gammas(std::move(vacuum_amplitudes)),
      k(paths),
      sigma(std::move(path_state)) {
  if (k < 2) throw dimension_error("PathChannelSpec: need at least 2 paths");
  if (static_cast<size_t>(gammas.size()) != base.kraus.size())
    throw dimension_error(
        "PathChannelSpec: vacuum amplitude count must match Kraus count");
  if (std::abs(gammas.squaredNorm() - 1.0) > kStateTol)
    throw validation_error("PathChannelSpec: sum |gamma|^2 differs from 1");
  if (sigma.dim() != k)
    throw dimension_error("PathChannelSpec: path state dimension must equal k");
  if (base.dim_in != base.dim_out)
    throw dimension_error(
        "PathChannelSpec: interference operator needs dim_in = dim_out");
}

CMatrix PathChannelSpec::interference_operator() const {
  CMatrix f = CMatrix::Zero(base.dim_out, base.dim_in);
  for (size_t i = 0; i < base.kraus.size(); ++i)
    f += std::conj(gammas(static_cast<Eigen::Index>(i))) * base.kraus[i];
  return f;
}

BipartiteChannel::BipartiteChannel(int d_a, int d_k, KrausChannel channel)
    : dim_a(d_a), dim_k(d_k), dim_b(channel.dim_out), inner(std::move(channel)) {
  if (inner.dim_in != dim_a * dim_k)
    throw dimension_error("BipartiteChannel: inner dim_in must be dim_a * dim_k");
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

KrausChannel embed_classical(const StochasticChannel& q) {
  std::vector<CMatrix> ops;
  for (int a = 0; a < q.n_in; ++a)
    for (int b = 0; b < q.n_out; ++b) {
      double p = q.q(b, a);
      if (p <= 0.0) continue;
      CMatrix k = CMatrix::Zero(q.n_out, q.n_in);
      k(b, a) = Complex(std::sqrt(p), 0);
      ops.push_back(std::move(k));
    }
  return KrausChannel(q.n_in, q.n_out, std::move(ops));
}

KrausChannel classical_to_quantum(const std::vector<DensityMatrix>& repreps) {
  if (repreps.empty())
    throw validation_error("classical_to_quantum: empty state list");
  const int d_in = static_cast<int>(repreps.size());
  const int d_out = repreps.front().dim();
  std::vector<CMatrix> ops;
  for (int a = 0; a < d_in; ++a) {
    if (repreps[a].dim() != d_out)
      throw dimension_error("classical_to_quantum: states have mixed dimensions");
    HermEig eig = herm_eig(repreps[a].matrix);
    for (int m = 0; m < d_out; ++m) {
      double l = eig.eigenvalues(m);
      if (l <= 1e-14) continue;
      CMatrix k = CMatrix::Zero(d_out, d_in);
      k.col(a) = std::sqrt(l) * eig.eigenvectors.col(m);
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(d_in, d_out, std::move(ops));
}

CMatrix partial_swap_action(int d, double theta, const CMatrix& sigma_lambda,
                            const CMatrix& m) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  CMatrix comm = sigma_lambda * m - m * sigma_lambda;
  return c * c * m.trace() * sigma_lambda + s * s * m -
         Complex(0, 1) * (s * c) * comm;
}

KrausChannel partial_swap_channel(int d, double theta,
                                  const DensityMatrix& sigma_lambda) {
  if (theta < 0.0 || theta >= 2.0 * M_PI)
    throw validation_error("partial_swap_channel: theta must lie in [0, 2pi)");
  if (sigma_lambda.dim() != d)
    throw dimension_error("partial_swap_channel: sigma dimension must equal d");
  check_dimension(d, "partial_swap_channel");
  CMatrix u = std::cos(theta) * CMatrix::Identity(d * d, d * d) +
              Complex(0, 1) * std::sin(theta) * swap_operator(d);
  // Choi of the exact unitary dilation.  The output system is the slot that
  // initially holds sigma; the other slot is traced out.
  CMatrix choi_m = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMatrix joint = kron(matrix_unit(d, i, j), sigma_lambda.matrix);
      CMatrix evolved = u * joint * u.adjoint();
      CMatrix slot_b = partial_trace(evolved, d, d, Keep::second);
      choi_m += kron(slot_b, matrix_unit(d, i, j));
    }
  return kraus_from_choi(choi_m, d, d);
}

KrausChannel superposed_paths(const PathChannelSpec& spec) {
  const int d_in = spec.base.dim_in;
  const int d_out = spec.base.dim_out;
  const int k = spec.k;
  CMatrix f = spec.interference_operator();
  CMatrix sigma_diag = CMatrix::Zero(k, k);
  for (int j = 0; j < k; ++j) sigma_diag(j, j) = spec.sigma.matrix(j, j);
  CMatrix sigma_off = spec.sigma.matrix - sigma_diag;

  CMatrix choi_m = CMatrix::Zero(d_out * k * d_in, d_out * k * d_in);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j) {
      CMatrix e = matrix_unit(d_in, i, j);
      CMatrix out = kron(spec.base.apply(e), sigma_diag) +
                    kron(CMatrix(f * e * f.adjoint()), sigma_off);
      choi_m += kron(out, e);
    }
  return kraus_from_choi(choi_m, d_in, d_out * k);
}

KrausChannel complementary(const KrausChannel& ch) {
  const int r = static_cast<int>(ch.kraus.size());
  // Rows of the Stinespring isometry V|x> = sum_i |i> ⊗ K_i|x>, grouped by
  // the output index being traced out.
  std::vector<CMatrix> ops;
  ops.reserve(ch.dim_out);
  for (int b = 0; b < ch.dim_out; ++b) {
    CMatrix l = CMatrix::Zero(r, ch.dim_in);
    for (int i = 0; i < r; ++i) l.row(i) = ch.kraus[i].row(b);
    ops.push_back(std::move(l));
  }
  return KrausChannel(ch.dim_in, r, std::move(ops));
}

CMatrix choi(const KrausChannel& ch) {
  CMatrix out = CMatrix::Zero(ch.dim_out * ch.dim_in, ch.dim_out * ch.dim_in);
  for (int i = 0; i < ch.dim_in; ++i)
    for (int j = 0; j < ch.dim_in; ++j)
      out += kron(ch.apply(matrix_unit(ch.dim_in, i, j)),
                  matrix_unit(ch.dim_in, i, j));
  return out;
}

KrausChannel kraus_from_choi(const CMatrix& choi_matrix, int dim_in, int dim_out) {
  if (choi_matrix.rows() != static_cast<Eigen::Index>(dim_in) * dim_out)
    throw dimension_error("kraus_from_choi: Choi size does not match dims");
  HermEig eig = herm_eig(choi_matrix);
  if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -kHermTol)
    throw validation_error("kraus_from_choi: Choi matrix is not PSD");
  std::vector<CMatrix> ops;
  for (int m = 0; m < eig.eigenvalues.size(); ++m) {
    double l = eig.eigenvalues(m);
    if (l <= 1e-12) continue;  // rank truncation
    CMatrix k(dim_out, dim_in);
    for (int b = 0; b < dim_out; ++b)
      for (int a = 0; a < dim_in; ++a)
        k(b, a) = std::sqrt(l) * eig.eigenvectors(b * dim_in + a, m);
    ops.push_back(std::move(k));
  }
  return KrausChannel(dim_in, dim_out, std::move(ops));
}

KrausChannel compose(const KrausChannel& f, const KrausChannel& g) {
  if (g.dim_out != f.dim_in)
    throw dimension_error("compose: inner dims do not match");
  std::vector<CMatrix> ops;
  ops.reserve(f.kraus.size() * g.kraus.size());
  for (const CMatrix& kf : f.kraus)
    for (const CMatrix& kg : g.kraus) ops.push_back(kf * kg);
  return KrausChannel(g.dim_in, f.dim_out, std::move(ops));
}

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<CMatrix> ops;
  ops.reserve(a.kraus.size() * b.kraus.size());
  for (const CMatrix& ka : a.kraus)
    for (const CMatrix& kb : b.kraus) ops.push_back(kron(ka, kb));
  return KrausChannel(a.dim_in * b.dim_in, a.dim_out * b.dim_out, std::move(ops));
}

KrausChannel conditional_slice(const BipartiteChannel& bip,
                               const DensityMatrix& sigma) {
  if (sigma.dim() != bip.dim_k)
    throw dimension_error("conditional_slice: sigma dimension must equal dim_k");
  HermEig eig = herm_eig(sigma.matrix);
  std::vector<CMatrix> ops;
  for (int m = 0; m < bip.dim_k; ++m) {
    double l = eig.eigenvalues(m);
    if (l <= 1e-14) continue;
    // Injection |x> -> |x> ⊗ |v_m> as a (dim_a*dim_k) x dim_a matrix.
    CMatrix inj = CMatrix::Zero(bip.dim_a * bip.dim_k, bip.dim_a);
    for (int x = 0; x < bip.dim_a; ++x)
      for (int y = 0; y < bip.dim_k; ++y)
        inj(x * bip.dim_k + y, x) = eig.eigenvectors(y, m);
    for (const CMatrix& k : bip.inner.kraus)
      ops.push_back(CMatrix(std::sqrt(l) * k * inj));
  }
  return KrausChannel(bip.dim_a, bip.dim_b, std::move(ops));
}

// ---------------------------------------------------------------------------
// Stock channels
// ---------------------------------------------------------------------------

KrausChannel identity_channel(int d) {
  return KrausChannel(d, d, {CMatrix::Identity(d, d)});
}

KrausChannel depolarizing_channel(int d, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw validation_error("depolarizing_channel: lambda must lie in [0, 1]");
  std::vector<CMatrix> ops;
  if (lambda < 1.0)
    ops.push_back(CMatrix(std::sqrt(1.0 - lambda) * CMatrix::Identity(d, d)));
  if (lambda > 0.0) {
    double w = std::sqrt(lambda / d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CMatrix k = CMatrix::Zero(d, d);
        k(i, j) = Complex(w, 0);
        ops.push_back(std::move(k));
      }
  }
  return KrausChannel(d, d, std::move(ops));
}

KrausChannel pauli_depolarizing(int qubits) {
  CMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  std::vector<CMatrix> ops = {CMatrix(identity(2) / 2.0), CMatrix(x / 2.0),
                              CMatrix(y / 2.0), CMatrix(z / 2.0)};
  KrausChannel single(2, 2, ops);
  KrausChannel out = single;
  for (int i = 1; i < qubits; ++i) out = tensor(out, single);
  return out;
}

KrausChannel discard_reprepare(int dim_in, const DensityMatrix& sigma) {
  HermEig eig = herm_eig(sigma.matrix);
  std::vector<CMatrix> ops;
  for (int m = 0; m < sigma.dim(); ++m) {
    double l = eig.eigenvalues(m);
    if (l <= 1e-14) continue;
    for (int a = 0; a < dim_in; ++a) {
      CMatrix k = CMatrix::Zero(sigma.dim(), dim_in);
      k.col(a) = std::sqrt(l) * eig.eigenvectors.col(m);
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(dim_in, sigma.dim(), std::move(ops));
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

double choi_distance(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out)
    throw dimension_error("choi_distance: channel dims differ");
  return max_abs(CMatrix(choi(a) - choi(b)));
}

bool is_trace_preserving(const KrausChannel& ch, double tol) {
  CMatrix sum = CMatrix::Zero(ch.dim_in, ch.dim_in);
  for (const CMatrix& k : ch.kraus) sum += k.adjoint() * k;
  return max_abs(CMatrix(sum - CMatrix::Identity(ch.dim_in, ch.dim_in))) <= tol;
}

bool is_discard_reprepare(const KrausChannel& ch, double tol) {
  CMatrix fixed = ch.apply(CMatrix(CMatrix::Identity(ch.dim_in, ch.dim_in) /
                                   static_cast<double>(ch.dim_in)));
  CMatrix expected =
      kron(fixed, CMatrix(CMatrix::Identity(ch.dim_in, ch.dim_in)));
  return max_abs(CMatrix(choi(ch) - expected)) <= tol;
}

}  // namespace cekit

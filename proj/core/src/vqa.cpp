/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cekit/vqa.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

namespace cekit {

namespace {

bool is_power_of_two(int x) { return x >= 1 && (x & (x - 1)) == 0; }

int log2_exact(int x) {
  int k = 0;
  while ((1 << k) < x) ++k;
  return k;
}

CMatrix euler_rotation(double a, double b, double c) {
  auto rz = [](double t) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = Complex(std::cos(t / 2), -std::sin(t / 2));
    m(1, 1) = Complex(std::cos(t / 2), std::sin(t / 2));
    return m;
  };
  CMatrix ry = CMatrix::Zero(2, 2);
  ry(0, 0) = Complex(std::cos(b / 2), 0);
  ry(0, 1) = Complex(-std::sin(b / 2), 0);
  ry(1, 0) = Complex(std::sin(b / 2), 0);
  ry(1, 1) = Complex(std::cos(b / 2), 0);
  return rz(a) * ry * rz(c);
}

// CNOT on k qubits, qubit 0 most significant.
CMatrix cnot_matrix(int k, int control, int target) {
  const int dim = 1 << k;
  CMatrix m = CMatrix::Zero(dim, dim);
  const int cbit = 1 << (k - 1 - control);
  const int tbit = 1 << (k - 1 - target);
  for (int n = 0; n < dim; ++n) {
    int out = (n & cbit) ? (n ^ tbit) : n;
    m(out, n) = Complex(1, 0);
  }
  return m;
}

// Zero-pad a d x d matrix into the top-left block of a dim x dim matrix.
CMatrix pad_matrix(const CMatrix& m, int dim) {
  if (m.rows() == dim) return m;
  CMatrix out = CMatrix::Zero(dim, dim);
  out.block(0, 0, m.rows(), m.cols()) = m;
  return out;
}

}  // namespace

AnsatzParams::AnsatzParams(int k, int l)
    : qubits(k), layers(l),
      angles(static_cast<size_t>(k) * static_cast<size_t>(l) * 3, 0.0) {
  if (k < 1 || l < 1)
    throw dimension_error("AnsatzParams: qubits and layers must be >= 1");
}

double& AnsatzParams::angle(int layer, int qubit, int euler) {
  return angles[(static_cast<size_t>(layer) * qubits + qubit) * 3 + euler];
}

double AnsatzParams::angle(int layer, int qubit, int euler) const {
  return angles[(static_cast<size_t>(layer) * qubits + qubit) * 3 + euler];
}

CMatrix ansatz_unitary(const AnsatzParams& params) {
  const int k = params.qubits;
  const int dim = 1 << k;
  CMatrix u = CMatrix::Identity(dim, dim);
  for (int l = 0; l < params.layers; ++l) {
    CMatrix rot = euler_rotation(params.angle(l, 0, 0), params.angle(l, 0, 1),
                                 params.angle(l, 0, 2));
    for (int q = 1; q < k; ++q)
      rot = kron(rot, euler_rotation(params.angle(l, q, 0), params.angle(l, q, 1),
                                     params.angle(l, q, 2)));
    u = rot * u;
    const int dist = (l + 1) % k;
    if (dist != 0) {
      for (int i = 0; i < k; ++i) u = cnot_matrix(k, i, (i + dist) % k) * u;
    }
  }
  return u;
}

std::pair<PureState, PureState> prepare_pair(const AnsatzParams& w1) {
  CMatrix u = ansatz_unitary(w1);
  const int dim = static_cast<int>(u.rows());
  return {PureState::normalized(u.col(0)), PureState::normalized(u.col(dim - 1))};
}

std::pair<CMatrix, CMatrix> naimark_measurement(const AnsatzParams& w2) {
  if (w2.qubits < 2)
    throw dimension_error("naimark_measurement: needs data qubits plus ancilla");
  const int dim_meas = 1 << w2.qubits;
  const int dim = dim_meas / 2;  // data register
  CMatrix u = ansatz_unitary(w2);
  // Columns of U over the ancilla-|0> sector, split by the measured ancilla
  // value: P_j = W_j† W_j with W_j = (I ⊗ <j|) U (I ⊗ |0>).
  CMatrix w0(dim, dim), w1(dim, dim);
  for (int col = 0; col < dim; ++col)
    for (int row = 0; row < dim; ++row) {
      w0(row, col) = u(row * 2 + 0, col * 2);
      w1(row, col) = u(row * 2 + 1, col * 2);
    }
  return {CMatrix(w0.adjoint() * w0), CMatrix(w1.adjoint() * w1)};
}

double objective(const KrausChannel& ch, const AnsatzParams& w1,
                 const AnsatzParams& w2) {
  if (!is_power_of_two(ch.dim_in))
    throw dimension_error("vqa objective: channel input must be 2^k dimensional");
  if ((1 << w1.qubits) != ch.dim_in)
    throw dimension_error("vqa objective: state ansatz size mismatch");
  const int m = log2_exact(ch.dim_out);
  if (w2.qubits != m + 1)
    throw dimension_error("vqa objective: measurement ansatz size mismatch");

  auto [psi, psi_perp] = prepare_pair(w1);
  CMatrix delta = ch.apply(psi.projector()) - ch.apply(psi_perp.projector());
  CMatrix padded = pad_matrix(delta, 1 << m);
  auto [p0, p1] = naimark_measurement(w2);
  (void)p0;
  return (p1 * padded).trace().real();
}

VqaTrace run_vqa(const KrausChannel& ch, const VqaConfig& cfg) {
  if (!is_power_of_two(ch.dim_in))
    throw dimension_error("run_vqa: channel input must be 2^k dimensional");
  const int k = log2_exact(ch.dim_in);
  const int m = log2_exact(ch.dim_out);
  const int dim_out_padded = 1 << m;

  const auto t0 = std::chrono::steady_clock::now();

  AnsatzParams w1(k, cfg.layers_state);
  AnsatzParams w2(m + 1, cfg.layers_meas);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uangle(0.0, 2.0 * M_PI);
  for (double& a : w1.angles) a = uangle(rng);
  for (double& a : w2.angles) a = uangle(rng);

  // Objective through cached halves: with the measurement fixed, the state
  // side only needs the pulled-back observable M = N†(P1); with the states
  // fixed, the measurement side only needs the padded output difference.
  auto state_side = [&](const AnsatzParams& w, const CMatrix& mback) {
    CMatrix u = ansatz_unitary(w);
    CVector psi = u.col(0), pp = u.col((1 << k) - 1);
    Complex a = psi.adjoint() * (mback * psi);
    Complex b = pp.adjoint() * (mback * pp);
    return a.real() - b.real();
  };
  auto meas_side = [&](const AnsatzParams& w, const CMatrix& padded_delta) {
    auto [p0, p1] = naimark_measurement(w);
    (void)p0;
    return (p1 * padded_delta).trace().real();
  };

  auto pull_back = [&](const AnsatzParams& wm) {
    auto [p0, p1] = naimark_measurement(wm);
    (void)p0;
    CMatrix q = p1.block(0, 0, ch.dim_out, ch.dim_out);
    return ch.apply_adjoint(q);
  };
  auto out_delta = [&](const AnsatzParams& ws) {
    CMatrix u = ansatz_unitary(ws);
    CVector psi = u.col(0), pp = u.col((1 << k) - 1);
    CMatrix delta = ch.apply(CMatrix(psi * psi.adjoint())) -
                    ch.apply(CMatrix(pp * pp.adjoint()));
    return pad_matrix(delta, dim_out_padded);
  };

  const size_t n1 = w1.angles.size();
  const size_t n2 = w2.angles.size();
  std::vector<double> grad(n1 + n2, 0.0);
  std::vector<double> adam_m(n1 + n2, 0.0), adam_v(n1 + n2, 0.0);
  const double shift =
      cfg.grad_mode == GradMode::parameter_shift ? M_PI / 2 : cfg.fd_step;

  VqaTrace trace{{}, w1, w2, 0.0, false, 0.0};
  double best = -std::numeric_limits<double>::infinity();
  double prev_obj = std::numeric_limits<double>::quiet_NaN();

  for (int it = 0; it < cfg.max_iters; ++it) {
    CMatrix mback = pull_back(w2);
    CMatrix pdelta = out_delta(w1);
    double obj = state_side(w1, mback);
    trace.objective_trace.push_back(obj);
    if (obj > best) {
      best = obj;
      trace.w1 = w1;
      trace.w2 = w2;
    }
    if (!std::isnan(prev_obj) && std::abs(obj - prev_obj) < cfg.stall_eps) {
      trace.converged = true;
      break;
    }
    prev_obj = obj;

    for (size_t i = 0; i < n1; ++i) {
      double saved = w1.angles[i];
      w1.angles[i] = saved + shift;
      double fp = state_side(w1, mback);
      w1.angles[i] = saved - shift;
      double fm = state_side(w1, mback);
      w1.angles[i] = saved;
      grad[i] = cfg.grad_mode == GradMode::parameter_shift
                    ? (fp - fm) / 2.0
                    : (fp - fm) / (2.0 * shift);
    }
    for (size_t i = 0; i < n2; ++i) {
      double saved = w2.angles[i];
      w2.angles[i] = saved + shift;
      double fp = meas_side(w2, pdelta);
      w2.angles[i] = saved - shift;
      double fm = meas_side(w2, pdelta);
      w2.angles[i] = saved;
      grad[n1 + i] = cfg.grad_mode == GradMode::parameter_shift
                         ? (fp - fm) / 2.0
                         : (fp - fm) / (2.0 * shift);
    }

    if (cfg.adaptive) {
      const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
      double corr1 = 1.0 - std::pow(b1, it + 1);
      double corr2 = 1.0 - std::pow(b2, it + 1);
      for (size_t i = 0; i < grad.size(); ++i) {
        adam_m[i] = b1 * adam_m[i] + (1 - b1) * grad[i];
        adam_v[i] = b2 * adam_v[i] + (1 - b2) * grad[i] * grad[i];
        double step = cfg.learning_rate * (adam_m[i] / corr1) /
                      (std::sqrt(adam_v[i] / corr2) + eps);
        if (i < n1)
          w1.angles[i] += step;
        else
          w2.angles[i - n1] += step;
      }
    } else {
      for (size_t i = 0; i < n1; ++i) w1.angles[i] += cfg.learning_rate * grad[i];
      for (size_t i = 0; i < n2; ++i)
        w2.angles[i] += cfg.learning_rate * grad[n1 + i];
    }
  }

  trace.estimate = std::max(0.0, best);
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return trace;
}

CMatrix povm_dilation_unitary(const CMatrix& q0, const CMatrix& q1) {
  const int d = static_cast<int>(q0.rows());
  if (q1.rows() != d || q0.cols() != d || q1.cols() != d)
    throw dimension_error("povm_dilation_unitary: operator shapes differ");
  if (max_abs(CMatrix(q0 + q1 - CMatrix::Identity(d, d))) > kHermTol)
    throw validation_error("povm_dilation_unitary: Q0 + Q1 must equal I");
  CMatrix s0 = herm_sqrt_psd(q0);
  CMatrix s1 = herm_sqrt_psd(q1);

  const int dim = 2 * d;
  CMatrix u = CMatrix::Zero(dim, dim);
  // Columns over the ancilla-|0> sector carry the isometry
  // V = sqrt(Q0) ⊗ |0> + sqrt(Q1) ⊗ |1>.
  for (int col = 0; col < d; ++col)
    for (int row = 0; row < d; ++row) {
      u(row * 2 + 0, col * 2) = s0(row, col);
      u(row * 2 + 1, col * 2) = s1(row, col);
    }
  // Complete the remaining columns by Gram-Schmidt over the standard basis.
  int placed = 0;
  for (int cand = 0; cand < dim && placed < d; ++cand) {
    CVector v = basis_state(dim, cand);
    for (int col = 0; col < d; ++col) {
      CVector existing = u.col(col * 2);
      v -= CVector(existing * (existing.adjoint() * v));
    }
    for (int j = 0; j < placed; ++j) {
      CVector existing = u.col(j * 2 + 1);
      v -= CVector(existing * (existing.adjoint() * v));
    }
    if (v.norm() > 1e-8) {
      u.col(placed * 2 + 1) = v / v.norm();
      ++placed;
    }
  }
  if (placed != d)
    throw std::runtime_error("povm_dilation_unitary: column completion failed");
  return u;
}

}  // namespace cekit

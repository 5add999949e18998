/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CEKIT_VQA_HPP_
#define CEKIT_VQA_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "cekit/channels.hpp"

namespace cekit {

// Layered hardware-efficient circuit: per layer, an Euler triple on every
// qubit followed by a ring of CNOTs whose control-target distance equals the
// layer index (mod qubit count).
struct AnsatzParams {
  int qubits;
  int layers;
  std::vector<double> angles;  // [layer][qubit][3], flattened

  AnsatzParams(int k, int l);
  double& angle(int layer, int qubit, int euler);
  double angle(int layer, int qubit, int euler) const;
};

// Full 2^k x 2^k unitary of the circuit.  Qubit 0 holds the most significant
// bit; layer rotations are Rz(a) Ry(b) Rz(c).
CMatrix ansatz_unitary(const AnsatzParams& params);

// psi = U(w1)|0...0>, psi_perp = U(w1)|1...1>; orthogonal by unitarity.
std::pair<PureState, PureState> prepare_pair(const AnsatzParams& w1);

// Two-outcome POVM realized by a (k+1)-qubit unitary acting on the k data
// qubits plus an ancilla prepared in |0> and measured in the computational
// basis: P_j = (I ⊗ <0|) U† (I ⊗ |j><j|) U (I ⊗ |0>).
std::pair<CMatrix, CMatrix> naimark_measurement(const AnsatzParams& w2);

// Objective Tr[P1 N(psi)] - Tr[P1 N(psi_perp)]: half the total variation
// distance of the measured output distributions, and therefore a lower bound
// on CE_max for every parameter choice.  Channels whose output dimension is
// not a power of two are padded into the next power.
double objective(const KrausChannel& ch, const AnsatzParams& w1,
                 const AnsatzParams& w2);

enum class GradMode { central_difference, parameter_shift };

struct VqaConfig {
  int layers_state = 2;
  int layers_meas = 2;
  double learning_rate = 0.05;
  double stall_eps = 1e-5;
  int max_iters = 2000;
  GradMode grad_mode = GradMode::central_difference;
  double fd_step = 1e-4;
  bool adaptive = false;  // adaptive-moment update instead of plain ascent
  std::uint64_t seed = 0;
};

struct VqaTrace {
  std::vector<double> objective_trace;  // one value per iteration
  AnsatzParams w1;
  AnsatzParams w2;
  double estimate = 0.0;  // best objective seen; certified CE_max lower bound
  bool converged = false;
  double wall_seconds = 0.0;
};

// Joint gradient ascent on (w1, w2); terminates when the objective change
// drops below stall_eps or the iteration cap is reached.
VqaTrace run_vqa(const KrausChannel& ch, const VqaConfig& cfg = {});

// Naimark dilation of an arbitrary two-outcome POVM {Q0, Q1}: the isometry
// V = sqrt(Q0) ⊗ |0> + sqrt(Q1) ⊗ |1> extended to a unitary by column
// completion, so that measuring the ancilla reproduces Tr[Q_j rho].
CMatrix povm_dilation_unitary(const CMatrix& q0, const CMatrix& q1);

}  // namespace cekit

#endif  // CEKIT_VQA_HPP_

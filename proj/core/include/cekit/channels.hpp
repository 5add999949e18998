/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CEKIT_CHANNELS_HPP_
#define CEKIT_CHANNELS_HPP_

#include <vector>

#include "cekit/linalg.hpp"
#include "cekit/types.hpp"

namespace cekit {

// ---------------------------------------------------------------------------
// Channel representations
// ---------------------------------------------------------------------------

// CPTP map as a list of Kraus operators K_i (each dim_out x dim_in) with
// sum_i K_i† K_i = I within 1e-8.  Immutable after construction.
struct KrausChannel {
  int dim_in;
  int dim_out;
  std::vector<CMatrix> kraus;

  KrausChannel(int d_in, int d_out, std::vector<CMatrix> ops);

  // N(m) = sum_i K_i m K_i†, extended linearly to arbitrary matrices.
  CMatrix apply(const CMatrix& m) const;

  // Adjoint map N†(x) = sum_i K_i† x K_i (maps observables backwards).
  CMatrix apply_adjoint(const CMatrix& x) const;
};

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);

// Column-stochastic matrix q(b|a): q(b, a) >= 0, columns sum to 1.
struct StochasticChannel {
  int n_in;
  int n_out;
  RMatrix q;  // q(b, a), n_out rows by n_in columns

  StochasticChannel(int in, int out, RMatrix probs);
};

// Base channel plus vacuum amplitudes and a path state: the data of a
// coherent superposition of k identical noisy paths.
struct PathChannelSpec {
  KrausChannel base;
  CVector gammas;  // vacuum amplitudes, sum |gamma_i|^2 = 1, one per Kraus op
  int k;           // number of paths, >= 2
  DensityMatrix sigma;  // path state, dim k

  PathChannelSpec(KrausChannel base_ch, CVector vacuum_amplitudes, int paths,
                  DensityMatrix path_state);

  // Interference operator F = sum_i conj(gamma_i) C_i.
  CMatrix interference_operator() const;
};

// Two-input process N : St(A ⊗ K) -> St(B).
struct BipartiteChannel {
  int dim_a;
  int dim_k;
  int dim_b;
  KrausChannel inner;  // dim_in = dim_a * dim_k, dim_out = dim_b

  BipartiteChannel(int d_a, int d_k, KrausChannel channel);
};

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

// Classical-to-classical embedding: N(rho) = sum_{a,b} q(b|a) <a|rho|a> |b><b|
// with Kraus set { sqrt(q(b|a)) |b><a| }.
KrausChannel embed_classical(const StochasticChannel& q);

// Classical-to-quantum form: N(rho) = sum_a <a|rho|a> rho_a.
KrausChannel classical_to_quantum(const std::vector<DensityMatrix>& repreps);

// Partial swap: N(rho) = Tr_L[ U_theta (rho ⊗ sigma) U_theta† ] with
// U_theta = cos(theta) I + i sin(theta) SWAP; the output system is the slot
// initially holding sigma, the other slot is discarded.
KrausChannel partial_swap_channel(int d, double theta,
                                  const DensityMatrix& sigma_lambda);

// Same channel evaluated directly through the commutator identity
// N(M) = cos^2 Tr[M] sigma + sin^2 M - i sin cos [sigma, M]; used as the
// independent route when cross-checking the Kraus construction.
CMatrix partial_swap_action(int d, double theta, const CMatrix& sigma_lambda,
                            const CMatrix& m);

// Effective channel of a superposition of k paths:
// N_sigma(rho) = C(rho) ⊗ sigma_diag + F rho F† ⊗ sigma_offdiag,
// from dim_in to dim_out * k (internal factor first, path factor second).
KrausChannel superposed_paths(const PathChannelSpec& spec);

// Complementary channel N^c(rho) = sum_ij Tr[K_i rho K_j†] |i><j| on an
// environment of dimension = number of Kraus operators.
KrausChannel complementary(const KrausChannel& ch);

// Choi matrix sum_ij N(E_ij) ⊗ E_ij (output factor first); trace = dim_in.
CMatrix choi(const KrausChannel& ch);

// Inverse of choi(): eigendecomposition with rank truncation at 1e-12.
// Throws validation_error if the matrix is not PSD within tolerance.
KrausChannel kraus_from_choi(const CMatrix& choi_matrix, int dim_in, int dim_out);

// compose(f, g): rho -> f(g(rho)); Kraus set { F_i G_j }.
KrausChannel compose(const KrausChannel& f, const KrausChannel& g);

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b);

// Effective single-input channel N_sigma(rho) = N(rho ⊗ sigma).
KrausChannel conditional_slice(const BipartiteChannel& bip,
                               const DensityMatrix& sigma);

// ---------------------------------------------------------------------------
// Stock channels
// ---------------------------------------------------------------------------

KrausChannel identity_channel(int d);

// N(rho) = (1 - lambda) rho + lambda Tr[rho] I/d.  lambda = 1 is the
// completely depolarizing channel.
KrausChannel depolarizing_channel(int d, double lambda);

// Completely depolarizing qubit with the Pauli Kraus set (I, X, Y, Z)/2,
// tensored per qubit; the representation the interference benchmarks fix.
KrausChannel pauli_depolarizing(int qubits = 1);

// Constant channel rho -> sigma Tr[rho].
KrausChannel discard_reprepare(int dim_in, const DensityMatrix& sigma);

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

// Channel equality is Choi-matrix distance (Kraus lists are gauge-dependent).
double choi_distance(const KrausChannel& a, const KrausChannel& b);

bool is_trace_preserving(const KrausChannel& ch, double tol = kHermTol);

// True when the Choi matrix has the product form sigma ⊗ I, i.e. the channel
// is constant; equivalent to CE_max = 0 by faithfulness.
bool is_discard_reprepare(const KrausChannel& ch, double tol = kHermTol);

}  // namespace cekit

#endif  // CEKIT_CHANNELS_HPP_

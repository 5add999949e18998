// Shared helpers for the test suites: random channel generation and the
// brute-force qubit oracles the solver results are checked against.  These
// stay independent of the solver code paths they certify.

#ifndef CEKIT_TESTS_TEST_SUPPORT_HPP_
#define CEKIT_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <random>
#include <vector>

#include "cekit/channels.hpp"
#include "cekit/linalg.hpp"

namespace cekit_tests {

using namespace cekit;

// Random CPTP channel from a Haar-random Stinespring isometry with
// environment dimension `rank`.
inline KrausChannel random_channel(int d, int rank, std::uint64_t seed) {
  CMatrix u = haar_unitary(d * rank, seed);
  std::vector<CMatrix> ops;
  for (int e = 0; e < rank; ++e) {
    CMatrix k(d, d);
    // K_e = (I ⊗ <e|) U (I ⊗ |0>), environment fastest index.
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) k(r, c) = u(r * rank + e, c * rank + 0);
    ops.push_back(std::move(k));
  }
  return KrausChannel(d, d, std::move(ops));
}

inline CVector bloch_state(double nx, double ny, double nz) {
  double theta = std::acos(std::clamp(nz, -1.0, 1.0));
  double phi = std::atan2(ny, nx);
  CVector v(2);
  v << std::cos(theta / 2),
      Complex(std::cos(phi), std::sin(phi)) * std::sin(theta / 2);
  return v;
}

// Deterministic Fibonacci-sphere axes.
inline std::vector<std::array<double, 3>> fibonacci_axes(int n) {
  std::vector<std::array<double, 3>> axes;
  axes.reserve(static_cast<size_t>(n));
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double a = golden * i;
    axes.push_back({r * std::cos(a), r * std::sin(a), z});
  }
  return axes;
}

inline double pair_value(const KrausChannel& ch, const CVector& psi,
                         const CVector& pp) {
  CMatrix delta = ch.apply(CMatrix(psi * psi.adjoint())) -
                  ch.apply(CMatrix(pp * pp.adjoint()));
  return trace_norm(delta) / 2.0;
}

// Exhaustive antipodal Bloch-pair scans (qubit channels only).
inline double bloch_grid_ce_max(const KrausChannel& ch, int n_axes) {
  double best = 0.0;
  for (const auto& n : fibonacci_axes(n_axes)) {
    CVector psi = bloch_state(n[0], n[1], n[2]);
    CVector pp = bloch_state(-n[0], -n[1], -n[2]);
    best = std::max(best, pair_value(ch, psi, pp));
  }
  return best;
}

inline double bloch_grid_ce_min(const KrausChannel& ch, int n_axes) {
  double best = 2.0;
  for (const auto& n : fibonacci_axes(n_axes)) {
    CVector psi = bloch_state(n[0], n[1], n[2]);
    CVector pp = bloch_state(-n[0], -n[1], -n[2]);
    best = std::min(best, pair_value(ch, psi, pp));
  }
  return best;
}

// Channel application through the Choi matrix: the independent route used to
// certify KrausChannel::apply.
inline CMatrix choi_apply(const CMatrix& choi_m, int d_in, int d_out,
                          const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(d_out, d_out);
  for (int b = 0; b < d_out; ++b)
    for (int b2 = 0; b2 < d_out; ++b2)
      for (int a = 0; a < d_in; ++a)
        for (int a2 = 0; a2 < d_in; ++a2)
          out(b, b2) += choi_m(b * d_in + a, b2 * d_in + a2) * rho(a, a2);
  return out;
}

// Amplitude damping qubit channel.
inline KrausChannel amplitude_damping(double gamma) {
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel(2, 2, {k0, k1});
}

// The two-bit-to-one-bit process of the mixed-state witness example.
inline StochasticChannel two_bit_example() {
  RMatrix q(2, 4);
  q << 1.0, 1.0 / 3.0, 2.0 / 3.0, 0.0,
       0.0, 2.0 / 3.0, 1.0 / 3.0, 1.0;
  return StochasticChannel(4, 2, q);
}

// Quantum one-time pad: two classical key bits select a Pauli X^k1 Z^k2
// applied to the data qubit.
inline BipartiteChannel quantum_one_time_pad() {
  CMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  std::vector<CMatrix> paulis = {identity(2), x, CMatrix(x * z), z};
  std::vector<CMatrix> ops;
  for (int k = 0; k < 4; ++k) {
    // Kraus (P_k ⊗ <k|): applies P_k when the key register holds |k>.
    CMatrix op = CMatrix::Zero(2, 8);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) op(r, c * 4 + k) = paulis[static_cast<size_t>(k)](r, c);
    ops.push_back(std::move(op));
  }
  return BipartiteChannel(2, 4, KrausChannel(8, 2, std::move(ops)));
}

// Classical XOR one-time pad (single key bit), kept for the slice checks.
inline BipartiteChannel classical_one_time_pad() {
  RMatrix q = RMatrix::Zero(2, 4);
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < 2; ++k) q(a ^ k, a * 2 + k) = 1.0;
  return BipartiteChannel(2, 2, embed_classical(StochasticChannel(4, 2, q)));
}

}  // namespace cekit_tests

#endif  // CEKIT_TESTS_TEST_SUPPORT_HPP_

/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CEKIT_CAUSE_HPP_
#define CEKIT_CAUSE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cekit/channels.hpp"

namespace cekit {

// ---------------------------------------------------------------------------
// Solver configuration and reports
// ---------------------------------------------------------------------------

struct SolverConfig {
  int restarts = 32;
  int max_iters = 500;
  double tol = 1e-9;   // objective stall threshold
  int p_grid = 101;    // grid for the DP_min probability scan
  // Rank splits for the CE_min mixed-state search; empty means all 1..d-1.
  std::optional<std::vector<int>> rank_splits;
  std::uint64_t seed = 0;
};

// Output of the CE solvers: a certified value with the achieving state pair
// and the optimal two-outcome observable 2P - I for that pair.
struct CEReport {
  double value = 0.0;
  DensityMatrix witness_rho;
  DensityMatrix witness_rho_perp;
  CMatrix certificate;
  int restarts = 0;
  std::vector<int> iterations_per_restart;
  bool converged = false;
  std::uint64_t seed = 0;
  // Per-iteration objective of the winning restart (see-saw solvers only);
  // monotone non-decreasing by construction.
  std::vector<double> objective_trace;
};

// ---------------------------------------------------------------------------
// Causal-effect solvers
// ---------------------------------------------------------------------------

// Certified lower bound on CE_max by see-saw ascent over orthogonal pure
// pairs: alternate the closed-form optimal measurement (sign of the output
// difference) with the closed-form optimal pair (extreme eigenvectors of the
// pulled-back observable).  The objective is monotone within each restart.
CEReport ce_max(const KrausChannel& ch, const SolverConfig& cfg = {});

// Certified upper bound on CE_min over orthogonal-support density matrices:
// Nelder-Mead over a unitary support split and per-block factors, one search
// per rank split, plus deterministic structured starts (basis, Fourier,
// bipartition mixtures).  Qubit inputs reduce to antipodal pure pairs.
CEReport ce_min(const KrausChannel& ch, const SolverConfig& cfg = {});

// Minimum distinguishability preservation:
// min over p and orthogonal-support pairs of || p N(rho) - (1-p) N(rho') ||_1.
double dp_min(const KrausChannel& ch, const SolverConfig& cfg = {});

// Weighted variants at a fixed prior p: best/worst ratio
// || p N(rho) - (1-p) N(rho') ||_1 / || p rho - (1-p) rho' ||_1.
double ce_weighted_max(const KrausChannel& ch, double p,
                       const SolverConfig& cfg = {});
double ce_weighted_min(const KrausChannel& ch, double p,
                       const SolverConfig& cfg = {});

// Monte-Carlo average of || N(psi) - N(psi_perp) ||_1 / 2 over Haar-random
// orthogonal pure pairs (the unitarily invariant pair distribution).
struct PiAverage {
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;
};
PiAverage ce_pi_average(const KrausChannel& ch, int samples, std::uint64_t seed);

// Conditional causal effects for a two-input process N : St(A ⊗ K) -> St(B).
// Mode "x|y": causal-effect type x computed on the slice N_sigma, combined
// with the y-optimization (max = sup, min = inf) over sigma on K.
// one-time-pad: max|min = 0 (worst-case key hides the input),
//               min|max = 1 (best-case key reveals it).
struct ConditionalMode {
  enum class Effect { max, min } effect = Effect::max;
  enum class OverSigma { max, min } over_sigma = OverSigma::max;
};
ConditionalMode parse_conditional_mode(const std::string& text);
double conditional_ce(const BipartiteChannel& bip, ConditionalMode mode,
                      const SolverConfig& cfg = {});

// ---------------------------------------------------------------------------
// Classical channel quantities
// ---------------------------------------------------------------------------

// Exact ACE: max over input value pairs of half the total variation distance
// of the output columns (finite enumeration).
double classical_ace(const StochasticChannel& q);

// Single-letter classical-capacity lower bound 1 - h2((1 - CE_max)/2).
double capacity_lower_bound(double ce_max_value);

// ---------------------------------------------------------------------------
// Recovery and duality
// ---------------------------------------------------------------------------

// Petz map R(x) = s^{1/2} N†( N(s)^{-1/2} x N(s)^{-1/2} ) s^{1/2} with
// s = reference.  A singular N(s) is pseudo-inverted at cutoff 1e-10 and
// flagged; completion operators keep the result trace preserving.
struct PetzRecovery {
  KrausChannel channel;
  bool pseudo_inverted = false;
};
PetzRecovery petz_recovery(const KrausChannel& ch, const DensityMatrix& reference);
PetzRecovery petz_recovery(const KrausChannel& ch);  // reference = I/d

struct CorrectabilityReport {
  double ce_min = 0.0;
  double dp_min = 0.0;
  double recovery_error = 0.0;  // max_rho || R(N(rho)) - rho ||_1 over probes
  double bound_rhs = 0.0;       // recoverability bound evaluated at dp_min
  bool converse_ok = false;     // dp_min >= 1 - 2 recovery_error - 1e-6
  bool bound_ok = false;        // recovery_error <= bound_rhs (one-sided check)
  bool pseudo_inverted = false;
};
CorrectabilityReport correctability_check(const KrausChannel& ch,
                                          const SolverConfig& cfg = {});

struct DualityReport {
  double ce_max_n = 0.0;
  double ce_min_nc = 0.0;
  double ce_min_n = 0.0;
  double ce_max_nc = 0.0;
  bool stmt1_ok = false;  // ce_min(N^c) >= 1 - 4 sqrt(d_A ce_max(N)) - slack
  bool stmt2_ok = false;  // ce_max(N^c) <= 2 sqrt(f(1 - ce_min(N), d_A)) + slack
};
DualityReport duality_check(const KrausChannel& ch, const SolverConfig& cfg = {},
                            double slack = 2e-3);

// ---------------------------------------------------------------------------
// Diamond-norm bounds for a channel difference
// ---------------------------------------------------------------------------

// lower: see-saw over entangled pure inputs of ||((A-B) ⊗ I)(Psi)||_1.
// upper: 2 d_A max_rho ||(A-B)(rho)||_1, inner max by see-saw.
struct DiamondBounds {
  double lower = 0.0;
  double upper = 0.0;
};
DiamondBounds diamond_bounds(const KrausChannel& a, const KrausChannel& b,
                             const SolverConfig& cfg = {});

}  // namespace cekit

#endif  // CEKIT_CAUSE_HPP_

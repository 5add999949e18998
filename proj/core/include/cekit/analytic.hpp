/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CEKIT_ANALYTIC_HPP_
#define CEKIT_ANALYTIC_HPP_

#include <utility>

#include "cekit/channels.hpp"

namespace cekit {

// Partial-swap setting: sigma_Lambda = (1-p) I/d + p |phi><phi|.
struct PartialSwapParams {
  int d;
  double theta;
  double p;
  PureState phi;

  PartialSwapParams(int dim, double angle, double purity, PureState phi_state);

  DensityMatrix sigma_lambda() const;
  KrausChannel channel() const;
};

// Closed-form maximum causal effect of the partial-swap channel:
// max over F in [0,1] of [sqrt(a^2 + F b^2)
//                         + sqrt(a^2 + F b^2 + 2|ab| sqrt(F(1-F)))]/2
// with a = sin^2(theta), b = p sin(theta) cos(theta).  Dense grid (1e4
// points) plus golden-section refinement to 1e-10.
struct PartialSwapCeMax {
  double value;
  double f_star;
  // The |ab| form is asserted tight only for theta <= pi/2; beyond that the
  // sign of b flips and tightness is not claimed.
  bool tightness_flagged;
};
PartialSwapCeMax partial_swap_ce_max(const PartialSwapParams& params);

// The pair achieving the closed form (requires d >= 3: the construction picks
// a direction orthogonal to both |xi> and |phi>).
std::pair<PureState, PureState> partial_swap_achieving_pair(
    const PartialSwapParams& params);

// Lower bound sin^2(theta) on the minimum causal effect of the partial swap.
double partial_swap_ce_min_bound(double theta);

// Sum of the two largest eigenvalues of a Hermitian PSD matrix.
double ky_fan_2(const CMatrix& m);

// Upper bound CE_max(base) + KyFan2(F†F) ||sigma_offdiag||_1 / 2 on the
// superposed-path channel; an equality when the base has CE_max = 0.
double superposition_ce_max_bound(const PathChannelSpec& spec, double ce_max_base);

// Trace norm of the off-diagonal part; at most 2(1 - 1/k), with equality for
// maximally coherent states.
double coherence_norm(const DensityMatrix& sigma);

// Lower bound min_eig(F†F) ||sigma_offdiag||_1 on CE_min of the superposed
// channel; requires the base channel to be discard-and-reprepare.
double superposition_ce_min_bound(const PathChannelSpec& spec);

}  // namespace cekit

#endif  // CEKIT_ANALYTIC_HPP_

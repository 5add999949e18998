/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cekit/analytic.hpp"

#include <cmath>
#include <functional>

namespace cekit {

namespace {

double golden_max_1d(const std::function<double(double)>& f, double lo, double hi,
                     double xtol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace

PartialSwapParams::PartialSwapParams(int dim, double angle, double purity,
                                     PureState phi_state)
    : d(dim), theta(angle), p(purity), phi(std::move(phi_state)) {
  check_dimension(d, "PartialSwapParams");
  if (p < 0.0 || p > 1.0)
    throw validation_error("PartialSwapParams: p must lie in [0, 1]");
  if (phi.dim() != d)
    throw dimension_error("PartialSwapParams: phi dimension must equal d");
}

DensityMatrix PartialSwapParams::sigma_lambda() const {
  CMatrix m = (1.0 - p) * CMatrix::Identity(d, d) / double(d) + p * phi.projector();
  return DensityMatrix(m);
}

KrausChannel PartialSwapParams::channel() const {
  return partial_swap_channel(d, theta, sigma_lambda());
}

PartialSwapCeMax partial_swap_ce_max(const PartialSwapParams& params) {
  const double a = std::sin(params.theta) * std::sin(params.theta);
  const double b = params.p * std::sin(params.theta) * std::cos(params.theta);
  auto g = [a, b](double f) {
    double base = a * a + f * b * b;
    return (std::sqrt(base) +
            std::sqrt(base + 2.0 * std::abs(a * b) * std::sqrt(f * (1.0 - f)))) /
           2.0;
  };

  PartialSwapCeMax out{0.0, 0.0, params.theta > M_PI / 2};
  if (std::abs(b) < 1e-15) {
    // F-independent objective; pick F = 1 so the achieving construction
    // stays well defined.
    out.f_star = 1.0;
    out.value = g(1.0);
    return out;
  }

  const int grid = 10000;
  double best_f = 0.0, best_v = -1.0;
  for (int i = 0; i <= grid; ++i) {
    double f = double(i) / grid;
    double v = g(f);
    if (v > best_v) {
      best_v = v;
      best_f = f;
    }
  }
  double h = 1.0 / grid;
  double refined = golden_max_1d(g, std::max(0.0, best_f - h),
                                 std::min(1.0, best_f + h), 1e-10);
  if (g(refined) > best_v) {
    best_v = g(refined);
    best_f = refined;
  }
  out.value = best_v;
  out.f_star = best_f;
  return out;
}

std::pair<PureState, PureState> partial_swap_achieving_pair(
    const PartialSwapParams& params) {
  if (params.d < 3)
    throw dimension_error(
        "partial_swap_achieving_pair: construction requires d >= 3");
  const int d = params.d;
  const CVector& phi = params.phi.amplitudes;
  double f_star = partial_swap_ce_max(params).f_star;

  // Fiducial direction orthogonal to phi: Gram-Schmidt on the first
  // computational basis vector not parallel to phi.
  CVector w;
  for (int i = 0; i < d; ++i) {
    CVector e = basis_state(d, i);
    CVector cand = e - CVector(phi * (phi.adjoint() * e));
    if (cand.norm() > 1e-6) {
      w = cand / cand.norm();
      break;
    }
  }

  // gamma with <gamma|phi> = sqrt(1 - F*), built in the phi-w plane;
  // xi = (phi - sqrt(1-F*) gamma)/sqrt(F*).
  double sf = std::sqrt(std::max(0.0, f_star));
  double cf = std::sqrt(std::max(0.0, 1.0 - f_star));
  if (sf < 1e-8) {
    // F* = 0 can only occur in degenerate settings; fall back to F* = 1,
    // which maximizes the same F-independent objective.
    sf = 1.0;
    cf = 0.0;
  }
  CVector xi = sf * phi - cf * w;

  // Third direction orthogonal to both xi and phi (equivalently to the
  // phi-w plane).
  CVector xi_perp;
  for (int i = 0; i < d; ++i) {
    CVector e = basis_state(d, i);
    CVector cand = e - CVector(phi * (phi.adjoint() * e)) - CVector(w * (w.adjoint() * e));
    if (cand.norm() > 1e-6) {
      xi_perp = cand / cand.norm();
      break;
    }
  }

  CVector psi = (xi + xi_perp) / std::sqrt(2.0);
  CVector psi_perp = (xi - xi_perp) / std::sqrt(2.0);
  return {PureState::normalized(psi), PureState::normalized(psi_perp)};
}

double partial_swap_ce_min_bound(double theta) {
  double s = std::sin(theta);
  return s * s;
}

double ky_fan_2(const CMatrix& m) {
  HermEig eig = herm_eig(m);
  if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -kHermTol)
    throw validation_error("ky_fan_2: matrix is not PSD within tolerance");
  double top = eig.eigenvalues(0);
  double second = eig.eigenvalues.size() > 1 ? eig.eigenvalues(1) : 0.0;
  return std::max(0.0, top) + std::max(0.0, second);
}

double superposition_ce_max_bound(const PathChannelSpec& spec, double ce_max_base) {
  CMatrix f = spec.interference_operator();
  return ce_max_base +
         ky_fan_2(CMatrix(f.adjoint() * f)) * coherence_norm(spec.sigma) / 2.0;
}

double coherence_norm(const DensityMatrix& sigma) {
  CMatrix off = sigma.matrix;
  for (int i = 0; i < sigma.dim(); ++i) off(i, i) = Complex(0, 0);
  return trace_norm(off);
}

double superposition_ce_min_bound(const PathChannelSpec& spec) {
  if (!is_discard_reprepare(spec.base))
    throw validation_error(
        "superposition_ce_min_bound: base channel must be discard-and-reprepare");
  CMatrix f = spec.interference_operator();
  HermEig eig = herm_eig(CMatrix(f.adjoint() * f));
  double min_eig = std::max(0.0, eig.eigenvalues(eig.eigenvalues.size() - 1));
  return min_eig * coherence_norm(spec.sigma);
}

}  // namespace cekit

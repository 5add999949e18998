/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CEKIT_TYPES_HPP_
#define CEKIT_TYPES_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cekit {

using Complex = std::complex<double>;

// Dense complex matrix, row-major storage.  Houses every operator in the
// library: channel Kraus operators, observables, unitaries, Choi matrices.
using CMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Shape or size mismatch (non-square input, incompatible channel dims, ...).
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A domain invariant failed (non-Hermitian, non-CPTP, bad stochastic matrix).
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A channel-spec document could not be parsed.
struct spec_parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tolerances and limits
// ---------------------------------------------------------------------------

inline constexpr double kHermTol = 1e-8;     // input-validation Hermiticity
inline constexpr double kStateTol = 1e-10;   // state normalization / PSD slack
inline constexpr double kStochasticTol = 1e-12;

// Dimensions are capped at the API level so a typo in a spec file cannot
// request an exponential-size problem.  Adjustable at runtime.
int max_dimension();
void set_max_dimension(int d);
void check_dimension(int d, const char* what);

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

// Unit vector in C^d.
struct PureState {
  CVector amplitudes;

  explicit PureState(CVector amps);
  int dim() const { return static_cast<int>(amplitudes.size()); }

  // |psi><psi|
  CMatrix projector() const;

  // Normalizes the given vector; rejects (near-)zero vectors.
  static PureState normalized(CVector amps);
};

// Trace-one positive semidefinite Hermitian matrix.
struct DensityMatrix {
  CMatrix matrix;

  explicit DensityMatrix(CMatrix m);
  int dim() const { return static_cast<int>(matrix.rows()); }

  static DensityMatrix pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int d);
};

}  // namespace cekit

#endif  // CEKIT_TYPES_HPP_

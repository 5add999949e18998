/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef CEKIT_LINALG_HPP_
#define CEKIT_LINALG_HPP_

#include <cstdint>
#include <utility>

#include "cekit/types.hpp"

namespace cekit {

// Which tensor factor partial_trace keeps.
enum class Keep { first, second };

struct HermEig {
  RVector eigenvalues;  // sorted descending
  CMatrix eigenvectors; // columns, matching order
};

// Hermitian eigendecomposition.  Validates Hermiticity to 1e-8, then
// symmetrizes (M + M†)/2 before solving so round-off never reaches the solver.
HermEig herm_eig(const CMatrix& m);

// Sum of singular values.  For Hermitian input this equals sum |eigenvalue|.
double trace_norm(const CMatrix& m);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Partial trace of a (d_a*d_b)x(d_a*d_b) matrix over one factor.
CMatrix partial_trace(const CMatrix& m, int dim_a, int dim_b, Keep keep);

// Haar-random d x d unitary / pure state.  Deterministic under the seed:
// QR of a complex Gaussian matrix with the R diagonal phase-corrected.
CMatrix haar_unitary(int d, std::uint64_t seed);
PureState haar_state(int d, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Small helpers shared across the library
// ---------------------------------------------------------------------------

CMatrix identity(int d);
CVector basis_state(int d, int index);

// Fourier basis vector |e_j> = sum_x exp(2 pi i j x / d) |x> / sqrt(d).
CVector fourier_state(int d, int j);

bool is_hermitian(const CMatrix& m, double tol = kHermTol);
double max_abs(const CMatrix& m);

// V diag(f(lambda)) V† for Hermitian input.
CMatrix herm_function(const CMatrix& m, double (*f)(double));

// Sign function sgn(M) = P_+ - P_- of a Hermitian matrix (eigenvalues map to
// -1, 0, +1); the optimal two-outcome observable for Tr[M X] at ||X||_inf<=1.
CMatrix herm_sign(const CMatrix& m);

// Principal square root of a Hermitian PSD matrix (small negative eigenvalues
// from round-off are clamped to zero).
CMatrix herm_sqrt_psd(const CMatrix& m);

// M^{-1/2} on the support of a Hermitian PSD matrix.  Eigenvalues below the
// cutoff are treated as zero; *pseudo_inverted reports whether any were.
CMatrix herm_inv_sqrt_psd(const CMatrix& m, double cutoff = 1e-10,
                          bool* pseudo_inverted = nullptr);

}  // namespace cekit

#endif  // CEKIT_LINALG_HPP_

/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cekit/linalg.hpp"

#include <atomic>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace cekit {

namespace {
std::atomic<int> g_max_dimension{64};
}

int max_dimension() { return g_max_dimension.load(); }
void set_max_dimension(int d) { g_max_dimension.store(d); }

void check_dimension(int d, const char* what) {
  if (d < 1) throw dimension_error(std::string(what) + ": dimension must be >= 1");
  if (d > max_dimension())
    throw dimension_error(std::string(what) + ": dimension " + std::to_string(d) +
                          " exceeds cap " + std::to_string(max_dimension()));
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

PureState::PureState(CVector amps) : amplitudes(std::move(amps)) {
  check_dimension(dim(), "PureState");
  double n = amplitudes.norm();
  if (std::abs(n - 1.0) > kStateTol)
    throw validation_error("PureState: vector norm " + std::to_string(n) +
                           " differs from 1 beyond 1e-10");
}

PureState PureState::normalized(CVector amps) {
  double n = amps.norm();
  if (n < 1e-14) throw validation_error("PureState: cannot normalize zero vector");
  return PureState(CVector(amps / n));
}

CMatrix PureState::projector() const {
  CMatrix p = amplitudes * amplitudes.adjoint();
  return p;
}

DensityMatrix::DensityMatrix(CMatrix m) : matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols())
    throw dimension_error("DensityMatrix: matrix must be square");
  check_dimension(dim(), "DensityMatrix");
  if (!is_hermitian(matrix, kStateTol))
    throw validation_error("DensityMatrix: not Hermitian within 1e-10");
  double tr = matrix.trace().real();
  if (std::abs(tr - 1.0) > kStateTol)
    throw validation_error("DensityMatrix: trace " + std::to_string(tr) +
                           " differs from 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kStateTol)
    throw validation_error("DensityMatrix: negative eigenvalue beyond tolerance");
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  check_dimension(d, "DensityMatrix");
  CMatrix m = CMatrix::Identity(d, d) / static_cast<double>(d);
  return DensityMatrix(m);
}

// ---------------------------------------------------------------------------
// Core operations
// ---------------------------------------------------------------------------

HermEig herm_eig(const CMatrix& m) {
  if (m.rows() != m.cols()) throw dimension_error("herm_eig: matrix must be square");
  if (!is_hermitian(m)) throw validation_error("herm_eig: input not Hermitian within 1e-8");
  CMatrix sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("herm_eig: eigensolver failed to converge");
  const int d = static_cast<int>(m.rows());
  HermEig out;
  out.eigenvalues = RVector(d);
  out.eigenvectors = CMatrix(d, d);
  // Eigen sorts ascending; the contract is descending.
  for (int i = 0; i < d; ++i) {
    out.eigenvalues(i) = es.eigenvalues()(d - 1 - i);
    out.eigenvectors.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  return out;
}

double trace_norm(const CMatrix& m) {
  if (m.rows() != m.cols()) throw dimension_error("trace_norm: matrix must be square");
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix partial_trace(const CMatrix& m, int dim_a, int dim_b, Keep keep) {
  if (dim_a < 1 || dim_b < 1) throw dimension_error("partial_trace: dims must be >= 1");
  const Eigen::Index d = static_cast<Eigen::Index>(dim_a) * dim_b;
  if (m.rows() != d || m.cols() != d)
    throw dimension_error("partial_trace: matrix size does not match dim_a*dim_b");
  if (keep == Keep::first) {
    CMatrix out = CMatrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int k = 0; k < dim_b; ++k)
          out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_b; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int k = 0; k < dim_a; ++k)
        out(i, j) += m(k * dim_b + i, k * dim_b + j);
  return out;
}

CMatrix haar_unitary(int d, std::uint64_t seed) {
  check_dimension(d, "haar_unitary");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double re = gauss(rng);
      double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Phase-correct so the sampled measure is exactly Haar.
  for (int j = 0; j < d; ++j) {
    Complex rjj = r(j, j);
    Complex phase = std::abs(rjj) > 1e-300 ? rjj / std::abs(rjj) : Complex(1, 0);
    q.col(j) *= phase;
  }
  return q;
}

PureState haar_state(int d, std::uint64_t seed) {
  check_dimension(d, "haar_state");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(d);
  for (int i = 0; i < d; ++i) {
    double re = gauss(rng);
    double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return PureState::normalized(v);
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

CMatrix identity(int d) { return CMatrix::Identity(d, d); }

CVector basis_state(int d, int index) {
  CVector v = CVector::Zero(d);
  v(index) = Complex(1, 0);
  return v;
}

CVector fourier_state(int d, int j) {
  CVector v(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int x = 0; x < d; ++x) {
    double angle = 2.0 * M_PI * j * x / d;
    v(x) = Complex(std::cos(angle), std::sin(angle)) * scale;
  }
  return v;
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(CMatrix(m - m.adjoint())) <= tol;
}

double max_abs(const CMatrix& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      best = std::max(best, std::abs(m(i, j)));
  return best;
}

CMatrix herm_function(const CMatrix& m, double (*f)(double)) {
  HermEig eig = herm_eig(m);
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (int i = 0; i < eig.eigenvalues.size(); ++i) {
    double fl = f(eig.eigenvalues(i));
    if (fl != 0.0)
      out += fl * (eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint());
  }
  return out;
}

CMatrix herm_sign(const CMatrix& m) {
  return herm_function(m, +[](double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return -1.0;
    return 0.0;
  });
}

CMatrix herm_sqrt_psd(const CMatrix& m) {
  return herm_function(m, +[](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

CMatrix herm_inv_sqrt_psd(const CMatrix& m, double cutoff, bool* pseudo_inverted) {
  HermEig eig = herm_eig(m);
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  bool dropped = false;
  for (int i = 0; i < eig.eigenvalues.size(); ++i) {
    double l = eig.eigenvalues(i);
    if (l > cutoff) {
      out += (1.0 / std::sqrt(l)) *
             (eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint());
    } else {
      dropped = true;
    }
  }
  if (pseudo_inverted) *pseudo_inverted = dropped;
  return out;
}

}  // namespace cekit

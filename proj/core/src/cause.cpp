/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cekit/cause.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cekit/parallel.hpp"

namespace cekit {

namespace {

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt, std::uint64_t i) {
  return splitmix64(seed ^ splitmix64(salt ^ (i * 0x2545F4914F6CDD1DULL)));
}

// ---------------------------------------------------------------------------
// Fast Hermitian trace norm (hot path, no validation)
// ---------------------------------------------------------------------------

double herm_trace_norm(const CMatrix& m) {
  CMatrix sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// 1-D golden-section minimization (assumes unimodal objective)
// ---------------------------------------------------------------------------

struct Golden {
  double x;
  double fx;
};

Golden golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double xtol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
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
  double xm = (a + b) / 2.0;
  return {xm, f(xm)};
}

// ---------------------------------------------------------------------------
// Nelder-Mead minimization
// ---------------------------------------------------------------------------

struct NMResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

NMResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0, double step, int max_iters,
                     double ftol) {
  const size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  for (size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  auto order = [&] {
    std::vector<size_t> idx(n + 1);
    for (size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](size_t a, size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (size_t i = 0; i <= n; ++i) {
      s2[i] = simplex[idx[i]];
      f2[i] = fv[idx[i]];
    }
    simplex.swap(s2);
    fv.swap(f2);
  };

  NMResult out;
  int it = 0;
  for (it = 0; it < max_iters; ++it) {
    order();
    if (std::abs(fv[n] - fv[0]) < ftol) {
      out.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / double(n);

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (size_t j = 0; j < n; ++j)
        p[j] = centroid[j] + t * (simplex[n][j] - centroid[j]);
      return p;
    };

    std::vector<double> xr = blend(-1.0);
    double fr = f(xr);
    if (fr < fv[0]) {
      std::vector<double> xe = blend(-2.0);
      double fe = f(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      bool outside = fr < fv[n];
      std::vector<double> xc = blend(outside ? -0.5 : 0.5);
      double fc = f(xc);
      if (fc < std::min(fr, fv[n])) {
        simplex[n] = xc;
        fv[n] = fc;
      } else {
        for (size_t i = 1; i <= n; ++i) {
          for (size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          fv[i] = f(simplex[i]);
        }
      }
    }
  }
  order();
  out.x = simplex[0];
  out.fx = fv[0];
  out.iterations = it;
  return out;
}

// ---------------------------------------------------------------------------
// Parametrizations
// ---------------------------------------------------------------------------

// Hermitian matrix from d^2 real parameters (diagonal first, then upper
// triangle as re/im pairs).
CMatrix herm_from_params(const double* p, int d) {
  CMatrix h = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) h(i, i) = Complex(p[i], 0);
  int k = d;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      h(i, j) = Complex(p[k], p[k + 1]);
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  return h;
}

CMatrix unitary_from_params(const double* p, int d) {
  CMatrix h = herm_from_params(p, d);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector phases(d);
  for (int i = 0; i < d; ++i) {
    double l = es.eigenvalues()(i);
    phases(i) = Complex(std::cos(l), std::sin(l));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Inverse of unitary_from_params for seeding: H = -i log(V) via Schur.
std::vector<double> pack_unitary_params(const CMatrix& v, int d) {
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(v);
  Eigen::MatrixXcd q = schur.matrixU();
  CMatrix h = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    Complex t = schur.matrixT()(i, i);
    double angle = std::atan2(t.imag(), t.real());
    h += angle * CMatrix(q.col(i) * q.col(i).adjoint());
  }
  h = CMatrix((h + h.adjoint()) / 2.0);
  std::vector<double> p(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i) p[i] = h(i, i).real();
  int k = d;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      p[k] = h(i, j).real();
      p[k + 1] = h(i, j).imag();
      k += 2;
    }
  return p;
}

// Density matrix from r^2 real parameters through a lower-triangular factor
// rho = L L† / Tr[L L†].
CMatrix density_from_params(const double* p, int r) {
  CMatrix l = CMatrix::Zero(r, r);
  for (int i = 0; i < r; ++i) l(i, i) = Complex(p[i], 0);
  int k = r;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < i; ++j) {
      l(i, j) = Complex(p[k], p[k + 1]);
      k += 2;
    }
  CMatrix rho = l * l.adjoint();
  double tr = rho.trace().real();
  if (tr < 1e-12) return CMatrix::Identity(r, r) / double(r);
  return rho / tr;
}

std::vector<double> pack_density_params(const CMatrix& rho, int r) {
  CMatrix reg = rho + 1e-12 * CMatrix::Identity(r, r);
  Eigen::LLT<Eigen::MatrixXcd> llt(reg);
  Eigen::MatrixXcd l = llt.matrixL();
  std::vector<double> p(static_cast<size_t>(r) * r);
  for (int i = 0; i < r; ++i) p[i] = l(i, i).real();
  int k = r;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < i; ++j) {
      p[k] = l(i, j).real();
      p[k + 1] = l(i, j).imag();
      k += 2;
    }
  return p;
}

// ---------------------------------------------------------------------------
// See-saw ascent for the (weighted) maximum causal effect
// ---------------------------------------------------------------------------

struct SeesawOut {
  double value = 0.0;
  CVector psi, psi_perp;
  CMatrix certificate;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

// Extreme eigenvector with tie-breaking toward the previous iterate: inside a
// degenerate eigenspace, keep the direction closest to where we were.
CVector pick_extreme(const HermEig& eig, const CVector& prev, bool top) {
  const int d = static_cast<int>(eig.eigenvalues.size());
  const double target = top ? eig.eigenvalues(0) : eig.eigenvalues(d - 1);
  std::vector<int> idx;
  for (int i = 0; i < d; ++i)
    if (std::abs(eig.eigenvalues(i) - target) < 1e-10) idx.push_back(i);
  CVector proj = CVector::Zero(d);
  for (int i : idx) {
    Complex overlap = eig.eigenvectors.col(i).adjoint() * prev;
    proj += overlap * eig.eigenvectors.col(i);
  }
  double n = proj.norm();
  if (n > 1e-8) return proj / n;
  return eig.eigenvectors.col(idx.front());
}

SeesawOut seesaw_run(const KrausChannel& ch, double p, CVector psi, CVector pp,
                     int max_iters, double tol) {
  SeesawOut out;
  out.psi = psi;
  out.psi_perp = pp;
  double prev = -1.0;
  for (int it = 1; it <= max_iters; ++it) {
    out.iterations = it;
    CMatrix delta = p * ch.apply(CMatrix(out.psi * out.psi.adjoint())) -
                    (1.0 - p) * ch.apply(CMatrix(out.psi_perp * out.psi_perp.adjoint()));
    delta = CMatrix((delta + delta.adjoint()) / 2.0);
    HermEig de = herm_eig(delta);
    double value = de.eigenvalues.cwiseAbs().sum();
    CMatrix cert = CMatrix::Zero(ch.dim_out, ch.dim_out);
    for (int i = 0; i < de.eigenvalues.size(); ++i) {
      double s = de.eigenvalues(i) > 0 ? 1.0 : (de.eigenvalues(i) < 0 ? -1.0 : 0.0);
      if (s != 0.0)
        cert += s * CMatrix(de.eigenvectors.col(i) * de.eigenvectors.col(i).adjoint());
    }
    out.value = value;
    out.certificate = cert;
    out.trace.push_back(value);
    if (value - prev < tol) {
      out.converged = true;
      break;
    }
    prev = value;
    CMatrix m = ch.apply_adjoint(cert);
    HermEig me = herm_eig(m);
    if (me.eigenvalues(0) - me.eigenvalues(me.eigenvalues.size() - 1) < 1e-14) {
      out.converged = true;  // pulled-back observable is constant; stay put
      break;
    }
    out.psi = pick_extreme(me, out.psi, true);
    out.psi_perp = pick_extreme(me, out.psi_perp, false);
  }
  return out;
}

// Deterministic start pairs followed by Haar restarts.
std::pair<CVector, CVector> seesaw_start(int d, int r, std::uint64_t seed) {
  if (r == 0) return {basis_state(d, 0), basis_state(d, 1)};
  if (r == 1) return {fourier_state(d, 0), fourier_state(d, 1)};
  CMatrix u = haar_unitary(d, mix_seed(seed, 0xCE11AA01ULL, r));
  return {u.col(0), u.col(1)};
}

// All Kraus operators rank one onto a common output direction: the channel is
// constant and CE_max is zero without optimization.
bool constant_channel_guard(const KrausChannel& ch) {
  CVector common;
  for (const CMatrix& k : ch.kraus) {
    Eigen::JacobiSVD<CMatrix> svd(k, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) < 1e-12) continue;
    if (sv.size() > 1 && sv(1) > 1e-12 * sv(0)) return false;
    CVector u = svd.matrixU().col(0);
    if (common.size() == 0) {
      common = u;
    } else if (std::abs((Complex)(common.adjoint() * u)) < 1.0 - 1e-12) {
      return false;
    }
  }
  return common.size() != 0;
}

CEReport weighted_seesaw_report(const KrausChannel& ch, double p,
                                const SolverConfig& cfg) {
  if (ch.dim_in < 2)
    throw dimension_error("ce_max: input dimension must be >= 2");
  const int d = ch.dim_in;

  if (constant_channel_guard(ch)) {
    return CEReport{0.0,
                    DensityMatrix::pure(PureState(basis_state(d, 0))),
                    DensityMatrix::pure(PureState(basis_state(d, 1))),
                    CMatrix::Zero(ch.dim_out, ch.dim_out),
                    0,
                    {0},
                    true,
                    cfg.seed,
                    {0.0}};
  }

  const int n = std::max(1, cfg.restarts);
  std::vector<SeesawOut> results(static_cast<size_t>(n));
  parallel_for(n, [&](int r) {
    auto [psi, pp] = seesaw_start(d, r, cfg.seed);
    results[static_cast<size_t>(r)] =
        seesaw_run(ch, p, psi, pp, cfg.max_iters, cfg.tol);
  });

  int best = 0;
  for (int r = 1; r < n; ++r)
    if (results[static_cast<size_t>(r)].value > results[static_cast<size_t>(best)].value)
      best = r;
  const SeesawOut& win = results[static_cast<size_t>(best)];

  std::vector<int> iters;
  iters.reserve(static_cast<size_t>(n));
  for (const auto& r : results) iters.push_back(r.iterations);

  return CEReport{win.value,
                  DensityMatrix::pure(PureState::normalized(win.psi)),
                  DensityMatrix::pure(PureState::normalized(win.psi_perp)),
                  win.certificate,
                  n,
                  std::move(iters),
                  win.converged,
                  cfg.seed,
                  win.trace};
}

// ---------------------------------------------------------------------------
// Minimization over orthogonal-support pairs
// ---------------------------------------------------------------------------

using PairObjective = std::function<double(const CMatrix&, const CMatrix&)>;

struct MinSearchOut {
  double value = std::numeric_limits<double>::infinity();
  CMatrix rho, rho_perp;
  std::vector<int> iterations;
  bool converged = false;
};

struct PairCandidate {
  CMatrix v;   // support-splitting unitary
  int r;       // rank split
  CMatrix b1;  // r x r block state
  CMatrix b2;  // (d-r) x (d-r) block state
};

std::pair<CMatrix, CMatrix> candidate_pair(const PairCandidate& c, int d) {
  CMatrix big1 = CMatrix::Zero(d, d);
  big1.block(0, 0, c.r, c.r) = c.b1;
  CMatrix big2 = CMatrix::Zero(d, d);
  big2.block(c.r, c.r, d - c.r, d - c.r) = c.b2;
  return {CMatrix(c.v * big1 * c.v.adjoint()), CMatrix(c.v * big2 * c.v.adjoint())};
}

CMatrix dft_matrix(int d) {
  CMatrix f(d, d);
  for (int j = 0; j < d; ++j) f.col(j) = fourier_state(d, j);
  return f;
}

void subsets_of_size(int d, int r, int cap, std::vector<std::vector<int>>* out) {
  // All r-subsets when few enough, otherwise contiguous windows.
  double count = 1;
  for (int i = 0; i < r; ++i) count = count * (d - i) / (i + 1);
  if (count <= cap) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(cur.size()) == r) {
        out->push_back(cur);
        return;
      }
      for (int i = start; i < d; ++i) {
        cur.push_back(i);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
  } else {
    for (int s = 0; s < d; ++s) {
      std::vector<int> w(static_cast<size_t>(r));
      for (int i = 0; i < r; ++i) w[static_cast<size_t>(i)] = (s + i) % d;
      std::sort(w.begin(), w.end());
      out->push_back(w);
    }
  }
}

CMatrix subset_permutation(int d, const std::vector<int>& s) {
  std::vector<int> order = s;
  std::vector<bool> used(static_cast<size_t>(d), false);
  for (int i : s) used[static_cast<size_t>(i)] = true;
  for (int i = 0; i < d; ++i)
    if (!used[static_cast<size_t>(i)]) order.push_back(i);
  CMatrix p = CMatrix::Zero(d, d);
  for (int col = 0; col < d; ++col) p(order[static_cast<size_t>(col)], col) = 1.0;
  return p;
}

std::vector<PairCandidate> structured_candidates(int d,
                                                 const std::vector<int>& splits) {
  std::vector<PairCandidate> out;
  CMatrix dft = dft_matrix(d);
  for (int r : splits) {
    CMatrix mixed1 = CMatrix::Identity(r, r) / double(r);
    CMatrix mixed2 = CMatrix::Identity(d - r, d - r) / double(d - r);
    std::vector<std::vector<int>> subsets;
    subsets_of_size(d, r, 24, &subsets);
    for (const auto& s : subsets)
      out.push_back({subset_permutation(d, s), r, mixed1, mixed2});
    out.push_back({dft, r, mixed1, mixed2});
    if (r == 1) {
      // Pure pairs: basis states and Fourier states.
      for (int j = 1; j < d; ++j) {
        CMatrix pure2 = CMatrix::Zero(d - 1, d - 1);
        pure2(j - 1, j - 1) = 1.0;
        out.push_back({CMatrix::Identity(d, d), 1, CMatrix::Identity(1, 1), pure2});
        out.push_back({dft, 1, CMatrix::Identity(1, 1), pure2});
      }
    }
  }
  return out;
}

MinSearchOut min_pair_search_qubit(const KrausChannel& ch, const SolverConfig& cfg,
                                   const PairObjective& obj) {
  auto bloch_pair = [](double theta, double phi) {
    CVector psi(2), pp(2);
    psi << Complex(std::cos(theta / 2), 0),
        Complex(std::cos(phi), std::sin(phi)) * std::sin(theta / 2);
    pp << Complex(std::sin(theta / 2), 0),
        -Complex(std::cos(phi), std::sin(phi)) * std::cos(theta / 2);
    return std::make_pair(psi, pp);
  };
  auto eval = [&](const std::vector<double>& x) {
    auto [psi, pp] = bloch_pair(x[0], x[1]);
    return obj(ch.apply(CMatrix(psi * psi.adjoint())),
               ch.apply(CMatrix(pp * pp.adjoint())));
  };

  const int n = std::max(1, cfg.restarts);
  std::vector<NMResult> results(static_cast<size_t>(n));
  parallel_for(n, [&](int r) {
    std::vector<double> x0(2);
    if (r == 0) {
      x0 = {0.0, 0.0};  // basis pair
    } else if (r == 1) {
      x0 = {M_PI / 2, 0.0};  // |+>,|->
    } else if (r == 2) {
      x0 = {M_PI / 2, M_PI / 2};
    } else {
      std::mt19937_64 rng(mix_seed(cfg.seed, 0xCE11AA02ULL, static_cast<unsigned>(r)));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      x0 = {u(rng) * M_PI, u(rng) * 2 * M_PI};
    }
    results[static_cast<size_t>(r)] = nelder_mead(eval, x0, 0.4, cfg.max_iters, cfg.tol);
  });

  MinSearchOut out;
  int best = 0;
  for (int r = 1; r < n; ++r)
    if (results[static_cast<size_t>(r)].fx < results[static_cast<size_t>(best)].fx)
      best = r;
  auto [psi, pp] = bloch_pair(results[static_cast<size_t>(best)].x[0],
                              results[static_cast<size_t>(best)].x[1]);
  out.value = results[static_cast<size_t>(best)].fx;
  out.rho = psi * psi.adjoint();
  out.rho_perp = pp * pp.adjoint();
  out.converged = results[static_cast<size_t>(best)].converged;
  for (const auto& r : results) out.iterations.push_back(r.iterations);
  return out;
}

MinSearchOut min_pair_search(const KrausChannel& ch, const SolverConfig& cfg,
                             const PairObjective& obj) {
  if (ch.dim_in < 2)
    throw dimension_error("ce_min: input dimension must be >= 2");
  const int d = ch.dim_in;
  if (d == 2) return min_pair_search_qubit(ch, cfg, obj);

  std::vector<int> splits;
  if (cfg.rank_splits && !cfg.rank_splits->empty()) {
    splits = *cfg.rank_splits;
    for (int r : splits)
      if (r < 1 || r >= d)
        throw validation_error("SolverConfig: rank split out of range");
  } else {
    for (int r = 1; r < d; ++r) splits.push_back(r);
  }

  MinSearchOut out;
  auto consider = [&](double value, const CMatrix& rho, const CMatrix& rho_perp,
                      bool converged) {
    if (value < out.value) {
      out.value = value;
      out.rho = rho;
      out.rho_perp = rho_perp;
      out.converged = converged;
    }
  };

  // Structured candidates, evaluated directly; the best one per split also
  // seeds the first Nelder-Mead restart of that split.
  std::vector<PairCandidate> candidates = structured_candidates(d, splits);
  std::vector<double> cand_values(candidates.size());
  parallel_for(static_cast<int>(candidates.size()), [&](int i) {
    auto [rho, rp] = candidate_pair(candidates[static_cast<size_t>(i)], d);
    cand_values[static_cast<size_t>(i)] = obj(ch.apply(rho), ch.apply(rp));
  });
  std::vector<int> best_cand_for_split(static_cast<size_t>(d), -1);
  for (size_t i = 0; i < candidates.size(); ++i) {
    auto [rho, rp] = candidate_pair(candidates[i], d);
    consider(cand_values[i], rho, rp, true);
    int r = candidates[i].r;
    int& slot = best_cand_for_split[static_cast<size_t>(r)];
    if (slot < 0 || cand_values[static_cast<size_t>(slot)] > cand_values[i]) slot = static_cast<int>(i);
  }

  struct Job {
    int split;
    int restart;
  };
  std::vector<Job> jobs;
  const int n = std::max(1, cfg.restarts);
  for (int r : splits)
    for (int i = 0; i < n; ++i) jobs.push_back({r, i});

  std::vector<NMResult> results(jobs.size());
  std::vector<int> job_split(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int j) {
    const Job job = jobs[static_cast<size_t>(j)];
    const int r = job.split;
    job_split[static_cast<size_t>(j)] = r;
    const int nu = d * d;
    const int nb1 = r * r;
    const int nb2 = (d - r) * (d - r);
    auto eval = [&, r](const std::vector<double>& x) {
      CMatrix v = unitary_from_params(x.data(), d);
      PairCandidate c{v, r, density_from_params(x.data() + nu, r),
                      density_from_params(x.data() + nu + nb1, d - r)};
      auto [rho, rp] = candidate_pair(c, d);
      return obj(ch.apply(rho), ch.apply(rp));
    };
    std::vector<double> x0(static_cast<size_t>(nu + nb1 + nb2));
    if (job.restart == 0 && best_cand_for_split[static_cast<size_t>(r)] >= 0) {
      const PairCandidate& c =
          candidates[static_cast<size_t>(best_cand_for_split[static_cast<size_t>(r)])];
      auto pv = pack_unitary_params(c.v, d);
      auto p1 = pack_density_params(c.b1, r);
      auto p2 = pack_density_params(c.b2, d - r);
      std::copy(pv.begin(), pv.end(), x0.begin());
      std::copy(p1.begin(), p1.end(), x0.begin() + nu);
      std::copy(p2.begin(), p2.end(), x0.begin() + nu + nb1);
    } else {
      std::mt19937_64 rng(mix_seed(cfg.seed, 0xCE11AA03ULL,
                                   static_cast<std::uint64_t>(j)));
      std::normal_distribution<double> g(0.0, 1.0);
      for (double& xi : x0) xi = g(rng);
    }
    results[static_cast<size_t>(j)] = nelder_mead(eval, x0, 0.3, cfg.max_iters, cfg.tol);
  });

  for (size_t j = 0; j < jobs.size(); ++j) {
    const int r = job_split[j];
    const int nu = d * d;
    CMatrix v = unitary_from_params(results[j].x.data(), d);
    PairCandidate c{v, r, density_from_params(results[j].x.data() + nu, r),
                    density_from_params(results[j].x.data() + nu + r * r, d - r)};
    auto [rho, rp] = candidate_pair(c, d);
    consider(results[j].fx, rho, rp, results[j].converged);
    out.iterations.push_back(results[j].iterations);
  }
  return out;
}

CEReport min_search_report(const KrausChannel& ch, const SolverConfig& cfg,
                           const PairObjective& obj) {
  MinSearchOut ms = min_pair_search(ch, cfg, obj);
  CMatrix rho = (ms.rho + ms.rho.adjoint()) / 2.0;
  CMatrix rp = (ms.rho_perp + ms.rho_perp.adjoint()) / 2.0;
  CMatrix delta = ch.apply(rho) - ch.apply(rp);
  return CEReport{ms.value,
                  DensityMatrix(rho),
                  DensityMatrix(rp),
                  herm_sign(delta),
                  std::max(1, cfg.restarts),
                  std::move(ms.iterations),
                  ms.converged,
                  cfg.seed,
                  {}};
}

double theorem2_rhs(double dp, int d) {
  double eps = std::max(0.0, (1.0 - dp) / 2.0);
  return 4.0 * std::sqrt(std::log(2.0)) * std::sqrt(eps) *
         std::sqrt(d / 2.0 + std::log(d + 1.0));
}

}  // namespace

// ---------------------------------------------------------------------------
// Public solvers
// ---------------------------------------------------------------------------

CEReport ce_max(const KrausChannel& ch, const SolverConfig& cfg) {
  return weighted_seesaw_report(ch, 0.5, cfg);
}

CEReport ce_min(const KrausChannel& ch, const SolverConfig& cfg) {
  return min_search_report(ch, cfg, [](const CMatrix& a, const CMatrix& b) {
    return herm_trace_norm(CMatrix(a - b)) / 2.0;
  });
}

double dp_min(const KrausChannel& ch, const SolverConfig& cfg) {
  // During the pair search the p-minimization runs by golden section: the
  // objective is convex in p (affine argument inside a norm), so it is
  // unimodal and the section search is exact.
  auto scan = [](const CMatrix& a, const CMatrix& b, double xtol) {
    return golden_min(
               [&](double p) {
                 return herm_trace_norm(CMatrix(p * a - (1.0 - p) * b));
               },
               0.0, 1.0, xtol)
        .fx;
  };
  MinSearchOut ms = min_pair_search(
      ch, cfg,
      [&](const CMatrix& a, const CMatrix& b) { return scan(a, b, 1e-4); });

  // Reported value: uniform grid over p followed by golden refinement around
  // the best grid point, evaluated at the winning pair.
  CMatrix a = ch.apply(ms.rho), b = ch.apply(ms.rho_perp);
  auto f = [&](double p) { return herm_trace_norm(CMatrix(p * a - (1.0 - p) * b)); };
  const int grid = std::max(2, cfg.p_grid);
  double best_p = 0.0, best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    double p = double(i) / (grid - 1);
    double v = f(p);
    if (v < best_f) {
      best_f = v;
      best_p = p;
    }
  }
  double h = 1.0 / (grid - 1);
  Golden refined = golden_min(f, std::max(0.0, best_p - h), std::min(1.0, best_p + h), 1e-6);
  return std::min(best_f, refined.fx);
}

double ce_weighted_max(const KrausChannel& ch, double p, const SolverConfig& cfg) {
  if (p < 0.0 || p > 1.0)
    throw validation_error("ce_weighted_max: p must lie in [0, 1]");
  return weighted_seesaw_report(ch, p, cfg).value;
}

double ce_weighted_min(const KrausChannel& ch, double p, const SolverConfig& cfg) {
  if (p < 0.0 || p > 1.0)
    throw validation_error("ce_weighted_min: p must lie in [0, 1]");
  MinSearchOut ms =
      min_pair_search(ch, cfg, [p](const CMatrix& a, const CMatrix& b) {
        return herm_trace_norm(CMatrix(p * a - (1.0 - p) * b));
      });
  return ms.value;
}

PiAverage ce_pi_average(const KrausChannel& ch, int samples, std::uint64_t seed) {
  if (samples < 1) throw validation_error("ce_pi_average: samples must be >= 1");
  if (ch.dim_in < 2)
    throw dimension_error("ce_pi_average: input dimension must be >= 2");
  std::vector<double> vals(static_cast<size_t>(samples));
  parallel_for(samples, [&](int i) {
    CMatrix u = haar_unitary(ch.dim_in, mix_seed(seed, 0xCE11AA04ULL,
                                                 static_cast<std::uint64_t>(i)));
    CVector psi = u.col(0), pp = u.col(1);
    vals[static_cast<size_t>(i)] =
        herm_trace_norm(CMatrix(ch.apply(CMatrix(psi * psi.adjoint())) -
                                ch.apply(CMatrix(pp * pp.adjoint())))) /
        2.0;
  });
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= samples;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var = samples > 1 ? var / (samples - 1) : 0.0;
  return PiAverage{mean, std::sqrt(var / samples), samples};
}

ConditionalMode parse_conditional_mode(const std::string& text) {
  ConditionalMode m;
  if (text == "max|max") {
    m = {ConditionalMode::Effect::max, ConditionalMode::OverSigma::max};
  } else if (text == "min|max") {
    m = {ConditionalMode::Effect::min, ConditionalMode::OverSigma::max};
  } else if (text == "max|min") {
    m = {ConditionalMode::Effect::max, ConditionalMode::OverSigma::min};
  } else if (text == "min|min") {
    m = {ConditionalMode::Effect::min, ConditionalMode::OverSigma::min};
  } else {
    throw validation_error("conditional mode must be one of max|max, min|max, "
                           "max|min, min|min");
  }
  return m;
}

double conditional_ce(const BipartiteChannel& bip, ConditionalMode mode,
                      const SolverConfig& cfg) {
  SolverConfig inner = cfg;
  inner.restarts = std::max(4, cfg.restarts / 8);
  inner.max_iters = std::max(100, cfg.max_iters / 2);

  auto inner_value = [&](const DensityMatrix& sigma) {
    KrausChannel slice = conditional_slice(bip, sigma);
    double v = mode.effect == ConditionalMode::Effect::max
                   ? ce_max(slice, inner).value
                   : ce_min(slice, inner).value;
    return std::clamp(v, 0.0, 1.0);
  };

  if (bip.dim_k == 1) return inner_value(DensityMatrix::maximally_mixed(1));

  const bool outer_max = mode.over_sigma == ConditionalMode::OverSigma::max;
  const int dk = bip.dim_k;
  auto eval = [&](const std::vector<double>& x) {
    DensityMatrix sigma{density_from_params(x.data(), dk)};
    double v = inner_value(sigma);
    return outer_max ? -v : v;
  };

  double best = outer_max ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
  auto consider = [&](double signed_value) {
    double v = outer_max ? -signed_value : signed_value;
    if (outer_max ? v > best : v < best) best = v;
  };

  // Structured sigma starts: maximally mixed and every basis state.
  std::vector<std::vector<double>> starts;
  starts.push_back(pack_density_params(
      CMatrix(CMatrix::Identity(dk, dk) / double(dk)), dk));
  for (int m = 0; m < dk; ++m) {
    CMatrix pure = CMatrix::Zero(dk, dk);
    pure(m, m) = 1.0;
    starts.push_back(pack_density_params(pure, dk));
  }
  const int extra = 4;
  for (int r = 0; r < extra; ++r) {
    std::mt19937_64 rng(mix_seed(cfg.seed, 0xCE11AA05ULL, static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x0(static_cast<size_t>(dk) * dk);
    for (double& xi : x0) xi = g(rng);
    starts.push_back(std::move(x0));
  }

  std::vector<double> outcomes(starts.size());
  parallel_for(static_cast<int>(starts.size()), [&](int s) {
    NMResult nm = nelder_mead(eval, starts[static_cast<size_t>(s)], 0.3,
                              std::max(60, cfg.max_iters / 4), 1e-9);
    outcomes[static_cast<size_t>(s)] = nm.fx;
  });
  for (double o : outcomes) consider(o);
  return best;
}

// ---------------------------------------------------------------------------
// Classical quantities
// ---------------------------------------------------------------------------

double classical_ace(const StochasticChannel& q) {
  double best = 0.0;
  for (int a = 0; a < q.n_in; ++a)
    for (int a2 = a + 1; a2 < q.n_in; ++a2) {
      double tvd = 0.0;
      for (int b = 0; b < q.n_out; ++b) tvd += std::abs(q.q(b, a) - q.q(b, a2));
      best = std::max(best, tvd / 2.0);
    }
  return best;
}

double capacity_lower_bound(double ce_max_value) {
  if (ce_max_value < -1e-12 || ce_max_value > 1.0 + 1e-12)
    throw validation_error("capacity_lower_bound: CE_max must lie in [0, 1]");
  double x = std::clamp((1.0 - ce_max_value) / 2.0, 0.0, 1.0);
  auto h2 = [](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return -t * std::log2(t) - (1.0 - t) * std::log2(1.0 - t);
  };
  return 1.0 - h2(x);
}

// ---------------------------------------------------------------------------
// Petz recovery and correctability
// ---------------------------------------------------------------------------

PetzRecovery petz_recovery(const KrausChannel& ch, const DensityMatrix& reference) {
  if (reference.dim() != ch.dim_in)
    throw dimension_error("petz_recovery: reference dimension must match dim_in");
  HermEig ref_eig = herm_eig(reference.matrix);
  if (ref_eig.eigenvalues(ref_eig.eigenvalues.size() - 1) <= 1e-12)
    throw validation_error("petz_recovery: reference state must be full rank");

  CMatrix sigma_sqrt = herm_sqrt_psd(reference.matrix);
  CMatrix n_sigma = ch.apply(reference.matrix);
  bool pseudo = false;
  CMatrix inv_sqrt = herm_inv_sqrt_psd(n_sigma, 1e-10, &pseudo);

  std::vector<CMatrix> ops;
  ops.reserve(ch.kraus.size());
  for (const CMatrix& k : ch.kraus)
    ops.push_back(CMatrix(sigma_sqrt * k.adjoint() * inv_sqrt));

  if (pseudo) {
    // Completion on ker N(sigma): send it to the reference state so the map
    // stays trace preserving.
    HermEig ns_eig = herm_eig(n_sigma);
    for (int j = 0; j < ns_eig.eigenvalues.size(); ++j) {
      if (ns_eig.eigenvalues(j) > 1e-10) continue;
      for (int m = 0; m < ref_eig.eigenvalues.size(); ++m) {
        double l = ref_eig.eigenvalues(m);
        if (l <= 1e-14) continue;
        ops.push_back(CMatrix(std::sqrt(l) * ref_eig.eigenvectors.col(m) *
                              ns_eig.eigenvectors.col(j).adjoint()));
      }
    }
  }
  return PetzRecovery{KrausChannel(ch.dim_out, ch.dim_in, std::move(ops)), pseudo};
}

PetzRecovery petz_recovery(const KrausChannel& ch) {
  return petz_recovery(ch, DensityMatrix::maximally_mixed(ch.dim_in));
}

CorrectabilityReport correctability_check(const KrausChannel& ch,
                                          const SolverConfig& cfg) {
  CorrectabilityReport rep;
  rep.ce_min = ce_min(ch, cfg).value;
  rep.dp_min = dp_min(ch, cfg);
  PetzRecovery rec = petz_recovery(ch);
  rep.pseudo_inverted = rec.pseudo_inverted;
  KrausChannel rn = compose(rec.channel, ch);
  const int d = ch.dim_in;

  auto probe = [&](const CVector& psi) {
    CMatrix rho = psi * psi.adjoint();
    return herm_trace_norm(CMatrix(rn.apply(rho) - rho));
  };

  double err = 0.0;
  for (int i = 0; i < d; ++i) err = std::max(err, probe(basis_state(d, i)));
  for (int i = 0; i < d; ++i) err = std::max(err, probe(fourier_state(d, i)));
  const int haar_probes = 64;
  std::vector<double> haar_vals(haar_probes);
  parallel_for(haar_probes, [&](int i) {
    haar_vals[static_cast<size_t>(i)] = probe(
        haar_state(d, mix_seed(cfg.seed, 0xCE11AA06ULL, static_cast<std::uint64_t>(i)))
            .amplitudes);
  });
  for (double v : haar_vals) err = std::max(err, v);

  // See-saw ascent on || (R∘N - Id)(psi) ||_1 tightens the sampled maximum.
  for (int r = 0; r < 4; ++r) {
    CVector psi = r == 0 ? basis_state(d, 0)
                         : haar_state(d, mix_seed(cfg.seed, 0xCE11AA07ULL,
                                                  static_cast<std::uint64_t>(r)))
                               .amplitudes;
    double prev = -1.0;
    for (int it = 0; it < 50; ++it) {
      CMatrix rho = psi * psi.adjoint();
      CMatrix delta = rn.apply(rho) - rho;
      delta = CMatrix((delta + delta.adjoint()) / 2.0);
      CMatrix o = herm_sign(delta);
      double val = (o * delta).trace().real();
      err = std::max(err, val);
      if (val - prev < 1e-10) break;
      prev = val;
      CMatrix m = rn.apply_adjoint(o) - o;
      HermEig me = herm_eig(m);
      psi = pick_extreme(me, psi, true);
    }
  }

  rep.recovery_error = err;
  rep.bound_rhs = theorem2_rhs(rep.dp_min, d);
  rep.converse_ok = rep.dp_min >= 1.0 - 2.0 * rep.recovery_error - 1e-6;
  rep.bound_ok = rep.recovery_error <= rep.bound_rhs + 1e-9;
  return rep;
}

DualityReport duality_check(const KrausChannel& ch, const SolverConfig& cfg,
                            double slack) {
  DualityReport rep;
  KrausChannel nc = complementary(ch);
  rep.ce_max_n = ce_max(ch, cfg).value;
  rep.ce_min_n = ce_min(ch, cfg).value;
  rep.ce_max_nc = ce_max(nc, cfg).value;
  rep.ce_min_nc = ce_min(nc, cfg).value;
  const double d = ch.dim_in;

  double eps1 = std::max(0.0, rep.ce_max_n);
  rep.stmt1_ok = rep.ce_min_nc >= 1.0 - 4.0 * std::sqrt(d * eps1) - slack;

  double eps2 = std::max(0.0, 1.0 - rep.ce_min_n);
  double f = 8.0 * d * std::sqrt(eps2 * std::log(2.0)) *
             std::sqrt(d / 2.0 + std::log(d + 1.0));
  rep.stmt2_ok = rep.ce_max_nc <= 2.0 * std::sqrt(f) + slack;
  return rep;
}

// ---------------------------------------------------------------------------
// Diamond-norm bounds
// ---------------------------------------------------------------------------

DiamondBounds diamond_bounds(const KrausChannel& a, const KrausChannel& b,
                             const SolverConfig& cfg) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out)
    throw dimension_error("diamond_bounds: channel dims differ");
  const int din = a.dim_in;
  const int dout = a.dim_out;

  // Entangled-input see-saw over psi in H_A ⊗ H_E with dim(E) = d_A.
  std::vector<CMatrix> ka_ext, kb_ext;
  for (const CMatrix& k : a.kraus) ka_ext.push_back(kron(k, identity(din)));
  for (const CMatrix& k : b.kraus) kb_ext.push_back(kron(k, identity(din)));
  auto delta_ext = [&](const CMatrix& x) {
    CMatrix out = CMatrix::Zero(dout * din, dout * din);
    for (const CMatrix& k : ka_ext) out += k * x * k.adjoint();
    for (const CMatrix& k : kb_ext) out -= k * x * k.adjoint();
    return out;
  };
  auto delta_ext_adj = [&](const CMatrix& x) {
    CMatrix out = CMatrix::Zero(din * din, din * din);
    for (const CMatrix& k : ka_ext) out += k.adjoint() * x * k;
    for (const CMatrix& k : kb_ext) out -= k.adjoint() * x * k;
    return out;
  };

  auto seesaw_norm = [&](CVector psi, auto&& fwd, auto&& adj, int max_iters) {
    double prev = -1.0, value = 0.0;
    for (int it = 0; it < max_iters; ++it) {
      CMatrix rho = psi * psi.adjoint();
      CMatrix delta = fwd(rho);
      delta = CMatrix((delta + delta.adjoint()) / 2.0);
      CMatrix o = herm_sign(delta);
      value = (o * delta).trace().real();
      if (value - prev < cfg.tol) break;
      prev = value;
      CMatrix m = adj(o);
      HermEig me = herm_eig(m);
      psi = pick_extreme(me, psi, true);
    }
    return value;
  };

  const int n = std::max(1, cfg.restarts);
  std::vector<double> lower_vals(static_cast<size_t>(n));
  parallel_for(n, [&](int r) {
    CVector psi;
    if (r == 0) {
      psi = CVector::Zero(din * din);  // maximally entangled
      for (int i = 0; i < din; ++i) psi(i * din + i) = 1.0 / std::sqrt(double(din));
    } else {
      psi = haar_state(din * din, mix_seed(cfg.seed, 0xCE11AA08ULL,
                                           static_cast<std::uint64_t>(r)))
                .amplitudes;
    }
    lower_vals[static_cast<size_t>(r)] =
        seesaw_norm(psi, delta_ext, delta_ext_adj, cfg.max_iters);
  });

  auto delta_plain = [&](const CMatrix& x) { return CMatrix(a.apply(x) - b.apply(x)); };
  auto delta_plain_adj = [&](const CMatrix& x) {
    return CMatrix(a.apply_adjoint(x) - b.apply_adjoint(x));
  };
  std::vector<double> upper_vals(static_cast<size_t>(n));
  parallel_for(n, [&](int r) {
    CVector psi = r == 0 ? basis_state(din, 0)
                         : haar_state(din, mix_seed(cfg.seed, 0xCE11AA09ULL,
                                                    static_cast<std::uint64_t>(r)))
                               .amplitudes;
    upper_vals[static_cast<size_t>(r)] =
        seesaw_norm(psi, delta_plain, delta_plain_adj, cfg.max_iters);
  });

  DiamondBounds out;
  for (double v : lower_vals) out.lower = std::max(out.lower, v);
  double inner = 0.0;
  for (double v : upper_vals) inner = std::max(inner, v);
  out.upper = 2.0 * din * inner;
  return out;
}

}  // namespace cekit

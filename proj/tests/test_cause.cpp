#include <doctest.h>

#include <cmath>

#include "cekit/cause.hpp"
#include "test_support.hpp"

using namespace cekit;
using namespace cekit_tests;

namespace {

SolverConfig fast_cfg(std::uint64_t seed = 0, int restarts = 8) {
  SolverConfig cfg;
  cfg.restarts = restarts;
  cfg.max_iters = 400;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE("cause") {

TEST_CASE("ce_max on the extremes") {
  auto id_report = ce_max(identity_channel(3), fast_cfg());
  CHECK(id_report.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(id_report.converged);

  auto dr = discard_reprepare(3, DensityMatrix::pure(haar_state(2, 1)));
  CHECK(ce_max(dr, fast_cfg()).value == doctest::Approx(0.0));
}

TEST_CASE("ce_max short-circuits rank-one constant channels") {
  // every Kraus operator rank one onto the same output direction
  KrausChannel dr = discard_reprepare(3, DensityMatrix::pure(haar_state(2, 2)));
  CEReport rep = ce_max(dr, fast_cfg());
  CHECK(rep.value == 0.0);
  REQUIRE(rep.iterations_per_restart.size() == 1);
  CHECK(rep.iterations_per_restart[0] == 0);
}

TEST_CASE("ce_max report invariants") {
  KrausChannel ch = random_channel(3, 2, 7);
  CEReport rep = ce_max(ch, fast_cfg(7));
  // value recomputed from the witness pair
  double recomputed = trace_norm(CMatrix(ch.apply(rep.witness_rho.matrix) -
                                         ch.apply(rep.witness_rho_perp.matrix))) /
                      2.0;
  CHECK(std::abs(recomputed - rep.value) < 1e-7);
  // orthogonal witnesses
  CHECK(std::abs((rep.witness_rho.matrix * rep.witness_rho_perp.matrix).trace()) <
        1e-8);
  // certificate is a valid two-outcome observable
  auto eig = herm_eig(rep.certificate);
  CHECK(eig.eigenvalues(0) <= 1.0 + 1e-10);
  CHECK(eig.eigenvalues(eig.eigenvalues.size() - 1) >= -1.0 - 1e-10);
  // certificate reproduces the value on the witness difference
  CMatrix delta = ch.apply(rep.witness_rho.matrix) -
                  ch.apply(rep.witness_rho_perp.matrix);
  CHECK((rep.certificate * delta).trace().real() / 2.0 ==
        doctest::Approx(rep.value).epsilon(1e-9));
  CHECK(rep.value >= 0.0);
  CHECK(rep.value <= 1.0 + 1e-9);
}

TEST_CASE("ce_max objective is monotone within a restart") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    CEReport rep = ce_max(random_channel(3, 3, 800 + s), fast_cfg(s));
    for (size_t i = 1; i < rep.objective_trace.size(); ++i)
      CHECK(rep.objective_trace[i] >= rep.objective_trace[i - 1] - 1e-12);
  }
}

TEST_CASE("ce_max matches the Bloch-grid oracle on qubit channels") {
  KrausChannel ad = amplitude_damping(0.36);
  double grid = bloch_grid_ce_max(ad, 10000);
  CHECK(ce_max(ad, fast_cfg()).value == doctest::Approx(grid).epsilon(2e-3));
  // closed form for amplitude damping: sqrt(1 - gamma) on the equator
  CHECK(grid == doctest::Approx(std::sqrt(1.0 - 0.36)).epsilon(1e-3));
}

TEST_CASE("ce_min on the extremes and the two-bit example") {
  CHECK(ce_min(identity_channel(3), fast_cfg()).value ==
        doctest::Approx(1.0).epsilon(1e-7));

  CEReport rep = ce_min(embed_classical(two_bit_example()), fast_cfg());
  CHECK(rep.value < 1e-9);
  CHECK(std::abs((rep.witness_rho.matrix * rep.witness_rho_perp.matrix).trace()) <
        1e-8);
}

TEST_CASE("ce_min report invariants and rank-split selection") {
  KrausChannel ch = random_channel(3, 2, 71);
  CEReport rep = ce_min(ch, fast_cfg(71));
  double recomputed = trace_norm(CMatrix(ch.apply(rep.witness_rho.matrix) -
                                         ch.apply(rep.witness_rho_perp.matrix))) /
                      2.0;
  CHECK(std::abs(recomputed - rep.value) < 1e-7);
  CHECK(std::abs((rep.witness_rho.matrix * rep.witness_rho_perp.matrix).trace()) <
        1e-8);

  // explicit rank-split list restricts the search family
  SolverConfig cfg = fast_cfg(71);
  cfg.rank_splits = std::vector<int>{1};
  CHECK(ce_min(ch, cfg).value >= rep.value - 1e-9);
  cfg.rank_splits = std::vector<int>{5};
  CHECK_THROWS_AS(ce_min(ch, cfg), validation_error);
}

TEST_CASE("ce_min matches the antipodal closed scan for amplitude damping") {
  for (double gamma : {0.2, 0.36, 0.7}) {
    KrausChannel ad = amplitude_damping(gamma);
    double grid = bloch_grid_ce_min(ad, 10000);
    CHECK(grid == doctest::Approx(1.0 - gamma).epsilon(1e-3));
    CHECK(ce_min(ad, fast_cfg()).value == doctest::Approx(1.0 - gamma).epsilon(2e-3));
  }
}

TEST_CASE("partial swap ce_min is bounded by sin^2(theta)") {
  for (double theta : {0.4, M_PI / 4}) {
    DensityMatrix sigma{CMatrix(0.5 * identity(2) / 2.0 +
                                0.5 * haar_state(2, 3).projector())};
    KrausChannel ch = partial_swap_channel(2, theta, sigma);
    double lower = std::sin(theta) * std::sin(theta);
    CHECK(ce_min(ch, fast_cfg()).value >= lower - 1e-3);
  }
}

TEST_CASE("dp_min basics") {
  CHECK(dp_min(identity_channel(2), fast_cfg()) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(dp_min(pauli_depolarizing(1), fast_cfg()) == doctest::Approx(0.0));
  // Theorem check on a few random channels: dp_min >= 2 ce_min - 1
  for (std::uint64_t s = 0; s < 3; ++s) {
    KrausChannel ch = random_channel(2, 2, 900 + s);
    double dp = dp_min(ch, fast_cfg(s));
    double cm = ce_min(ch, fast_cfg(s)).value;
    CHECK(dp >= 2.0 * cm - 1.0 - 1e-6);
  }
}

TEST_CASE("weighted causal effects") {
  KrausChannel ch = random_channel(2, 2, 17);
  SolverConfig cfg = fast_cfg(17);
  CHECK(ce_weighted_max(ch, 0.5, cfg) ==
        doctest::Approx(ce_max(ch, cfg).value).epsilon(1e-6));
  CHECK(ce_weighted_min(ch, 0.5, cfg) ==
        doctest::Approx(ce_min(ch, cfg).value).epsilon(1e-6));
  for (double p : {0.0, 1.0}) {
    CHECK(ce_weighted_max(ch, p, cfg) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ce_weighted_min(ch, p, cfg) == doctest::Approx(1.0).epsilon(1e-6));
  }
  for (double p : {0.15, 0.5, 0.8})
    CHECK(ce_weighted_max(identity_channel(2), p, cfg) ==
          doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(ce_weighted_max(ch, 1.2, cfg), validation_error);
}

TEST_CASE("pi-averaged causal effect") {
  PiAverage id_avg = ce_pi_average(identity_channel(2), 64, 5);
  CHECK(id_avg.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id_avg.std_error == doctest::Approx(0.0));

  // depolarizing lambda = 0.5 scales every distance by exactly 1/2
  PiAverage dep = ce_pi_average(depolarizing_channel(2, 0.5), 64, 6);
  CHECK(dep.mean == doctest::Approx(0.5).epsilon(1e-12));

  // sandwich between the solver bounds
  KrausChannel ch = random_channel(3, 2, 44);
  SolverConfig cfg = fast_cfg(44);
  PiAverage avg = ce_pi_average(ch, 300, 44);
  CHECK(avg.mean >= ce_min(ch, cfg).value - 3 * avg.std_error - 1e-6);
  CHECK(avg.mean <= ce_max(ch, cfg).value + 3 * avg.std_error + 1e-6);
}

TEST_CASE("conditional causal effects") {
  // trivial K: all four modes collapse to the slice values
  KrausChannel ch = random_channel(2, 2, 19);
  std::vector<CMatrix> lifted;
  for (const CMatrix& k : ch.kraus) lifted.push_back(k);
  BipartiteChannel bip(2, 1, KrausChannel(2, 2, lifted));
  SolverConfig cfg = fast_cfg(19);
  double mx = ce_max(ch, cfg).value;
  double mn = ce_min(ch, cfg).value;
  CHECK(conditional_ce(bip, parse_conditional_mode("max|max"), cfg) ==
        doctest::Approx(mx).epsilon(1e-6));
  CHECK(conditional_ce(bip, parse_conditional_mode("min|min"), cfg) ==
        doctest::Approx(mn).epsilon(1e-6));

  CHECK_THROWS_AS(parse_conditional_mode("sup|inf"), validation_error);
}

TEST_CASE("quantum one-time pad conditional extremes") {
  BipartiteChannel otp = quantum_one_time_pad();
  SolverConfig cfg = fast_cfg(0, 6);
  CHECK(conditional_ce(otp, parse_conditional_mode("max|min"), cfg) ==
        doctest::Approx(0.0).epsilon(1e-6));
  CHECK(conditional_ce(otp, parse_conditional_mode("min|max"), cfg) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("classical ACE") {
  RMatrix bsc(2, 2);
  bsc << 0.9, 0.1, 0.1, 0.9;
  CHECK(classical_ace(StochasticChannel(2, 2, bsc)) == doctest::Approx(0.8));

  StochasticChannel two_bit = two_bit_example();
  CHECK(classical_ace(two_bit) == doctest::Approx(1.0));

  // coincides with CE_max of the embedded quantum channel
  CHECK(ce_max(embed_classical(two_bit), fast_cfg()).value ==
        doctest::Approx(classical_ace(two_bit)).epsilon(1e-6));
}

TEST_CASE("ACE equals the distribution-pair supremum (sampling oracle)") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_dist = [&](int n) {
    RVector p(n);
    double tot = 0;
    for (int i = 0; i < n; ++i) {
      p(i) = -std::log(u(rng));
      tot += p(i);
    }
    return RVector(p / tot);
  };
  for (std::uint64_t s = 0; s < 3; ++s) {
    // random 3-input stochastic channel
    RMatrix q(2, 3);
    for (int a = 0; a < 3; ++a) {
      double x = u(rng);
      q(0, a) = x;
      q(1, a) = 1 - x;
    }
    StochasticChannel sc(3, 2, q);
    double ace = classical_ace(sc);
    double sup = 0;
    for (int t = 0; t < 200; ++t) {
      RVector p1 = random_dist(3), p2 = random_dist(3);
      RVector d = p1 - p2;
      double in_norm = d.cwiseAbs().sum();
      if (in_norm < 1e-9) continue;
      RVector out = q * d;
      sup = std::max(sup, out.cwiseAbs().sum() / in_norm);
    }
    CHECK(sup <= ace + 1e-9);   // the ratio never exceeds the ACE
    CHECK(sup >= ace - 0.15);   // and the sampled supremum approaches it
  }
}

TEST_CASE("capacity lower bound") {
  CHECK(capacity_lower_bound(1.0) == doctest::Approx(1.0));
  CHECK(capacity_lower_bound(0.0) == doctest::Approx(0.0));
  // 1 - h2(0.25), evaluated independently
  double h2 = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
  CHECK(capacity_lower_bound(0.5) == doctest::Approx(1.0 - h2).epsilon(1e-12));
  CHECK(capacity_lower_bound(0.5) == doctest::Approx(0.18872187554086717));
  CHECK_THROWS_AS(capacity_lower_bound(1.5), validation_error);
}

TEST_CASE("petz recovery of a unitary channel inverts it") {
  CMatrix u = haar_unitary(2, 4242);
  KrausChannel uch(2, 2, {u});
  PetzRecovery rec = petz_recovery(uch);
  CHECK(!rec.pseudo_inverted);
  KrausChannel rn = compose(rec.channel, uch);
  for (std::uint64_t s = 0; s < 5; ++s) {
    CMatrix rho = DensityMatrix::pure(haar_state(2, 5000 + s)).matrix;
    CHECK(trace_norm(CMatrix(rn.apply(rho) - rho)) < 1e-8);
  }
}

TEST_CASE("petz recovery general contracts") {
  KrausChannel ch = random_channel(3, 2, 71);
  DensityMatrix ref = DensityMatrix::maximally_mixed(3);
  PetzRecovery rec = petz_recovery(ch, ref);
  CHECK(is_trace_preserving(rec.channel, 1e-8));
  // R(N(sigma)) = sigma
  CHECK(max_abs(CMatrix(rec.channel.apply(ch.apply(ref.matrix)) - ref.matrix)) <
        1e-8);

  // completely depolarizing: R ∘ N reprepares the reference
  KrausChannel dep = pauli_depolarizing(1);
  PetzRecovery drec = petz_recovery(dep);
  KrausChannel rn = compose(drec.channel, dep);
  CHECK(choi_distance(rn, discard_reprepare(2, DensityMatrix::maximally_mixed(2))) <
        1e-8);

  // rank-deficient reference is rejected
  CMatrix singular = CMatrix::Zero(3, 3);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(petz_recovery(ch, DensityMatrix(singular)), validation_error);
}

TEST_CASE("petz pseudo-inverse path stays trace preserving") {
  // channel whose output never touches |2>: N(sigma) is singular
  CMatrix iso = CMatrix::Zero(3, 2);
  iso(0, 0) = 1;
  iso(1, 1) = 1;
  KrausChannel embed(2, 3, {iso});
  PetzRecovery rec = petz_recovery(embed);
  CHECK(rec.pseudo_inverted);
  CHECK(is_trace_preserving(rec.channel, 1e-8));
  KrausChannel rn = compose(rec.channel, embed);
  CHECK(choi_distance(rn, identity_channel(2)) < 1e-8);
}

TEST_CASE("correctability check") {
  SolverConfig cfg = fast_cfg(0, 6);
  CorrectabilityReport id_rep = correctability_check(identity_channel(2), cfg);
  CHECK(id_rep.recovery_error < 1e-8);
  CHECK(id_rep.dp_min == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(id_rep.converse_ok);

  // near-unitary channel: unitary mixed with 1% depolarizing
  KrausChannel noisy = compose(depolarizing_channel(2, 0.01),
                               KrausChannel(2, 2, {haar_unitary(2, 8)}));
  CorrectabilityReport rep = correctability_check(noisy, cfg);
  CHECK(rep.converse_ok);
  CHECK(rep.bound_ok);

  // depolarizing lambda = 0.99: one-sided recoverability bound holds
  CorrectabilityReport dep_rep =
      correctability_check(depolarizing_channel(2, 0.99), cfg);
  CHECK(dep_rep.bound_ok);
}

TEST_CASE("duality check on the extremes") {
  SolverConfig cfg = fast_cfg(0, 6);
  DualityReport id_rep = duality_check(identity_channel(2), cfg);
  CHECK(id_rep.ce_max_nc == doctest::Approx(0.0));
  CHECK(id_rep.stmt1_ok);
  CHECK(id_rep.stmt2_ok);

  // discard-and-reprepare with four rank-one Kraus operators
  KrausChannel dr = discard_reprepare(2, DensityMatrix::maximally_mixed(2));
  REQUIRE(dr.kraus.size() == 4);
  DualityReport dr_rep = duality_check(dr, cfg);
  CHECK(dr_rep.ce_max_n == doctest::Approx(0.0));
  CHECK(dr_rep.ce_min_nc == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(dr_rep.stmt1_ok);
  CHECK(dr_rep.stmt2_ok);
}

TEST_CASE("double complementary preserves ce_max") {
  KrausChannel ch = random_channel(2, 2, 303);
  SolverConfig cfg = fast_cfg(303);
  double direct = ce_max(ch, cfg).value;
  double doubled = ce_max(complementary(complementary(ch)), cfg).value;
  CHECK(direct == doctest::Approx(doubled).epsilon(2e-3));
}

TEST_CASE("diamond bounds") {
  SolverConfig cfg = fast_cfg(0, 6);
  KrausChannel a = random_channel(2, 2, 55);
  DiamondBounds same = diamond_bounds(a, a, cfg);
  CHECK(same.lower < 1e-7);
  CHECK(same.upper < 1e-7);

  DiamondBounds idep =
      diamond_bounds(identity_channel(2), pauli_depolarizing(1), cfg);
  CHECK(idep.lower >= 1.5 - 1e-7);
  CHECK(idep.lower <= idep.upper + 1e-7);

  // faithfulness consistency against the averaged-output repreparation
  DensityMatrix avg_out{a.apply(CMatrix(identity(2) / 2.0))};
  DiamondBounds faith = diamond_bounds(a, discard_reprepare(2, avg_out), cfg);
  double cm = ce_max(a, cfg).value;
  CHECK(faith.lower <= 4.0 * 2.0 * cm + 1e-7);

  CHECK_THROWS_AS(diamond_bounds(a, random_channel(3, 2, 56), cfg),
                  dimension_error);
}

TEST_CASE("solvers reject one-dimensional inputs") {
  KrausChannel scalar(1, 1, {CMatrix::Identity(1, 1)});
  CHECK_THROWS_AS(ce_max(scalar, fast_cfg()), dimension_error);
  CHECK_THROWS_AS(ce_min(scalar, fast_cfg()), dimension_error);
}

}  // TEST_SUITE

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qprobe/probe_protocol.hpp"

using namespace qprobe;

TEST_CASE("level-crossing overlap step function") {
  CHECK(overlap_level_crossing(0.0, 0.2).value == Catch::Approx(1.0).margin(1e-15));
  CHECK(overlap_level_crossing(1.0, 0.2).value == Catch::Approx(0.0).margin(1e-15));
  CHECK(overlap_level_crossing(-1.5, 0.2).value == Catch::Approx(1.0).margin(1e-15));
  CHECK_THROWS_AS(overlap_level_crossing(0.0, 0.0), std::invalid_argument);
  // effective field exactly on a critical point propagates the flag
  CHECK(overlap_level_crossing(1.2, 0.2).degenerate);
}

TEST_CASE("network state construction") {
  // both branches in the mid phase: |+> x |phi+>
  const StateVector mid = build_network_state(0.0, 0.2);
  StateVector expect({0, 1, 2});
  expect.amp[1] = expect.amp[2] = expect.amp[5] = expect.amp[6] = 0.5;
  CHECK(overlap(mid, expect) == Catch::Approx(1.0).margin(1e-12));

  // bz = 1: (|0>|11> + |1>|phi+>)/sqrt(2)
  const StateVector crit = build_network_state(1.0, 0.2);
  CHECK(std::abs(crit.amp[3] - cx{1.0 / std::numbers::sqrt2}) < 1e-12);
  CHECK(std::abs(crit.amp[5] - cx{0.5}) < 1e-12);
  CHECK(std::abs(crit.amp[6] - cx{0.5}) < 1e-12);

  std::mt19937 rng(8);
  std::uniform_real_distribution<double> bzd(-2, 2), epsd(0.05, 0.4);
  for (int rep = 0; rep < 20; ++rep)
    CHECK(std::abs(build_network_state(bzd(rng), epsd(rng)).norm() - 1.0) < 1e-12);
}

TEST_CASE("probe readout") {
  // factorized probe in |+>
  std::mt19937 rng(9);
  const StateVector sys = oracles::random_state(rng, {1, 2});
  StateVector psi({0, 1, 2});
  for (std::size_t i = 0; i < 4; ++i)
    psi.amp[i] = psi.amp[4 + i] = sys.amp[i] / std::numbers::sqrt2;
  CHECK(probe_readout(psi).L_probe == Catch::Approx(1.0).margin(1e-12));

  // orthogonal branches decohere the probe completely
  const ReadoutResult crit = probe_readout(build_network_state(1.0, 0.2));
  CHECK(crit.L_probe == Catch::Approx(0.0).margin(1e-12));
  CHECK(std::abs(crit.probe_rho(0, 0) - cx{0.5}) < 1e-12);
  CHECK(std::abs(crit.probe_rho(0, 1)) < 1e-12);

  CHECK_THROWS_AS(probe_readout(oracles::random_state(rng, {1, 2})), std::invalid_argument);
}

TEST_CASE("readout identity on random branch states") {
  std::mt19937 rng(10);
  for (int rep = 0; rep < 50; ++rep) {
    const StateVector a = oracles::random_state(rng, {1, 2});
    const StateVector b = oracles::random_state(rng, {1, 2});
    StateVector psi({0, 1, 2});
    for (std::size_t i = 0; i < 4; ++i) {
      psi.amp[i] = a.amp[i] / std::numbers::sqrt2;
      psi.amp[4 + i] = b.amp[i] / std::numbers::sqrt2;
    }
    const ReadoutResult r = probe_readout(psi);
    CHECK(std::abs(r.L_probe - r.L_direct) < 1e-10);
    CHECK(r.L_probe == Catch::Approx(overlap(a, b)).margin(1e-10));
    // probe density matrix is a valid state
    CHECK(std::abs(trace(r.probe_rho) - cx{1.0}) < 1e-10);
    const auto ev = eigh(r.probe_rho).eigenvalues;
    CHECK(ev.front() > -1e-10);
    CHECK(ev.back() < 1 + 1e-10);
  }
}

TEST_CASE("split evolution degenerate cases") {
  ProtocolRun run{ChainSpec{2, 0.7, 0.1, 0.0, false}, 1.6, Method::exact};
  const auto [p0, p1] = split_evolution(run);
  CHECK(overlap(p0, p1) == Catch::Approx(1.0).margin(1e-12));  // eps = 0

  run.spec.eps = 0.2;
  run.tau = 0.0;
  const auto [q0, q1] = split_evolution(run);
  CHECK(overlap(q0, q1) == Catch::Approx(1.0).margin(1e-12));  // tau = 0
}

TEST_CASE("split evolution at the critical point matches the exponential oracle") {
  const ProtocolRun run{ChainSpec{2, 1.0, 0.1, 0.2, false}, 1.6, Method::exact};
  const auto [p0, p1] = split_evolution(run);
  const double L = overlap(p0, p1);
  // independent oracle route
  const GroundState g = ground_state_numeric(ChainSpec{2, 1.0, 0.1, 0.0, false}, Sector::full);
  const StateVector o0 =
      oracles::expm_apply(hamiltonian_transverse(ChainSpec{2, 1.2, 0.1, 0.0, false}), 1.6, g.state);
  const StateVector o1 =
      oracles::expm_apply(hamiltonian_transverse(ChainSpec{2, 0.8, 0.1, 0.0, false}), 1.6, g.state);
  CHECK(L == Catch::Approx(overlap(o0, o1)).margin(1e-8));
  CHECK(L == Catch::Approx(0.648119925270).margin(1e-6));
}

TEST_CASE("avoided-crossing sweep shape") {
  std::vector<double> grid(81);
  for (int i = 0; i < 81; ++i) grid[i] = -2.0 + i * 0.05;
  const ProtocolRun run{ChainSpec{2, 0.0, 0.1, 0.2, false}, 1.6, Method::exact};
  const std::vector<double> L = overlap_avoided(run, grid);
  REQUIRE(L.size() == 81);
  // local minima at the grid points bz = -1 and bz = +1
  for (int i : {20, 60}) {
    CHECK(L[i] < L[i - 1]);
    CHECK(L[i] < L[i + 1]);
  }
  CHECK(L.front() > 0.95);
  CHECK(L.back() > 0.95);

  // a stronger probe coupling digs a deeper dip
  ProtocolRun strong = run;
  strong.spec.eps = 0.3;
  const std::vector<double> L3 = overlap_avoided(strong, {-1.0, 1.0});
  CHECK(L3[0] < L[20]);
  CHECK(L3[1] < L[60]);
}

TEST_CASE("overlap symmetry under bz -> -bz") {
  for (double bz : {0.3, 0.8, 1.4}) {
    CHECK(overlap_level_crossing(bz, 0.2).value ==
          Catch::Approx(overlap_level_crossing(-bz, 0.2).value).margin(1e-12));
    for (Method m : {Method::exact, Method::trotter}) {
      const ProtocolRun a{ChainSpec{2, bz, 0.1, 0.2, false}, 1.6, m};
      const ProtocolRun b{ChainSpec{2, -bz, 0.1, 0.2, false}, 1.6, m};
      CHECK(overlap_avoided_point(a) == Catch::Approx(overlap_avoided_point(b)).margin(1e-10));
    }
  }
}

TEST_CASE("monotone dip depth in eps") {
  double prev_depth = 0.0;
  for (double eps : {0.1, 0.2, 0.3}) {
    const ProtocolRun run{ChainSpec{2, 1.0, 0.1, eps, false}, 1.6, Method::exact};
    const double depth = 1.0 - overlap_avoided_point(run);
    CHECK(depth > prev_depth);
    prev_depth = depth;
  }
}

TEST_CASE("trotter product is exact in the commuting case") {
  const ProtocolRun run{ChainSpec{2, 0.7, 0.0, 0.2, false}, 1.6, Method::trotter};
  const GroundState g = ground_state_numeric(ChainSpec{2, 0.7, 0.0, 0.0, false}, Sector::full);
  const auto [e0, e1] = split_evolution(run);
  const StateVector t0 = trotter_evolution(run, g.state, Branch::plus);
  const StateVector t1 = trotter_evolution(run, g.state, Branch::minus);
  CHECK(overlap(e0, t0) > 1 - 1e-12);
  CHECK(overlap(e1, t1) > 1 - 1e-12);
}

TEST_CASE("trotter deficit shrinks at least cubically in tau") {
  const ChainSpec spec{2, 0.7, 0.1, 0.2, false};
  const GroundState g = ground_state_numeric(ChainSpec{2, 0.7, 0.1, 0.0, false}, Sector::full);
  std::vector<double> taus{0.05, 0.1, 0.2, 0.4};
  std::vector<double> deficits;
  for (double tau : taus) {
    const ProtocolRun run{spec, tau, Method::trotter};
    const auto [e0, e1] = split_evolution(run);
    const StateVector t0 = trotter_evolution(run, g.state, Branch::plus);
    deficits.push_back(1.0 - overlap(e0, t0));
  }
  // least-squares slope of log deficit vs log tau
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double x = std::log(taus[i]), y = std::log(deficits[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double n = double(taus.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope > 2.9);  // symmetric split: measured ~6, bound is at-least-cubic
}

TEST_CASE("branch substitution agrees with the 8-dim block-diagonal evolution") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> bzd(-2, 2), bxd(0.02, 0.3), epsd(0.05, 0.4),
      taud(0.1, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    ChainSpec spec{2, bzd(rng), bxd(rng), epsd(rng), false};
    const double tau = taud(rng);
    const GroundState g =
        ground_state_numeric(ChainSpec{2, spec.bz, spec.bx, 0.0, false}, Sector::full);
    // per-branch route
    const ProtocolRun run{spec, tau, Method::exact};
    const auto [p0, p1] = split_evolution(run);
    // full 8-dim route through the probe-coupled Hamiltonian
    ChainSpec total = spec;
    total.with_probe = true;
    const DenseOperator h = hamiltonian_total(total);
    for (int probe : {0, 1}) {
      StateVector init({0, 1, 2});
      for (std::size_t i = 0; i < 4; ++i) init.amp[probe * 4 + i] = g.state.amp[i];
      const StateVector full = evolve(h, tau, init);
      const StateVector& branch = probe == 0 ? p0 : p1;
      for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(full.amp[probe * 4 + i] - branch.amp[i]) < 1e-12);
    }
  }
}

TEST_CASE("repeated trotter blocks converge toward the exact evolution") {
  ProtocolRun run{ChainSpec{2, 0.35, 0.1, 0.3, false}, 1.6, Method::trotter};
  const GroundState g = ground_state_numeric(ChainSpec{2, 0.35, 0.1, 0.0, false}, Sector::full);
  const auto [e0, e1] = split_evolution(run);
  const double f1 = overlap(e0, trotter_evolution(run, g.state, Branch::plus));
  run.trotter_steps = 8;
  const double f8 = overlap(e0, trotter_evolution(run, g.state, Branch::plus));
  CHECK(f8 > f1);
  CHECK(f8 > 0.999);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bcmsim/routing.hpp"
#include "test_support.hpp"

using namespace bcmsim;
using namespace testsupport;

namespace {

Path make_path(std::vector<int> nodes) { return Path{std::move(nodes)}; }

}  // namespace

TEST_CASE("candidate enumeration on the demo topologies") {
  const Topology t = example6();
  const HopMatrix m = hop_matrix(t);

  const CandidatePathSet c = enumerate_candidates(t, m, 4, 5, 8);
  REQUIRE(c.min_paths.size() == 1);
  CHECK(c.min_paths[0] == make_path({4, 3, 5}));
  REQUIRE(c.alt_paths.size() == 3);
  CHECK(c.alt_paths[0] == make_path({4, 1, 0, 5}));
  CHECK(c.alt_paths[1] == make_path({4, 1, 3, 5}));
  CHECK(c.alt_paths[2] == make_path({4, 3, 0, 5}));
  CHECK(c.size() == 4);
  CHECK(c.is_min(0));
  CHECK(!c.is_min(1));

  const Topology k3(3, {Edge{0, 1}, Edge{0, 2}, Edge{1, 2}});
  const HopMatrix mk = hop_matrix(k3);
  const CandidatePathSet ck = enumerate_candidates(k3, mk, 0, 1, 8);
  REQUIRE(ck.min_paths.size() == 1);
  CHECK(ck.min_paths[0] == make_path({0, 1}));
  REQUIRE(ck.alt_paths.size() == 1);
  CHECK(ck.alt_paths[0] == make_path({0, 2, 1}));

  CHECK_THROWS_AS(enumerate_candidates(t, m, 2, 2, 8), NoPathError);

  const Topology split(4, {Edge{0, 1}, Edge{2, 3}});
  const HopMatrix ms = hop_matrix(split);
  CHECK_THROWS_AS(enumerate_candidates(split, ms, 0, 3, 8), NoPathError);
}

TEST_CASE("candidate enumeration matches brute force on small graphs") {
  RandomStream rng(1234);
  for (int i = 0; i < 120; ++i) {
    const Topology g = random_connected_topology(rng, 2, 7);
    const HopMatrix m = hop_matrix(g);
    for (int s = 0; s < g.node_count(); ++s) {
      for (int d = 0; d < g.node_count(); ++d) {
        if (s == d) continue;
        const CandidatePathSet c = enumerate_candidates(g, m, s, d, 1000);
        const int min_hops = m.at(s, d);
        std::vector<Path> expect_min, expect_alt;
        for (const Path& p : all_simple_paths(g, s, d, min_hops + 1)) {
          if (p.hops() == min_hops) {
            expect_min.push_back(p);
          } else if (p.hops() == min_hops + 1) {
            expect_alt.push_back(p);
          }
        }
        CHECK(c.min_paths == expect_min);
        CHECK(c.alt_paths == expect_alt);
        REQUIRE(!c.min_paths.empty());
        for (const Path& p : c.min_paths) CHECK(p.hops() == min_hops);
        for (const Path& p : c.alt_paths) CHECK(p.hops() == min_hops + 1);
      }
    }
  }
}

TEST_CASE("candidate truncation keeps the lexicographic prefix") {
  const Topology t = example6();
  const HopMatrix m = hop_matrix(t);
  const CandidatePathSet full = enumerate_candidates(t, m, 4, 5, 8);
  const CandidatePathSet capped = enumerate_candidates(t, m, 4, 5, 2);
  REQUIRE(capped.alt_paths.size() == 2);
  CHECK(capped.alt_paths[0] == full.alt_paths[0]);
  CHECK(capped.alt_paths[1] == full.alt_paths[1]);
  CHECK_THROWS_AS(enumerate_candidates(t, m, 4, 5, 0), InvalidParamsError);
}

TEST_CASE("sample window evicts oldest and sums in order") {
  SampleWindow w(3);
  CHECK(w.mean() == 0.0);
  w.push(1.0);
  w.push(2.0);
  CHECK(w.size() == 2);
  CHECK(w.mean() == 1.5);
  w.push(3.0);
  w.push(4.0);  // evicts 1.0
  CHECK(w.size() == 3);
  CHECK(w[0] == 2.0);
  CHECK(w[2] == 4.0);
  CHECK(w.mean() == 3.0);
  CHECK_THROWS_AS(SampleWindow(0), InvalidParamsError);
}

// -- CBR ----------------------------------------------------------------------

TEST_CASE("cbr selection follows the credit comparison") {
  const Topology t = example6();
  const HopMatrix m = hop_matrix(t);
  const CandidatePathSet c = enumerate_candidates(t, m, 4, 5, 8);
  CbrParams params;

  std::vector<CbrState> states(4, CbrState(params));
  // min path 3.0 credits vs best alt 2.5: min wins at phi = 1
  states[0].credits = 3.0;
  states[1].credits = 2.5;
  states[2].credits = 1.0;
  states[3].credits = 1.0;
  CHECK(cbr_select(states, c, 1.0) == 0);

  // equal credits: the inclusive comparison keeps the minimum-hop path
  states[0].credits = 2.5;
  CHECK(cbr_select(states, c, 1.0) == 0);

  // alt overtakes
  states[0].credits = 2.0;
  states[1].credits = 3.0;
  CHECK(cbr_select(states, c, 1.0) == 1);

  // a smaller phi biases back toward the minimum-hop path
  CHECK(cbr_select(states, c, 0.5) == 0);

  // ties inside a class prefer the lower blocking probability
  states[1].credits = 2.0;
  states[2].credits = 2.0;
  states[3].credits = 2.0;
  cbr_update(states[1], false, params);  // bp > 0 on the first alt
  states[1].credits = 2.0;
  CHECK(cbr_select(states, c, 1.0) == 0);
  states[0].credits = 0.0;
  CHECK(cbr_select(states, c, 1.0) == 2);  // alt tie -> list order among clean windows
}

TEST_CASE("cbr updates reward, penalize and clamp") {
  CbrParams params;  // max_credits 5, window 20

  CbrState full(params);
  CHECK(full.credits == 5.0);
  cbr_update(full, true, params);
  CHECK(full.credits == 5.0);  // upper clamp

  CbrState mid(params);
  mid.credits = 3.0;
  cbr_update(mid, true, params);  // window {1}: blocking 0 -> +1
  CHECK(mid.credits == 4.0);
  CHECK(mid.blocking_prob() == 0.0);

  CbrState low(params);
  low.credits = 0.5;
  cbr_update(low, true, params);
  low.credits = 0.5;
  cbr_update(low, false, params);  // window {1,0}: blocking 0.5 -> -(1.5), floor 0
  CHECK(low.blocking_prob() == 0.5);
  CHECK(low.credits == 0.0);
}

TEST_CASE("cbr credits stay clamped under random update storms") {
  RandomStream rng(88);
  CbrParams params;
  params.max_credits = 5.0;
  params.window = 5;
  for (int run = 0; run < 1000; ++run) {
    CbrState state(params);
    for (int i = 0; i < 40; ++i) {
      cbr_update(state, rng.uniform01() < 0.5, params);
      CHECK(state.credits >= 0.0);
      CHECK(state.credits <= params.max_credits);
      CHECK(state.blocking_prob() >= 0.0);
      CHECK(state.blocking_prob() <= 1.0);
      CHECK(state.window.size() <= params.window);
    }
  }
}

TEST_CASE("cbr plain increment variant moves by one") {
  CbrParams params;
  params.plain_increments = true;
  CbrState state(params);
  state.credits = 2.0;
  cbr_update(state, false, params);
  CHECK(state.credits == 1.0);
  cbr_update(state, true, params);
  CHECK(state.credits == 2.0);
}

// -- QBR ----------------------------------------------------------------------

TEST_CASE("qbr quality mapping") {
  CHECK(qbr_quality(true, 2.0, 1.0) == 1.0);
  CHECK(qbr_quality(true, 0.6, 1.0) == doctest::Approx(0.6));
  CHECK(qbr_quality(false, 0.0, 1.0) == -1.0);
  CHECK(qbr_quality(false, 0.4, 1.0) == doctest::Approx(-0.6));
  CHECK(qbr_quality(true, 1.0, 1.0) == 1.0);  // boundary: exactly enough residual
  CHECK_THROWS_AS(qbr_quality(true, 1.0, 0.0), InvalidRequestError);
  CHECK_THROWS_AS(qbr_quality(true, 1.0, -2.0), InvalidRequestError);
}

TEST_CASE("qbr moving average reproduces the worked sequence") {
  QbrParams params;
  params.window = 5;
  QbrState state(params);
  CHECK(state.average_quality() == 0.0);

  for (double q : {0.0, 0.6, -1.0, -0.1, 1.0}) qbr_update(state, q);
  CHECK(state.average_quality() == 0.1);  // exact

  qbr_update(state, 1.0);  // evicts the leading 0
  CHECK(state.average_quality() == 0.3);  // exact

  CHECK_THROWS_AS(qbr_update(state, 1.5), InvalidQualityError);
  CHECK_THROWS_AS(qbr_update(state, -1.01), InvalidQualityError);
}

TEST_CASE("qbr selection takes the best average, min-hop on ties") {
  const Topology t = example6();
  const HopMatrix m = hop_matrix(t);
  const CandidatePathSet c = enumerate_candidates(t, m, 4, 5, 8);
  QbrParams params;
  params.window = 5;

  std::vector<QbrState> states(4, QbrState(params));
  qbr_update(states[0], 0.3);
  qbr_update(states[1], 0.1);
  CHECK(qbr_select(states, c) == 0);

  states.assign(4, QbrState(params));
  qbr_update(states[0], 0.1);
  qbr_update(states[1], 0.3);
  CHECK(qbr_select(states, c) == 1);

  states.assign(4, QbrState(params));  // all averages equal -> first min-hop path
  CHECK(qbr_select(states, c) == 0);
}

TEST_CASE("qbr state stays inside the unit interval") {
  RandomStream rng(4242);
  QbrParams params;
  params.window = 4;
  for (int run = 0; run < 1000; ++run) {
    QbrState state(params);
    for (int i = 0; i < 24; ++i) {
      const bool accepted = rng.uniform01() < 0.6;
      const double residual = rng.uniform(0.0, 3.0);
      const double requested = rng.uniform(0.1, 2.0);
      const double q = qbr_quality(accepted, accepted ? residual : residual * 0.3, requested);
      CHECK(q >= -1.0);
      CHECK(q <= 1.0);
      qbr_update(state, q);
      CHECK(state.average_quality() >= -1.0);
      CHECK(state.average_quality() <= 1.0);
      CHECK(state.window.size() <= params.window);
    }
  }
}

// -- PSR ----------------------------------------------------------------------

TEST_CASE("psr sampling inverts the cumulative proportions") {
  PsrParams params;
  PsrState state(1, 3, params);
  // uniform proportions from the constructor: thirds
  CHECK(psr_select(state, 0.0) == 0);
  CHECK(psr_select(state, 0.34) == 1);
  CHECK(psr_select(state, 0.99) == 2);
  CHECK(state.record(0).alpha == doctest::Approx(1.0 / 3));

  // single eligible path wins every draw
  psr_update(state, 1, false);
  psr_update(state, 1, false);
  psr_update(state, 1, false);
  psr_update(state, 1, false);
  psr_update(state, 1, false);  // gamma_hat=5 rejections -> ineligible
  psr_update(state, 2, false);
  psr_update(state, 2, false);
  psr_update(state, 2, false);
  psr_update(state, 2, false);
  psr_update(state, 2, false);
  CHECK(!state.record(1).eligible);
  CHECK(!state.record(2).eligible);
  CHECK(psr_select(state, 0.999) == 0);
  CHECK(psr_select(state, 0.5) == 0);
}

TEST_CASE("psr resets the cycle when every path is ineligible") {
  PsrParams params;
  params.gamma_hat = 1;
  params.observation_period_cycles = 100;  // keep the period out of the way
  PsrState state(1, 2, params);
  psr_update(state, 0, false);
  psr_update(state, 1, false);
  CHECK(!state.record(0).eligible);
  CHECK(!state.record(1).eligible);
  CHECK(state.cycles_completed() == 0);

  const int chosen = psr_select(state, 0.0);  // forces the cycle reset first
  CHECK(chosen == 0);
  CHECK(state.cycles_completed() == 1);
  CHECK(state.record(0).eligible);
  CHECK(state.record(1).eligible);
  CHECK(state.record(0).blocked_this_cycle == 0);
  CHECK(state.record(1).blocked_this_cycle == 0);
}

TEST_CASE("psr period end adjusts alternative allowances") {
  PsrParams params;  // gamma_hat 5, psi 0.9
  params.observation_period_cycles = 1;
  PsrState state(1, 2, params);

  // period 1: alternative blocks worse than the best minimum-hop path
  for (int i = 0; i < 15; ++i) psr_update(state, 0, true);
  for (int i = 0; i < 5; ++i) psr_update(state, 0, false);   // b_min = 0.25
  for (int i = 0; i < 5; ++i) psr_update(state, 1, false);   // b_alt = 1.0 > b*
  CHECK(!state.record(0).eligible);
  CHECK(!state.record(1).eligible);
  psr_select(state, 0.0);
  CHECK(state.record(1).gamma == 4);           // demoted
  CHECK(state.record(0).gamma == 5);           // minimum-hop allowance never moves
  CHECK(state.record(0).observed_attempts == 0);  // period counters reset

  // period 2: alternative clearly better than psi * b*
  for (int i = 0; i < 5; ++i) psr_update(state, 0, false);            // b_min = 1.0
  for (int i = 0; i < 6; ++i) psr_update(state, 1, true);
  for (int i = 0; i < 4; ++i) psr_update(state, 1, false);            // b_alt = 0.4 < 0.9
  psr_select(state, 0.0);
  CHECK(state.record(1).gamma == 5);  // promoted, capped at gamma_hat
}

TEST_CASE("psr gamma never leaves [1, gamma_hat]") {
  PsrParams params;
  params.gamma_hat = 2;
  params.observation_period_cycles = 1;
  PsrState state(1, 2, params);
  for (int period = 0; period < 4; ++period) {
    for (int i = 0; i < 2; ++i) psr_update(state, 0, true);
    for (int i = 0; i < 2; ++i) psr_update(state, 0, false);
    for (int i = 0; i < 2; ++i) psr_update(state, 1, false);  // alt always worse
    psr_select(state, 0.0);
    CHECK(state.record(1).gamma >= 1);
    CHECK(state.record(1).gamma <= params.gamma_hat);
  }
  CHECK(state.record(1).gamma == 1);  // floored after repeated demotion
}

TEST_CASE("psr equalizes minimum-hop proportions by inverse blocking") {
  PsrParams params;
  params.gamma_hat = 1;
  params.observation_period_cycles = 1;
  PsrState state(2, 2, params);
  CHECK(state.record(0).alpha == 0.5);
  CHECK(state.record(1).alpha == 0.5);

  for (int i = 0; i < 9; ++i) psr_update(state, 0, true);
  psr_update(state, 0, false);  // b0 = 0.1
  for (int i = 0; i < 8; ++i) psr_update(state, 1, true);
  psr_update(state, 1, false);
  psr_update(state, 1, false);  // b1 = 0.2
  psr_select(state, 0.0);

  CHECK(state.record(0).alpha == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(state.record(1).alpha == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("psr proportions always sum to one") {
  RandomStream rng(555);
  for (int run = 0; run < 1000; ++run) {
    PsrParams params;
    params.gamma_hat = 1 + rng.uniform_int(4);
    params.observation_period_cycles = 1 + rng.uniform_int(3);
    const int min_count = 1 + rng.uniform_int(3);
    const int total = min_count + rng.uniform_int(4);
    PsrState state(min_count, total, params);

    for (int step = 0; step < 120; ++step) {
      const int idx = psr_select(state, rng.uniform01());
      REQUIRE(idx >= 0);
      REQUIRE(idx < total);
      CHECK(state.record(idx).eligible);
      psr_update(state, idx, rng.uniform01() < 0.5);

      double alpha_sum = 0.0;
      for (int i = 0; i < total; ++i) {
        alpha_sum += state.record(i).alpha;
        CHECK(state.record(i).gamma >= 1);
        CHECK(state.record(i).gamma <= params.gamma_hat);
        if (i < min_count) CHECK(state.record(i).gamma == params.gamma_hat);
      }
      CHECK(alpha_sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("psr sampling frequencies follow the proportions") {
  // Build proportions {0.5, 0.3, 0.2} through a period-end recomputation,
  // then check a chi-square fit over a hundred thousand draws.
  PsrParams params;
  params.gamma_hat = 1;
  params.observation_period_cycles = 1;
  PsrState state(3, 3, params);
  for (int i = 0; i < 18; ++i) psr_update(state, 0, true);
  for (int i = 0; i < 12; ++i) psr_update(state, 0, false);  // b = 0.4
  for (int i = 0; i < 10; ++i) psr_update(state, 1, true);
  for (int i = 0; i < 20; ++i) psr_update(state, 1, false);  // b = 2/3
  for (int i = 0; i < 30; ++i) psr_update(state, 2, false);  // b = 1

  CHECK(psr_select(state, 0.6) == 1);  // reset happens first; cumulative 0.5 | 0.8
  CHECK(state.record(0).alpha == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(state.record(1).alpha == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(state.record(2).alpha == doctest::Approx(0.2).epsilon(1e-12));

  RandomStream rng(31337);
  long long counts[3] = {0, 0, 0};
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    ++counts[psr_select(state, rng.uniform01())];
  }
  const double expected[3] = {0.5 * draws, 0.3 * draws, 0.2 * draws};
  double chi2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double diff = counts[i] - expected[i];
    chi2 += diff * diff / expected[i];
  }
  CHECK(chi2 < 13.82);  // 99.9th percentile of chi-square with 2 dof
}

TEST_CASE("psr select is a pure function of state and draw") {
  PsrParams params;
  params.gamma_hat = 1;
  params.observation_period_cycles = 1;
  PsrState a(1, 3, params);
  psr_update(a, 0, false);
  psr_update(a, 1, false);
  psr_update(a, 2, false);
  PsrState b = a;
  CHECK(psr_select(a, 0.77) == psr_select(b, 0.77));
  for (int i = 0; i < 3; ++i) {
    CHECK(a.record(i).alpha == b.record(i).alpha);
    CHECK(a.record(i).eligible == b.record(i).eligible);
    CHECK(a.record(i).gamma == b.record(i).gamma);
  }
  CHECK(a.cycles_completed() == b.cycles_completed());
}

TEST_CASE("psr rejects unknown paths and bad parameters") {
  PsrParams params;
  PsrState state(1, 2, params);
  CHECK_THROWS_AS(psr_update(state, 2, true), InvalidPathError);
  CHECK_THROWS_AS(psr_update(state, -1, true), InvalidPathError);
  CHECK_THROWS_AS(PsrState(0, 2, params), InvalidParamsError);
  PsrParams bad;
  bad.psi = 0.0;
  CHECK_THROWS_AS(PsrState(1, 2, bad), InvalidParamsError);
}

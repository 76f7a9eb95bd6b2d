#include <doctest.h>

#include "fixtures.hpp"
#include "mqms/matching.hpp"
#include "mqms/policies.hpp"

using namespace mqms;
using fixtures::conn;

TEST_CASE("policy names") {
  for (const auto kind : {PolicyKind::mwm, PolicyKind::mm, PolicyKind::heuristic})
    CHECK(policy_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(policy_kind_from_string("lcq"), std::invalid_argument);
}

TEST_CASE("mwm on the three-queue full cycle instance") {
  RandomStream rng(1);
  const QueueVector x{3, 2, 5};
  const auto c = fixtures::cycle_instance();
  const Matching m = decide(PolicyKind::mwm, x, c, rng);
  CHECK(mw_index(x, c, m) == 10);
  for (int q = 0; q < 3; ++q) CHECK(m.server_of(q) >= 0);
  CHECK(is_mwm_decision(x, c, m));
  CHECK(is_mwm_decision(x, c, m, DecisionOracle::enumeration));
}

TEST_CASE("mwm never serves empty or disconnected queues") {
  RandomStream rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    QueueVector x(5);
    for (auto& v : x) v = static_cast<Count>(rng.uniform_index(3));
    ConnectivityMatrix c(5, 3);
    for (int i = 0; i < 5; ++i)
      for (int k = 0; k < 3; ++k) c.set(i, k, rng.bernoulli(0.5));
    const Matching m = decide(PolicyKind::mwm, x, c, rng);
    for (int i = 0; i < 5; ++i)
      for (int k = 0; k < 3; ++k)
        if (m.at(i, k)) CHECK((x[i] > 0 && c.at(i, k)));
  }
}

TEST_CASE("mm") {
  RandomStream rng(1);
  CHECK(decide(PolicyKind::mm, {4, 4}, conn({"00", "00"}), rng).size() == 0);
  CHECK(decide(PolicyKind::mm, {0, 0}, conn({"10", "01"}), rng).size() == 2);
}

TEST_CASE("heuristic") {
  SUBCASE("K=1 serves the longest connected queue") {
    RandomStream rng(9);
    for (int trial = 0; trial < 500; ++trial) {
      QueueVector x(6);
      for (auto& v : x) v = static_cast<Count>(rng.uniform_index(10));
      ConnectivityMatrix c(6, 1);
      for (int i = 0; i < 6; ++i) c.set(i, 0, rng.bernoulli(0.5));
      int best = 0;
      for (int i = 1; i < 6; ++i)
        if (c.at(i, 0) * x[i] > c.at(best, 0) * x[best]) best = i;
      const Matching h = heuristic_matching(x, c, rng);
      CHECK(h.server_of(best) == 0);
      CHECK(h.size() == 1);
      RandomStream unused(0);
      const Matching w = decide(PolicyKind::mwm, x, c, unused);
      if (c.at(best, 0) * x[best] > 0) CHECK(w.server_of(best) == 0);
    }
  }
  SUBCASE("more servers than queues leaves the rest unassigned") {
    RandomStream rng(2);
    const Matching m = heuristic_matching({1, 2}, conn({"1111", "1111"}), rng);
    CHECK(m.is_valid());
    CHECK(m.size() == 2);
  }
  SUBCASE("a server with only zero weights is still assigned") {
    RandomStream rng(2);
    const Matching m = heuristic_matching({0, 0}, conn({"0", "0"}), rng);
    CHECK(m.server_of(0) == 0);
  }
  SUBCASE("outputs are valid and sometimes not maximum-weight") {
    RandomStream rng(11);
    int suboptimal = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      QueueVector x(3);
      for (auto& v : x) v = static_cast<Count>(rng.uniform_index(6));
      ConnectivityMatrix c(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) c.set(i, k, rng.bernoulli(0.5));
      const Matching m = decide(PolicyKind::heuristic, x, c, rng);
      REQUIRE(m.is_valid());
      suboptimal += is_mwm_decision(x, c, m, DecisionOracle::enumeration) ? 0 : 1;
    }
    CHECK(suboptimal > 0);
  }
  SUBCASE("consumes the policy stream deterministically") {
    RandomStream a(5), b(5);
    const QueueVector x{3, 3, 3};
    const auto c = conn({"111", "111", "111"});
    for (int i = 0; i < 50; ++i) CHECK(heuristic_matching(x, c, a) == heuristic_matching(x, c, b));
  }
}

TEST_CASE("is_mwm_decision") {
  const QueueVector x{3, 2, 5};
  const auto c = fixtures::cycle_instance();
  CHECK_FALSE(is_mwm_decision(x, c, Matching(3, 3)));
  CHECK(is_mwm_decision({0, 0, 0}, c, Matching(3, 3)));
}

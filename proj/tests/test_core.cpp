#include <doctest.h>

#include "fixtures.hpp"
#include "mqms/core.hpp"

using namespace mqms;
using fixtures::conn;
using fixtures::match;
using fixtures::service;

TEST_CASE("matching validity") {
  CHECK(match({"10", "01"}).is_valid());
  CHECK(match({"00", "00"}).is_valid());
  CHECK_FALSE(match({"11", "00"}).is_valid());
  CHECK_FALSE(match({"10", "10"}).is_valid());
  CHECK(match({"010", "000"}).server_of(0) == 1);
  CHECK(match({"010", "000"}).server_of(1) == -1);
}

TEST_CASE("intermediate state") {
  const QueueVector x{3, 2, 5};
  SUBCASE("serving queues 2 and 3") {
    CHECK(intermediate_state(x, fixtures::cycle_instance(), match({"001", "010", "100"})) == QueueVector{3, 1, 4});
  }
  SUBCASE("empty matching leaves x") {
    CHECK(intermediate_state(x, fixtures::cycle_instance(), Matching(3, 3)) == x);
  }
  SUBCASE("clamp at zero") {
    CHECK(intermediate_state({0, 1}, conn({"10", "01"}), match({"10", "01"})) == QueueVector{0, 0});
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(intermediate_state({1, 2}, fixtures::cycle_instance(), Matching(3, 3)), std::invalid_argument);
  }
}

TEST_CASE("step") {
  SUBCASE("perfect service, no arrivals") {
    const auto c = fixtures::cycle_instance();
    CHECK(step({3, 2, 5}, c, match({"001", "010", "100"}), service({"111", "111", "111"}), {0, 0, 0}) ==
          QueueVector{3, 1, 4});
  }
  SUBCASE("failed service keeps the packet") {
    CHECK(step({1}, conn({"1"}), match({"1"}), service({"0"}), {1}) == QueueVector{2});
  }
  SUBCASE("clamp then arrival") {
    CHECK(step({0}, conn({"1"}), match({"1"}), service({"1"}), {1}) == QueueVector{1});
  }
  SUBCASE("disconnected edge serves nothing") {
    CHECK(step({4, 4}, conn({"01", "00"}), match({"10", "01"}), service({"11", "11"}), {0, 2}) ==
          QueueVector{4, 6});
  }
  SUBCASE("arrival vector size mismatch") {
    CHECK_THROWS_AS(step({1}, conn({"1"}), match({"1"}), service({"1"}), {1, 1}), std::invalid_argument);
  }
}

TEST_CASE("step properties on random inputs") {
  RandomStream rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(4));
    const int k = 1 + static_cast<int>(rng.uniform_index(4));
    QueueVector x(n);
    ArrivalVector a(n);
    for (auto& v : x) v = static_cast<Count>(rng.uniform_index(5));
    for (auto& v : a) v = static_cast<Count>(rng.uniform_index(3));
    ConnectivityMatrix c(n, k);
    ServiceOutcomeMatrix q(n, k);
    Matching m(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) {
        c.set(i, j, rng.bernoulli(0.5));
        q.set(i, j, rng.bernoulli(0.5));
      }
    for (int i = 0, j = 0; i < n && j < k; ++i, ++j) m.set(i, j, rng.bernoulli(0.7));
    const QueueVector next = step(x, c, m, q, a);
    const QueueVector mid = intermediate_state(x, c, m);
    const ServiceOutcomeMatrix all(n, k, true);
    CHECK(step(x, c, m, all, ArrivalVector(n, 0)) == mid);
    for (int i = 0; i < n; ++i) {
      CHECK(next[i] >= a[i]);
      CHECK(mid[i] <= x[i]);
      CHECK(mid[i] >= x[i] - 1);
    }
  }
}

TEST_CASE("config validation") {
  StochasticConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.connectivity_p = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.arrival_rate = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.arrival_kind = ArrivalKind::binomial10;
  CHECK_NOTHROW(cfg.validate());
  cfg.arrival_rate = 10.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.n_servers = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(arrival_kind_from_string("binomial10") == ArrivalKind::binomial10);
  CHECK_THROWS_AS(arrival_kind_from_string("poisson"), std::invalid_argument);
}

namespace {

StochasticConfig make(int n, int k, double p, ArrivalKind kind, double rate, double q) {
  StochasticConfig cfg;
  cfg.n_queues = n;
  cfg.n_servers = k;
  cfg.connectivity_p = p;
  cfg.arrival_kind = kind;
  cfg.arrival_rate = rate;
  cfg.service_q = q;
  return cfg;
}

}  // namespace

TEST_CASE("sampling extremes") {
  RandomStream rng(7);
  CHECK(sample_connectivity(rng, make(3, 2, 0.0, ArrivalKind::bernoulli, 0, 1)).count() == 0);
  CHECK(sample_connectivity(rng, make(3, 2, 1.0, ArrivalKind::bernoulli, 0, 1)).count() == 6);
  CHECK(sample_service(rng, make(3, 2, 0.5, ArrivalKind::bernoulli, 0, 1.0)).count() == 6);
  CHECK(sample_service(rng, make(3, 2, 0.5, ArrivalKind::bernoulli, 0, 0.0)).count() == 0);
  CHECK(sample_arrivals(rng, make(3, 2, 0.5, ArrivalKind::bernoulli, 0.0, 1)) == ArrivalVector{0, 0, 0});
  CHECK(sample_arrivals(rng, make(3, 2, 0.5, ArrivalKind::binomial10, 10.0, 1)) == ArrivalVector{10, 10, 10});
  CHECK_THROWS_AS(sample_arrivals(rng, make(3, 2, 0.5, ArrivalKind::bernoulli, 2.0, 1)), std::invalid_argument);
}

TEST_CASE("sampling moments") {
  constexpr int kSamples = 100'000;
  SUBCASE("connectivity p=0.5") {
    RandomStream rng(derive_seed(1, 2));
    const auto cfg = make(2, 2, 0.5, ArrivalKind::bernoulli, 0, 1);
    int ones[4] = {};
    for (int s = 0; s < kSamples; ++s) {
      const auto c = sample_connectivity(rng, cfg);
      for (int e = 0; e < 4; ++e) ones[e] += c.at(e / 2, e % 2);
    }
    for (const int v : ones) {
      CHECK(v / double(kSamples) >= 0.49);
      CHECK(v / double(kSamples) <= 0.51);
    }
  }
  SUBCASE("binomial10 mean 2") {
    RandomStream rng(derive_seed(1, 1));
    const auto cfg = make(3, 1, 0.5, ArrivalKind::binomial10, 2.0, 1);
    Count total[3] = {};
    for (int s = 0; s < kSamples; ++s) {
      const auto a = sample_arrivals(rng, cfg);
      for (int n = 0; n < 3; ++n) {
        CHECK(a[n] <= kBinomialTrials);
        total[n] += a[n];
      }
    }
    for (const Count t : total) {
      CHECK(t / double(kSamples) >= 1.97);
      CHECK(t / double(kSamples) <= 2.03);
    }
  }
  SUBCASE("service q=0.8") {
    RandomStream rng(derive_seed(1, 3));
    const auto cfg = make(1, 1, 0.5, ArrivalKind::bernoulli, 0, 0.8);
    int ones = 0;
    for (int s = 0; s < kSamples; ++s) ones += sample_service(rng, cfg).count();
    CHECK(ones / double(kSamples) >= 0.79);
    CHECK(ones / double(kSamples) <= 0.81);
  }
}

TEST_CASE("streams are reproducible and independent") {
  const auto cfg = make(4, 3, 0.5, ArrivalKind::binomial10, 3.0, 0.5);
  ExogenousStreams a(42), b(42);
  for (int t = 0; t < 100; ++t) {
    CHECK(sample_connectivity(a.connectivity, cfg) == sample_connectivity(b.connectivity, cfg));
    CHECK(sample_arrivals(a.arrivals, cfg) == sample_arrivals(b.arrivals, cfg));
    CHECK(sample_service(a.service, cfg) == sample_service(b.service, cfg));
  }
  CHECK(derive_seed(42, 1) != derive_seed(42, 2));
  CHECK(derive_seed(42, 1, 0) != derive_seed(42, 1, 1));
  CHECK(derive_seed(42, 1) != derive_seed(43, 1));

  // Drawing from the policy stream leaves the exogenous streams untouched.
  ExogenousStreams c(42), d(42);
  RandomStream policy(42, StreamTag::policy);
  for (int t = 0; t < 100; ++t) {
    policy.next();
    CHECK(sample_arrivals(c.arrivals, cfg) == sample_arrivals(d.arrivals, cfg));
  }
}

TEST_CASE("uniform index") {
  RandomStream rng(5);
  int counts[3] = {};
  for (int i = 0; i < 30000; ++i) ++counts[rng.uniform_index(3)];
  for (const int c : counts) CHECK(std::abs(c - 10000) < 400);
  CHECK_THROWS_AS(rng.uniform_index(0), std::invalid_argument);
}

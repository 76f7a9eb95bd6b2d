#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "mqms/order.hpp"
#include "mqms/sim.hpp"

using namespace mqms;

namespace {

StochasticConfig system(int n, int k, double p, ArrivalKind kind, double rate, double q) {
  StochasticConfig cfg;
  cfg.n_queues = n;
  cfg.n_servers = k;
  cfg.connectivity_p = p;
  cfg.arrival_kind = kind;
  cfg.arrival_rate = rate;
  cfg.service_q = q;
  return cfg;
}

SimulationOptions short_run(std::int64_t horizon = 5000, int replications = 3) {
  SimulationOptions o;
  o.horizon = horizon;
  o.warmup = horizon / 10;
  o.replications = replications;
  return o;
}

}  // namespace

TEST_CASE("options validation") {
  SimulationOptions o;
  CHECK_NOTHROW(o.validate());
  o.warmup = o.horizon;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
  o = {};
  o.warmup = -1;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
  o = {};
  o.replications = 0;
  CHECK_THROWS_AS(o.validate(), std::invalid_argument);
}

TEST_CASE("zero arrivals keep the system empty") {
  const auto r = run_replication(system(4, 2, 0.5, ArrivalKind::bernoulli, 0.0, 0.8), PolicyKind::mwm, short_run(), 1);
  CHECK(r.mean_total_occupancy == 0.0);
  CHECK(r.max_observed_total == 0);
  CHECK(r.slots == 5000);
  CHECK_FALSE(r.diverged);
}

TEST_CASE("no connectivity diverges") {
  const auto cfg = system(2, 2, 0.0, ArrivalKind::bernoulli, 0.5, 1.0);
  const auto r = run_replication(cfg, PolicyKind::mwm, short_run(4000), 1);
  CHECK(r.diverged);
  CHECK(r.drift > 0.5);
  SimulationOptions o = short_run(100000);
  o.divergence_threshold = 200;
  const auto stopped = run_replication(cfg, PolicyKind::mwm, o, 1);
  CHECK(stopped.diverged);
  CHECK(stopped.slots < 1000);
  CHECK(stopped.max_observed_total > 200);
}

TEST_CASE("replications are deterministic") {
  const auto cfg = system(8, 4, 0.2, ArrivalKind::binomial10, 0.1, 0.8);
  for (const auto policy : {PolicyKind::mwm, PolicyKind::mm, PolicyKind::heuristic}) {
    const auto a = run_replication(cfg, policy, short_run(), 77);
    const auto b = run_replication(cfg, policy, short_run(), 77);
    CHECK(a.mean_total_occupancy == b.mean_total_occupancy);
    CHECK(a.max_observed_total == b.max_observed_total);
    CHECK(a.drift == b.drift);
  }
  const auto c = run_replication(cfg, PolicyKind::mwm, short_run(), 78);
  CHECK(c.mean_total_occupancy != run_replication(cfg, PolicyKind::mwm, short_run(), 77).mean_total_occupancy);
}

TEST_CASE("common random numbers and conservation") {
  const auto cfg = system(5, 3, 0.4, ArrivalKind::binomial10, 0.3, 0.7);
  struct Slot {
    ConnectivityMatrix c;
    ServiceOutcomeMatrix q;
    ArrivalVector a;
  };
  std::vector<Slot> slots[3];
  int i = 0;
  for (const auto policy : {PolicyKind::mwm, PolicyKind::mm, PolicyKind::heuristic}) {
    run_replication(cfg, policy, short_run(2000), 9, [&](const SlotRecord& r) {
      slots[i].push_back({r.c, r.q, r.a});
      Count served = 0;
      for (int n = 0; n < r.c.rows(); ++n)
        for (int k = 0; k < r.c.cols(); ++k)
          if (r.c.at(n, k) && r.m.at(n, k) && r.q.at(n, k) && r.x_prev[n] > 0) ++served;
      CHECK(cost_total(r.x) - cost_total(r.x_prev) == cost_total(r.a) - served);
      for (const Count v : r.x) CHECK(v >= 0);
      CHECK(r.m.is_valid());
    });
    ++i;
  }
  REQUIRE(slots[0].size() == 2000);
  for (int p = 1; p < 3; ++p) {
    REQUIRE(slots[p].size() == slots[0].size());
    for (std::size_t t = 0; t < slots[0].size(); ++t) {
      CHECK(slots[p][t].c == slots[0][t].c);
      CHECK(slots[p][t].q == slots[0][t].q);
      CHECK(slots[p][t].a == slots[0][t].a);
    }
  }
}

TEST_CASE("student-t interval") {
  const auto a = student_t_interval({1, 2, 3, 4});
  CHECK(a.mean == doctest::Approx(2.5));
  CHECK(a.half_width == doctest::Approx(2.054260256760879).epsilon(1e-12));
  const auto b = student_t_interval({0.5, 0.25, 1.75, -0.5, 2.0});
  CHECK(b.mean == doctest::Approx(0.8));
  CHECK(b.half_width == doctest::Approx(1.3059625730305675).epsilon(1e-12));
  CHECK(student_t_interval({3.0}).half_width == 0.0);
  CHECK(student_t_interval({3.0}).mean == 3.0);
  CHECK(student_t_interval({2.0, 2.0, 2.0}).half_width == 0.0);
}

TEST_CASE("sweep") {
  const auto base = system(4, 2, 0.5, ArrivalKind::bernoulli, 0.0, 0.9);
  SUBCASE("single point degenerates to one replication") {
    const auto options = short_run(3000, 1);
    const auto points = sweep(base, {PolicyKind::heuristic}, {0.2}, options, 5);
    REQUIRE(points.size() == 1);
    auto cfg = base;
    cfg.arrival_rate = 0.2;
    const auto r = run_replication(cfg, PolicyKind::heuristic, options, replication_seed(5, 0));
    CHECK(points[0].mean == r.mean_total_occupancy);
    CHECK(points[0].ci_half_width == 0.0);
    CHECK(points[0].n_replications == 1);
  }
  SUBCASE("layout and determinism") {
    const std::vector<PolicyKind> policies{PolicyKind::mwm, PolicyKind::mm};
    const std::vector<double> rates{0.0, 0.1, 0.2};
    const auto a = sweep(base, policies, rates, short_run(), 11);
    const auto b = sweep(base, policies, rates, short_run(), 11);
    REQUIRE(a.size() == 6);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].policy == policies[i / 3]);
      CHECK(a[i].arrival_rate == rates[i % 3]);
      CHECK(a[i].replication_means == b[i].replication_means);
      CHECK(a[i].ci_half_width >= 0.0);
    }
    CHECK(a[0].mean == 0.0);
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(sweep(base, {}, {0.1}, short_run(), 1), std::invalid_argument);
    CHECK_THROWS_AS(sweep(base, {PolicyKind::mwm}, {}, short_run(), 1), std::invalid_argument);
    CHECK_THROWS_AS(sweep(base, {PolicyKind::mwm}, {1.5}, short_run(), 1), std::invalid_argument);
  }
}

TEST_CASE("paired comparison") {
  const auto base = system(4, 2, 0.5, ArrivalKind::bernoulli, 0.0, 0.9);
  const auto same = paired_compare(base, PolicyKind::heuristic, PolicyKind::heuristic, 0.2, short_run(), 3);
  CHECK(same.mean_diff == 0.0);
  CHECK(same.ci_half_width == 0.0);
  for (const double d : same.differences) CHECK(d == 0.0);
  const auto d = paired_difference({3, 5}, {1, 2}, 0.4);
  CHECK(d.differences == std::vector<double>{2, 3});
  CHECK(d.mean_diff == 2.5);
  CHECK_THROWS_AS(paired_difference({1}, {1, 2}), std::invalid_argument);
}

TEST_CASE("stability point") {
  SUBCASE("no service diverges at the first positive rate") {
    const auto base = system(3, 2, 0.5, ArrivalKind::bernoulli, 0.0, 0.0);
    const auto s = stability_point(base, PolicyKind::mwm, {0.1, 0.2, 0.3}, short_run(4000, 2), 1);
    REQUIRE(s.lambda_star);
    CHECK(*s.lambda_star == 0.1);
    CHECK(s.bracketed);
    CHECK(s.points.size() == 1);
  }
  SUBCASE("not bracketed") {
    const auto base = system(3, 2, 0.5, ArrivalKind::bernoulli, 0.0, 1.0);
    const auto s = stability_point(base, PolicyKind::mwm, {0.0, 0.05}, short_run(4000, 2), 1);
    CHECK_FALSE(s.lambda_star);
    CHECK_FALSE(s.bracketed);
    CHECK(s.points.size() == 2);
  }
  SUBCASE("grid must increase") {
    const auto base = system(3, 2, 0.5, ArrivalKind::bernoulli, 0.0, 1.0);
    CHECK_THROWS_AS(stability_point(base, PolicyKind::mwm, {0.2, 0.1}, short_run(), 1), std::invalid_argument);
    CHECK_THROWS_AS(stability_point(base, PolicyKind::mwm, {}, short_run(), 1), std::invalid_argument);
  }
  SUBCASE("more servers never shrink the stability region") {
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(0.05 * i);
    double previous = 0.0;
    for (int k = 1; k <= 3; ++k) {
      const auto s = stability_point(system(4, k, 0.5, ArrivalKind::bernoulli, 0.0, 1.0), PolicyKind::mwm, grid,
                                     short_run(20000, 2), 4);
      const double star = s.lambda_star.value_or(2.0);
      CHECK(star >= previous);
      previous = star;
    }
  }
}

TEST_CASE("little's law") {
  SweepPoint p;
  p.arrival_rate = 0.5;
  p.mean = 4.0;
  CHECK(littles_law_delay(p, 8).value() == doctest::Approx(1.0));
  p.arrival_rate = 0.0;
  CHECK_FALSE(littles_law_delay(p, 8));
}

TEST_CASE("parallel_for") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, [&](int i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  parallel_for(0, [](int) { FAIL("must not run"); });
  CHECK_THROWS_AS(parallel_for(10, [](int i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

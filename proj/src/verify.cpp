#include "mqms/verify.hpp"

#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mqms/balancing.hpp"
#include "mqms/coupling.hpp"
#include "mqms/matching.hpp"
#include "mqms/order.hpp"

namespace mqms {

void VerifyOptions::validate() const {
  if (max_n < 1 || max_k < 1) throw std::invalid_argument("instance bounds must be >= 1");
  const int s = std::max(max_n, max_k);
  if (count_matchings(s, s) > kEnumerationGuard)
    throw std::invalid_argument("instance bounds exceed the enumeration guard");
  if (trials < 0 || permutation_trials < 0 || coupling_seeds < 0 || coupling_horizon < 0)
    throw std::invalid_argument("trial counts must be non-negative");
}

namespace {

enum : std::uint64_t {
  kOracleTag = 11,
  kIncreaseTag = 12,
  kEquivalenceTag = 13,
  kPermutationTag = 14,
  kCouplingTag = 15,
};

struct Instance {
  QueueVector x;
  ConnectivityMatrix c;
  Matching m;
};

int draw_size(RandomStream& rng, int max) { return 1 + static_cast<int>(rng.uniform_index(max)); }

Matching random_matching(RandomStream& rng, int n, int k) {
  std::vector<int> servers(static_cast<std::size_t>(k));
  std::iota(servers.begin(), servers.end(), 0);
  for (int i = k - 1; i > 0; --i) std::swap(servers[i], servers[rng.uniform_index(i + 1)]);
  Matching m(n, k);
  std::size_t next = 0;
  for (int q = 0; q < n && next < servers.size(); ++q)
    if (rng.uniform_index(3) != 0) m.set(q, servers[next++], true);
  return m;
}

Instance random_instance(RandomStream& rng, int n, int k, Count max_x) {
  Instance in{QueueVector(static_cast<std::size_t>(n)), ConnectivityMatrix(n, k), Matching()};
  for (auto& v : in.x) v = static_cast<Count>(rng.uniform_index(static_cast<std::uint64_t>(max_x) + 1));
  for (int q = 0; q < n; ++q)
    for (int s = 0; s < k; ++s) in.c.set(q, s, rng.bernoulli(0.5));
  in.m = random_matching(rng, n, k);
  return in;
}

std::string dump(const std::vector<Count>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

std::string dump(const BinaryMatrix& b) {
  std::ostringstream os;
  os << '[';
  for (int r = 0; r < b.rows(); ++r) {
    os << (r ? ";" : "");
    for (int k = 0; k < b.cols(); ++k) os << (b.at(r, k) ? '1' : '0');
  }
  os << ']';
  return os.str();
}

std::string dump(const WeightMatrix& w) {
  std::ostringstream os;
  os << '[';
  for (int r = 0; r < w.rows(); ++r) {
    os << (r ? ";" : "");
    for (int k = 0; k < w.cols(); ++k) os << (k ? " " : "") << w.at(r, k);
  }
  os << ']';
  return os.str();
}

std::string dump(const Instance& in) { return "x=" + dump(in.x) + " c=" + dump(in.c) + " m=" + dump(in.m); }

void fail(SuiteResult& r, const std::string& example) {
  ++r.failures;
  r.passed = false;
  if (r.counterexample.empty()) r.counterexample = example;
}

bool is_max(const Instance& in) {
  return mw_index(in.x, in.c, in.m) == brute_force_max_weight(WeightMatrix::from_state(in.x, in.c));
}

void check_equivalence(SuiteResult& r, const Instance& in) {
  ++r.cases;
  try {
    const bool none = !find_balancing_reallocation(in.x, in.c, in.m).has_value();
    if (none != is_max(in))
      fail(r, dump(in) + (none ? " no reallocation but not maximal" : " reallocation found for a maximal matching"));
  } catch (const std::exception& e) {
    fail(r, dump(in) + " threw: " + e.what());
  }
}

}  // namespace

SuiteResult verify_matching_oracle(int trials, int max_n, int max_k, std::uint64_t seed) {
  SuiteResult r;
  r.name = "matching oracle";
  RandomStream rng(seed, StreamTag::policy, kOracleTag);
  for (int t = 0; t < trials; ++t) {
    const int n = draw_size(rng, max_n);
    const int k = draw_size(rng, max_k);
    WeightMatrix w(n, k);
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < k; ++s) w.set(q, s, static_cast<Count>(rng.uniform_index(10)));
    ++r.cases;
    const Matching m = max_weight_matching(w);
    const Count brute = brute_force_max_weight(w);
    if (!m.is_valid() || matching_weight(w, m) != brute)
      fail(r, "w=" + dump(w) + " hungarian=" + std::to_string(m.is_valid() ? matching_weight(w, m) : -1) +
                  " enumeration=" + std::to_string(brute));
  }
  r.detail = std::to_string(r.cases) + " instances, N,K <= " + std::to_string(std::max(max_n, max_k));
  return r;
}

SuiteResult verify_strict_increase(int trials, int max_n, int max_k, std::uint64_t seed, bool corrupt) {
  SuiteResult r;
  r.name = "strict increase";
  RandomStream rng(seed, StreamTag::policy, kIncreaseTag);
  std::int64_t reallocations = 0;
  for (int t = 0; t < trials; ++t) {
    const Instance in = random_instance(rng, draw_size(rng, max_n), draw_size(rng, max_k), 9);
    ++r.cases;
    try {
      auto better = find_balancing_reallocation(in.x, in.c, in.m);
      if (!better) continue;
      ++reallocations;
      if (corrupt) better = in.m;
      const Count before = mw_index(in.x, in.c, in.m);
      const Count after = better->is_valid() ? mw_index(in.x, in.c, *better) : -1;
      const auto kind = classify_reallocation(intermediate_state(in.x, in.c, in.m),
                                              intermediate_state(in.x, in.c, *better));
      if (!better->is_valid() || after <= before || !kind) {
        fail(r, dump(in) + " reallocation=" + dump(*better) + " mw " + std::to_string(before) + " -> " +
                    std::to_string(after));
        continue;
      }
      const ReallocationChain chain = distance_to_mwm(in.x, in.c, in.m);
      if (chain.h < 1 || !is_max({in.x, in.c, chain.chain.back()}))
        fail(r, dump(in) + " reallocation chain does not end at a maximum-weight matching");
    } catch (const std::exception& e) {
      fail(r, dump(in) + " threw: " + e.what());
    }
  }
  r.detail = std::to_string(r.cases) + " instances, " + std::to_string(reallocations) + " reallocations";
  return r;
}

SuiteResult verify_optimality_equivalence(int trials, int max_size, std::uint64_t seed) {
  SuiteResult r;
  r.name = "optimality equivalence";
  const auto matchings = enumerate_matchings(2, 2);
  for (int mask = 0; mask < 16; ++mask) {
    ConnectivityMatrix c(2, 2);
    for (int b = 0; b < 4; ++b) c.set(b / 2, b % 2, (mask >> b) & 1);
    for (Count x0 = 0; x0 <= 3; ++x0)
      for (Count x1 = 0; x1 <= 3; ++x1)
        for (const auto& m : matchings) check_equivalence(r, {{x0, x1}, c, m});
  }
  const std::int64_t exhaustive = r.cases;
  RandomStream rng(seed, StreamTag::policy, kEquivalenceTag);
  for (int t = 0; t < trials; ++t) {
    const int s = draw_size(rng, max_size);
    check_equivalence(r, random_instance(rng, s, s, 9));
  }
  r.detail = std::to_string(exhaustive) + " exhaustive + " + std::to_string(r.cases - exhaustive) + " random";
  return r;
}

SuiteResult verify_mwm_permutation(int trials, int max_n, int max_k, std::uint64_t seed) {
  SuiteResult r;
  r.name = "mwm permutation";
  RandomStream rng(seed, StreamTag::policy, kPermutationTag);
  std::int64_t compared = 0;
  for (int t = 0; t < trials; ++t) {
    const Instance in = random_instance(rng, draw_size(rng, max_n), draw_size(rng, max_k), 4);
    ++r.cases;
    const auto all = all_max_weight_matchings(WeightMatrix::from_state(in.x, in.c));
    const QueueVector first = intermediate_state(in.x, in.c, all.front());
    for (std::size_t i = 1; i < all.size(); ++i) {
      ++compared;
      const QueueVector other = intermediate_state(in.x, in.c, all[i]);
      if (!equal_in_permutation(first, other)) {
        fail(r, "x=" + dump(in.x) + " c=" + dump(in.c) + " " + dump(all.front()) + " -> " + dump(first) + " vs " +
                    dump(all[i]) + " -> " + dump(other));
        break;
      }
    }
  }
  r.detail = std::to_string(r.cases) + " instances, " + std::to_string(compared) + " pairs compared";
  return r;
}

SuiteResult verify_coupling(int seeds, std::int64_t horizon, std::uint64_t seed) {
  SuiteResult r;
  r.name = "coupling";
  StochasticConfig cfg;
  cfg.n_queues = 3;
  cfg.n_servers = 2;
  cfg.connectivity_p = 0.5;
  cfg.arrival_kind = ArrivalKind::bernoulli;
  cfg.arrival_rate = 0.3;
  cfg.service_q = 1.0;

  const PolicyKind policies[] = {PolicyKind::mm, PolicyKind::heuristic, PolicyKind::mwm};
  std::int64_t slots = 0, preserved = 0, ones = 0, entries = 0, arrivals = 0, arrival_entries = 0;
  for (int s = 0; s < seeds; ++s) {
    CouplingCheckOptions options;
    options.policy = policies[s % 3];
    const std::uint64_t run_seed = derive_seed(seed, kCouplingTag, static_cast<std::uint64_t>(s));
    const CouplingReport report = coupling_trajectory_check(cfg, horizon, run_seed, options);
    ++r.cases;
    slots += report.horizon;
    preserved += report.preserved_slots;
    ones += report.coupled_connectivity_ones;
    entries += report.coupled_connectivity_entries;
    arrivals += report.coupled_arrivals;
    arrival_entries += report.coupled_arrival_entries;
    if (!report.passed())
      fail(r, "seed " + std::to_string(run_seed) + " policy " + std::string(to_string(options.policy)) + ": " +
                  report.violation_trace);
  }
  const double conn_mean = entries ? static_cast<double>(ones) / static_cast<double>(entries) : 0.0;
  const double arr_mean = arrival_entries ? static_cast<double>(arrivals) / static_cast<double>(arrival_entries) : 0.0;
  if (slots >= 100'000) {
    if (std::abs(conn_mean - cfg.connectivity_p) > 0.01 || std::abs(arr_mean - cfg.arrival_rate) > 0.01)
      fail(r, "coupled marginal means off: connectivity " + std::to_string(conn_mean) + " arrivals " +
                  std::to_string(arr_mean));
  }
  std::ostringstream os;
  os << preserved << "/" << slots << " slots preserved, coupled means c=" << conn_mean << " a=" << arr_mean;
  r.detail = os.str();
  return r;
}

std::vector<SuiteResult> run_verify(const VerifyOptions& o) {
  o.validate();
  return {
      verify_matching_oracle(o.trials, o.max_n, o.max_k, o.seed),
      verify_strict_increase(o.trials, o.max_n, o.max_k, o.seed, o.corrupt),
      verify_optimality_equivalence(o.trials, std::min(o.max_n, o.max_k), o.seed),
      verify_mwm_permutation(o.permutation_trials, o.max_n, o.max_k, o.seed),
      verify_coupling(o.coupling_seeds, o.coupling_horizon, o.seed),
  };
}

}  // namespace mqms

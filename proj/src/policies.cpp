#include "mqms/policies.hpp"

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "mqms/matching.hpp"

namespace mqms {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::mwm: return "mwm";
    case PolicyKind::mm: return "mm";
    case PolicyKind::heuristic: return "heuristic";
  }
  return "unknown";
}

PolicyKind policy_kind_from_string(std::string_view name) {
  if (name == "mwm") return PolicyKind::mwm;
  if (name == "mm") return PolicyKind::mm;
  if (name == "heuristic") return PolicyKind::heuristic;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

Matching heuristic_matching(const QueueVector& x_prev, const ConnectivityMatrix& c, RandomStream& policy_rng) {
  const int n_queues = c.rows();
  const int n_servers = c.cols();
  if (static_cast<int>(x_prev.size()) != n_queues) throw std::invalid_argument("dimension mismatch in heuristic");

  std::vector<int> order(static_cast<std::size_t>(n_servers));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n_servers - 1; i > 0; --i) {
    const auto j = static_cast<int>(policy_rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }

  Matching m(n_queues, n_servers);
  std::vector<char> available(static_cast<std::size_t>(n_queues), 1);
  int remaining = n_queues;
  for (const int k : order) {
    if (remaining == 0) break;
    int best = -1;
    Count best_weight = -1;
    for (int n = 0; n < n_queues; ++n) {
      if (!available[n]) continue;
      const Count weight = c.at(n, k) ? x_prev[n] : 0;
      if (weight > best_weight) {
        best_weight = weight;
        best = n;
      }
    }
    m.set(best, k, true);
    available[best] = 0;
    --remaining;
  }
  return m;
}

Matching decide(PolicyKind kind, const QueueVector& x_prev, const ConnectivityMatrix& c, RandomStream& policy_rng) {
  switch (kind) {
    case PolicyKind::mwm: return max_weight_matching(WeightMatrix::from_state(x_prev, c));
    case PolicyKind::mm: return max_cardinality_matching(c);
    case PolicyKind::heuristic: return heuristic_matching(x_prev, c, policy_rng);
  }
  throw std::invalid_argument("unknown policy kind");
}

bool is_mwm_decision(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m,
                     DecisionOracle oracle) {
  const WeightMatrix w = WeightMatrix::from_state(x_prev, c);
  const Count best = oracle == DecisionOracle::enumeration ? brute_force_max_weight(w)
                                                           : matching_weight(w, max_weight_matching(w));
  return matching_weight(w, m) == best;
}

}  // namespace mqms

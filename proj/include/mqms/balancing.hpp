#pragma once

#include <optional>
#include <vector>

#include "mqms/core.hpp"

namespace mqms {

/// How a reallocated intermediate state relates to the original one.
///  - c1: no queue grows and at least one shrinks.
///  - c2: a unit moves from a longer queue `longer` to a shorter queue `shorter`,
///        with x_shorter < x~_shorter <= x~_longer < x_longer.
struct ReallocationKind {
  enum class Tag { c1, c2 };
  Tag tag = Tag::c1;
  int shorter = -1;
  int longer = -1;

  bool operator==(const ReallocationKind&) const = default;
};

std::optional<ReallocationKind> classify_reallocation(const QueueVector& x_orig, const QueueVector& x_new);

/// Weight pattern of the (incoming MWM edge, outgoing policy edge) pair at a queue node.
enum class PairType {
  t0,  ///< (0, 0) or (-x, x): the node's service status is the same in both matchings
  t1,  ///< (-x, 0), x > 0: served by the maximum-weight matching only
  t2,  ///< (0, x), x > 0: served by the policy matching only
};

/// One queue node of a cycle in the union digraph.
struct CycleNode {
  int queue = -1;
  int in_server = -1;   ///< server matched to `queue` by the maximum-weight matching
  int out_server = -1;  ///< server matched to `queue` by the policy matching
  Count in_weight = 0;  ///< weight of the maximum-weight edge (enters the cycle negated)
  Count out_weight = 0;
  PairType type = PairType::t0;
};

/// Union of two perfect matchings on the S x S zero-padded graph, S = max(N, K).
/// Policy edges point queue -> server with their weight; maximum-weight edges point
/// server -> queue with the negated weight. Every vertex has in- and out-degree one, so
/// the graph splits into even cycles. Policy edges added only to complete the padding
/// carry weight 0.
struct UnionCycleGraph {
  int size = 0;
  std::vector<int> policy_server;  ///< padded policy matching, queue -> server
  std::vector<char> policy_real;   ///< 1 when the policy edge belongs to the input matching
  std::vector<int> mwm_server;     ///< padded maximum-weight matching, queue -> server
  /// Cycles in order of their smallest queue; each starts at that queue and follows
  /// queue -> policy server -> queue matched to it by the maximum-weight matching.
  std::vector<std::vector<CycleNode>> cycles;

  static Count cycle_weight(const std::vector<CycleNode>& cycle);
  Count total_weight() const;
};

/// Builds the union digraph of `m` and the given maximum-weight matching `mwm`.
UnionCycleGraph build_union_cycle_graph(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m,
                                        const Matching& mwm);

/// A matching whose intermediate state is related to that of `m` by c1 or c2 and whose
/// MW index is strictly larger, or nullopt when `m` already has the maximum MW index.
/// Throws std::invalid_argument for an invalid matching.
std::optional<Matching> find_balancing_reallocation(const QueueVector& x_prev, const ConnectivityMatrix& c,
                                                    const Matching& m);

struct ReallocationChain {
  int h = 0;                    ///< number of balancing reallocations applied
  std::vector<Matching> chain;  ///< chain.front() is the input, chain.back() is maximum-weight
};

ReallocationChain distance_to_mwm(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m);

}  // namespace mqms

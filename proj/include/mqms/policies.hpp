#pragma once

#include <string_view>

#include "mqms/core.hpp"

namespace mqms {

enum class PolicyKind {
  mwm,        ///< maximum-weight matching on weights x_n * c_{n,k}
  mm,         ///< maximum-cardinality matching on the connectivity alone
  heuristic,  ///< random server order, each server takes its longest remaining connected queue
};

std::string_view to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(std::string_view name);

/// Server assignment for the coming slot from the previous queue lengths and the current
/// connectivity. Only the heuristic draws from `policy_rng`.
Matching decide(PolicyKind kind, const QueueVector& x_prev, const ConnectivityMatrix& c, RandomStream& policy_rng);

/// One pass of the randomized longest-connected-queue heuristic. Argmax ties go to the
/// lowest queue index; a server is assigned even when every remaining weight is zero.
Matching heuristic_matching(const QueueVector& x_prev, const ConnectivityMatrix& c, RandomStream& policy_rng);

enum class DecisionOracle { hungarian, enumeration };

/// True iff the MW index of `m` equals the maximum over all matchings.
bool is_mwm_decision(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m,
                     DecisionOracle oracle = DecisionOracle::hungarian);

}  // namespace mqms

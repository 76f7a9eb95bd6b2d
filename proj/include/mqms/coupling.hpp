#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "mqms/core.hpp"
#include "mqms/order.hpp"
#include "mqms/policies.hpp"

namespace mqms {

/// State of two coupled systems at the start of a slot: system x runs its own policy
/// (decision `m`), system x_tilde is driven by the coupled randomness.
struct CoupledSlotInput {
  QueueVector x;
  QueueVector x_tilde;
  RelationKind rel;  ///< relation(x_tilde, x)
  ConnectivityMatrix c;
  ArrivalVector a;
  Matching m;
};

enum class CouplingBranch {
  identity,          ///< d1 or equal, and the d3 cases that share all randomness
  row_swap,          ///< d2: rows n and m of c, a and m exchanged
  arrival_swap,      ///< d3 with equal entries in x_tilde: only the arrivals of n and m exchanged
};

struct CoupledSlotOutput {
  ConnectivityMatrix c_tilde;
  ArrivalVector a_tilde;
  Matching m_tilde;
  CouplingBranch branch = CouplingBranch::identity;
};

/// Builds the coupled connectivity, arrivals and matching of system x_tilde for one slot
/// so that, with perfect service, relation(next x_tilde, next x) stays d1, d2, d3 or equal.
/// Throws std::invalid_argument when `rel` is unrelated or disagrees with the vectors.
CoupledSlotOutput couple_step(const CoupledSlotInput& in);

enum class StartRelation { equal, d1, d2, d3, random };

struct CouplingCheckOptions {
  PolicyKind policy = PolicyKind::mm;
  StartRelation start = StartRelation::random;
  Count initial_max = 4;  ///< initial queue lengths drawn uniformly from [0, initial_max]
  /// While both systems are equal, system x_tilde applies a balancing reallocation of the
  /// decision of system x (when one exists) instead of copying it.
  bool reallocate_when_equal = true;
};

struct CouplingReport {
  std::int64_t horizon = 0;
  std::int64_t slots_run = 0;
  std::int64_t preserved_slots = 0;
  std::int64_t cost_violations = 0;
  std::int64_t reallocations = 0;
  std::int64_t max_cost_gap = 0;  ///< largest cost_total(x) - cost_total(x_tilde) seen
  RelationKind start_relation;
  std::array<std::int64_t, 5> relation_counts{};  ///< indexed by RelationKind::Tag

  std::int64_t coupled_connectivity_ones = 0;
  std::int64_t coupled_connectivity_entries = 0;
  std::int64_t coupled_arrivals = 0;
  std::int64_t coupled_arrival_entries = 0;

  std::string violation_trace;  ///< full dump of the first violating slot

  double invariant_fraction() const;
  double coupled_connectivity_mean() const;
  double coupled_arrival_mean() const;
  bool passed() const { return preserved_slots == horizon && cost_violations == 0; }
};

/// Runs two coupled systems for `horizon` slots and checks after every slot that their
/// relation is preserved and that system x_tilde has no larger total occupancy (equal
/// under d2). Requires perfect service and Bernoulli arrivals.
CouplingReport coupling_trajectory_check(const StochasticConfig& cfg, std::int64_t horizon, std::uint64_t seed,
                                         const CouplingCheckOptions& options = {});

}  // namespace mqms

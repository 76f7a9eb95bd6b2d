#pragma once

#include <cstdint>

#include "mqms/core.hpp"

namespace mqms {

/// Relation of a vector x~ to a reference x.
///  - d1: x~ <= x elementwise, not identical
///  - d2: x~ is x with two distinct entries n, m swapped
///  - d3: balancing interchange, x_n < x~_n <= x~_m < x_m with x~_n = x_n + 1, x~_m = x_m - 1
/// The three are mutually exclusive; identical vectors report `equal`.
struct RelationKind {
  enum class Tag { d1, d2, d3, equal, unrelated };
  Tag tag = Tag::unrelated;
  int n = -1;  ///< d2/d3: for d3 the index that grows
  int m = -1;  ///< d2/d3: for d3 the index that shrinks

  bool operator==(const RelationKind&) const = default;
  /// True for d1, d2, d3 and equal.
  bool related() const { return tag != Tag::unrelated; }
};

const char* to_string(RelationKind::Tag tag);

RelationKind relation(const QueueVector& x_new, const QueueVector& x_orig);

enum class ClosureResult { reachable, unreachable, budget_exhausted };

/// Whether x_new is obtained from x_orig by a sequence of single-packet removals,
/// two-entry swaps and balancing interchanges. Breadth-first search that stops after
/// `budget` node expansions. Test oracle only; tractable for small totals.
ClosureResult precedes_p(const QueueVector& x_new, const QueueVector& x_orig, std::int64_t budget = 1'000'000);

/// True iff the two vectors hold the same multiset of entries.
bool equal_in_permutation(const QueueVector& a, const QueueVector& b);

/// Total queue occupancy.
Count cost_total(const QueueVector& x);
/// Longest queue; 0 for an empty vector.
Count cost_max(const QueueVector& x);

}  // namespace mqms

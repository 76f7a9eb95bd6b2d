#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mqms/core.hpp"

namespace mqms {

/// Edge weights of the bipartite scheduling graph: entry (n, k) = x_n * c_{n,k}.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(int rows, int cols, Count fill = 0);
  WeightMatrix(int rows, int cols, std::vector<Count> row_major);

  static WeightMatrix from_state(const QueueVector& x_prev, const ConnectivityMatrix& c);
  /// Unit weight on every connected edge.
  static WeightMatrix unit(const ConnectivityMatrix& c);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Count at(int row, int col) const { return w_[static_cast<std::size_t>(row) * cols_ + col]; }
  void set(int row, int col, Count value);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Count> w_;
};

/// Thrown when an exhaustive enumeration would exceed the matching-count guard.
class EnumerationGuardExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::uint64_t kEnumerationGuard = 10'000'000;

/// Sum of weights over the matched edges. Throws std::invalid_argument for an invalid matching.
Count matching_weight(const WeightMatrix& w, const Matching& m);

/// Matching Weight index: sum over served queues of x_n * c_{n,k} * m_{n,k}.
Count mw_index(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m);

/// Exact maximum-weight matching (Hungarian algorithm on the zero-padded square matrix).
/// Zero-weight edges are never part of the result.
Matching max_weight_matching(const WeightMatrix& w);

/// Maximum number of connected (queue, server) pairs served simultaneously.
Matching max_cardinality_matching(const ConnectivityMatrix& c);

/// Number of matchings of the complete n x k bipartite graph, saturating at UINT64_MAX.
std::uint64_t count_matchings(int n, int k);

/// Calls `visit` once for every matching of the complete n x k graph, the empty one included.
void for_each_matching(int n, int k, const std::function<void(const Matching&)>& visit);
std::vector<Matching> enumerate_matchings(int n, int k);

/// Every matching that attains the maximum total weight.
std::vector<Matching> all_max_weight_matchings(const WeightMatrix& w);

/// Maximum weight over all matchings by exhaustive search.
Count brute_force_max_weight(const WeightMatrix& w);

}  // namespace mqms

#include "mqms/order.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

namespace mqms {

const char* to_string(RelationKind::Tag tag) {
  switch (tag) {
    case RelationKind::Tag::d1: return "D1";
    case RelationKind::Tag::d2: return "D2";
    case RelationKind::Tag::d3: return "D3";
    case RelationKind::Tag::equal: return "equal";
    case RelationKind::Tag::unrelated: return "unrelated";
  }
  return "?";
}

RelationKind relation(const QueueVector& x_new, const QueueVector& x_orig) {
  if (x_new.size() != x_orig.size()) throw std::invalid_argument("dimension mismatch in relation");
  std::vector<int> differing;
  bool dominated = true;
  for (std::size_t i = 0; i < x_new.size(); ++i) {
    if (x_new[i] != x_orig[i]) differing.push_back(static_cast<int>(i));
    if (x_new[i] > x_orig[i]) dominated = false;
  }
  using Tag = RelationKind::Tag;
  if (differing.empty()) return {Tag::equal, -1, -1};
  if (dominated) return {Tag::d1, -1, -1};
  if (differing.size() != 2) return {Tag::unrelated, -1, -1};

  const int a = differing[0];
  const int b = differing[1];
  if (x_new[a] == x_orig[b] && x_new[b] == x_orig[a]) return {Tag::d2, a, b};
  for (const auto& [n, m] : {std::pair{a, b}, std::pair{b, a}}) {
    if (x_new[n] == x_orig[n] + 1 && x_new[m] == x_orig[m] - 1 && x_new[n] <= x_new[m]) return {Tag::d3, n, m};
  }
  return {Tag::unrelated, -1, -1};
}

ClosureResult precedes_p(const QueueVector& x_new, const QueueVector& x_orig, std::int64_t budget) {
  if (x_new.size() != x_orig.size()) throw std::invalid_argument("dimension mismatch in precedes_p");
  if (x_new == x_orig) return ClosureResult::reachable;

  // Every move keeps the total and the maximum from growing, so states below the target
  // in either quantity are pruned.
  const Count target_total = cost_total(x_new);
  const Count target_max = cost_max(x_new);
  std::set<QueueVector> seen{x_orig};
  std::deque<QueueVector> frontier{x_orig};
  std::int64_t expansions = 0;

  auto consider = [&](QueueVector&& next) {
    if (cost_total(next) < target_total || cost_max(next) < target_max) return false;
    if (next == x_new) return true;
    if (seen.insert(next).second) frontier.push_back(std::move(next));
    return false;
  };

  while (!frontier.empty()) {
    if (expansions++ >= budget) return ClosureResult::budget_exhausted;
    const QueueVector x = std::move(frontier.front());
    frontier.pop_front();
    const auto size = x.size();
    for (std::size_t i = 0; i < size; ++i) {
      if (x[i] > 0) {
        QueueVector next = x;
        --next[i];
        if (consider(std::move(next))) return ClosureResult::reachable;
      }
      for (std::size_t j = 0; j < size; ++j) {
        if (i == j) continue;
        if (i < j && x[i] != x[j]) {
          QueueVector next = x;
          std::swap(next[i], next[j]);
          if (consider(std::move(next))) return ClosureResult::reachable;
        }
        // Interchange: i grows by one, j shrinks by one, ordering preserved.
        if (x[i] + 1 <= x[j] - 1) {
          QueueVector next = x;
          ++next[i];
          --next[j];
          if (consider(std::move(next))) return ClosureResult::reachable;
        }
      }
    }
  }
  return ClosureResult::unreachable;
}

bool equal_in_permutation(const QueueVector& a, const QueueVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch in equal_in_permutation");
  QueueVector sa = a;
  QueueVector sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

Count cost_total(const QueueVector& x) { return std::accumulate(x.begin(), x.end(), Count{0}); }

Count cost_max(const QueueVector& x) { return x.empty() ? 0 : *std::max_element(x.begin(), x.end()); }

}  // namespace mqms

#include "mqms/balancing.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mqms/matching.hpp"

namespace mqms {

std::optional<ReallocationKind> classify_reallocation(const QueueVector& x_orig, const QueueVector& x_new) {
  if (x_orig.size() != x_new.size()) throw std::invalid_argument("dimension mismatch in classify_reallocation");
  bool none_larger = true;
  bool some_smaller = false;
  std::vector<int> differing;
  for (std::size_t n = 0; n < x_orig.size(); ++n) {
    if (x_new[n] > x_orig[n]) none_larger = false;
    if (x_new[n] < x_orig[n]) some_smaller = true;
    if (x_new[n] != x_orig[n]) differing.push_back(static_cast<int>(n));
  }
  if (none_larger && some_smaller) return ReallocationKind{ReallocationKind::Tag::c1, -1, -1};
  if (differing.size() != 2) return std::nullopt;
  for (int flip = 0; flip < 2; ++flip) {
    const int n = differing[flip];
    const int m = differing[1 - flip];
    if (x_new[n] == x_orig[n] + 1 && x_new[m] == x_orig[m] - 1 && x_new[n] <= x_new[m])
      return ReallocationKind{ReallocationKind::Tag::c2, n, m};
  }
  return std::nullopt;
}

Count UnionCycleGraph::cycle_weight(const std::vector<CycleNode>& cycle) {
  Count total = 0;
  for (const auto& node : cycle) total += node.out_weight - node.in_weight;
  return total;
}

Count UnionCycleGraph::total_weight() const {
  Count total = 0;
  for (const auto& cycle : cycles) total += cycle_weight(cycle);
  return total;
}

namespace {

// Extends a matching of the N x K graph to a perfect matching of the S x S graph by
// pairing the unmatched queues and servers in ascending order.
void pad_to_perfect(const Matching& m, int size, std::vector<int>& server_of, std::vector<char>& real) {
  server_of.assign(size, -1);
  real.assign(size, 0);
  std::vector<char> server_used(size, 0);
  for (int n = 0; n < m.rows(); ++n) {
    const int k = m.server_of(n);
    if (k < 0) continue;
    server_of[n] = k;
    real[n] = 1;
    server_used[k] = 1;
  }
  int next_free = 0;
  for (int n = 0; n < size; ++n) {
    if (server_of[n] >= 0) continue;
    while (server_used[next_free]) ++next_free;
    server_of[n] = next_free;
    server_used[next_free] = 1;
  }
}

PairType classify_pair(Count in_weight, Count out_weight) {
  if (in_weight == out_weight) return PairType::t0;
  return in_weight > out_weight ? PairType::t1 : PairType::t2;
}

}  // namespace

UnionCycleGraph build_union_cycle_graph(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m,
                                        const Matching& mwm) {
  const int n_queues = c.rows();
  const int n_servers = c.cols();
  if (static_cast<int>(x_prev.size()) != n_queues || m.rows() != n_queues || m.cols() != n_servers ||
      mwm.rows() != n_queues || mwm.cols() != n_servers)
    throw std::invalid_argument("dimension mismatch in build_union_cycle_graph");
  if (!m.is_valid() || !mwm.is_valid()) throw std::invalid_argument("invalid matching in build_union_cycle_graph");

  UnionCycleGraph g;
  g.size = std::max(n_queues, n_servers);
  std::vector<char> mwm_real;
  pad_to_perfect(m, g.size, g.policy_server, g.policy_real);
  pad_to_perfect(mwm, g.size, g.mwm_server, mwm_real);

  auto weight = [&](int n, int k) -> Count {
    return (n < n_queues && k < n_servers && c.at(n, k)) ? x_prev[n] : 0;
  };
  std::vector<int> mwm_queue_of(g.size, -1);
  for (int n = 0; n < g.size; ++n) mwm_queue_of[g.mwm_server[n]] = n;

  std::vector<char> visited(g.size, 0);
  for (int start = 0; start < g.size; ++start) {
    if (visited[start]) continue;
    std::vector<CycleNode> cycle;
    int n = start;
    do {
      visited[n] = 1;
      CycleNode node;
      node.queue = n;
      node.in_server = g.mwm_server[n];
      node.out_server = g.policy_server[n];
      node.in_weight = mwm_real[n] ? weight(n, node.in_server) : 0;
      node.out_weight = g.policy_real[n] ? weight(n, node.out_server) : 0;
      node.type = classify_pair(node.in_weight, node.out_weight);
      cycle.push_back(node);
      n = mwm_queue_of[node.out_server];
    } while (n != start);
    g.cycles.push_back(std::move(cycle));
  }
  return g;
}

namespace {

// A run of consecutive cycle nodes. Single nodes keep their pair type; runs merged by the
// equal-length rule are treated as type t0 and keep their internal policy edges.
struct CycleItem {
  std::vector<int> queues;
  int in_server = -1;
  int out_server = -1;
  PairType type = PairType::t0;
  Count length = 0;  // queue length of a single node
};

class ReallocationBuilder {
 public:
  ReallocationBuilder(const UnionCycleGraph& g) : server_of_(g.policy_server), introduced_(g.size, 0) {}

  // The item takes the server its maximum-weight edge points to. A merged run only
  // releases the outgoing server of its last queue.
  void switch_to_mwm(const CycleItem& item) {
    if (item.queues.size() == 1) {
      assign(item.queues.front(), item.in_server);
    } else {
      server_of_[item.queues.back()] = -1;
    }
  }

  void assign(int queue, int server) {
    server_of_[queue] = server;
    introduced_[queue] = 1;
  }

  Matching build(const UnionCycleGraph& g, const ConnectivityMatrix& c) const {
    Matching result(c.rows(), c.cols());
    for (int n = 0; n < c.rows(); ++n) {
      const int k = server_of_[n];
      if (k < 0 || k >= c.cols()) continue;
      const bool keep = introduced_[n] ? c.at(n, k) : static_cast<bool>(g.policy_real[n]);
      if (keep) result.set(n, k, true);
    }
    return result;
  }

 private:
  std::vector<int> server_of_;
  std::vector<char> introduced_;
};

std::string describe(const QueueVector& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

Matching reallocate_on_cycle(const UnionCycleGraph& g, const std::vector<CycleNode>& cycle,
                             const QueueVector& x_prev, const ConnectivityMatrix& c) {
  std::vector<CycleItem> items;
  items.reserve(cycle.size());
  for (const auto& node : cycle) {
    const Count length = node.queue < static_cast<int>(x_prev.size()) ? x_prev[node.queue] : 0;
    items.push_back({{node.queue}, node.in_server, node.out_server, node.type, length});
  }

  const std::size_t guard = 2 * static_cast<std::size_t>(g.size) + 2;
  for (std::size_t iteration = 0; iteration < guard; ++iteration) {
    const auto w = static_cast<int>(items.size());
    int j = -1;
    for (int i = 0; i < w; ++i)
      if (items[i].type == PairType::t1 && (j < 0 || items[i].queues.front() < items[j].queues.front())) j = i;
    if (j < 0) throw std::logic_error("negative cycle without a t1 pair");

    int prev = (j - 1 + w) % w;
    while (prev != j && items[prev].type == PairType::t0) prev = (prev - 1 + w) % w;

    ReallocationBuilder builder(g);
    if (prev == j) {
      // Every other pair is t0: take the maximum-weight edges around the whole cycle.
      for (const auto& item : items) builder.switch_to_mwm(item);
      return builder.build(g, c);
    }

    const bool shortcut = items[prev].type == PairType::t1 || items[j].length > items[prev].length;
    if (shortcut) {
      // From the pair after `prev` up to j the maximum-weight edges are used, and the
      // server released by j goes to prev's queue. When prev is t2 this moves one unit of
      // service from the shorter queue prev to the longer queue j.
      for (int i = (prev + 1) % w;; i = (i + 1) % w) {
        builder.switch_to_mwm(items[i]);
        if (i == j) break;
      }
      builder.assign(items[prev].queues.front(), items[j].out_server);
      return builder.build(g, c);
    }
    if (items[j].length < items[prev].length)
      throw std::logic_error("t2 pair longer than the following t1 pair contradicts maximality");

    // Equal lengths: the run prev..j contributes zero weight; merge it into one t0 item.
    std::vector<CycleItem> rotated(items.begin() + prev, items.end());
    rotated.insert(rotated.end(), items.begin(), items.begin() + prev);
    const int run = (j - prev + w) % w + 1;
    CycleItem merged;
    merged.in_server = rotated.front().in_server;
    merged.out_server = rotated[run - 1].out_server;
    merged.type = PairType::t0;
    for (int i = 0; i < run; ++i)
      merged.queues.insert(merged.queues.end(), rotated[i].queues.begin(), rotated[i].queues.end());
    std::vector<CycleItem> next;
    next.reserve(rotated.size() - run + 1);
    next.push_back(std::move(merged));
    next.insert(next.end(), rotated.begin() + run, rotated.end());
    items = std::move(next);
  }
  throw std::logic_error("equal-length merging did not terminate within its guard");
}

}  // namespace

std::optional<Matching> find_balancing_reallocation(const QueueVector& x_prev, const ConnectivityMatrix& c,
                                                    const Matching& m) {
  const Count current = mw_index(x_prev, c, m);
  const Matching mwm = max_weight_matching(WeightMatrix::from_state(x_prev, c));
  const Count best = mw_index(x_prev, c, mwm);
  if (current >= best) return std::nullopt;

  const UnionCycleGraph g = build_union_cycle_graph(x_prev, c, m, mwm);
  const auto negative = std::find_if(g.cycles.begin(), g.cycles.end(),
                                     [](const auto& cycle) { return UnionCycleGraph::cycle_weight(cycle) < 0; });
  if (negative == g.cycles.end()) throw std::logic_error("suboptimal matching without a negative cycle");

  Matching result = reallocate_on_cycle(g, *negative, x_prev, c);
  const QueueVector before = intermediate_state(x_prev, c, m);
  const QueueVector after = intermediate_state(x_prev, c, result);
  if (!result.is_valid() || mw_index(x_prev, c, result) <= current || !classify_reallocation(before, after))
    throw std::logic_error("constructed reallocation is not balancing: " + describe(before) + " -> " +
                           describe(after));
  return result;
}

ReallocationChain distance_to_mwm(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m) {
  ReallocationChain out;
  out.chain.push_back(m);
  Count previous = mw_index(x_prev, c, m);
  while (auto next = find_balancing_reallocation(x_prev, c, out.chain.back())) {
    const Count weight = mw_index(x_prev, c, *next);
    if (weight <= previous) throw std::logic_error("MW index did not increase along the reallocation chain");
    previous = weight;
    out.chain.push_back(std::move(*next));
  }
  out.h = static_cast<int>(out.chain.size()) - 1;
  return out;
}

}  // namespace mqms

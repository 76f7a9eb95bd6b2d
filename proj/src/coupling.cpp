#include "mqms/coupling.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mqms/balancing.hpp"

namespace mqms {

namespace {

bool gets_service(const ConnectivityMatrix& c, const Matching& m, int queue) {
  for (int k = 0; k < c.cols(); ++k)
    if (c.at(queue, k) && m.at(queue, k)) return true;
  return false;
}

}  // namespace

CoupledSlotOutput couple_step(const CoupledSlotInput& in) {
  using Tag = RelationKind::Tag;
  if (!in.rel.related()) throw std::invalid_argument("couple_step requires related states");
  if (relation(in.x_tilde, in.x) != in.rel) throw std::invalid_argument("relation tag disagrees with the states");
  if (in.c.rows() != static_cast<int>(in.x.size()) || in.a.size() != in.x.size() || in.m.rows() != in.c.rows() ||
      in.m.cols() != in.c.cols())
    throw std::invalid_argument("dimension mismatch in couple_step");

  CoupledSlotOutput out{in.c, in.a, in.m, CouplingBranch::identity};
  const int n = in.rel.n;
  const int m = in.rel.m;
  switch (in.rel.tag) {
    case Tag::equal:
    case Tag::d1:
      break;
    case Tag::d2:
      out.c_tilde.swap_rows(n, m);
      out.m_tilde.swap_rows(n, m);
      std::swap(out.a_tilde[n], out.a_tilde[m]);
      out.branch = CouplingBranch::row_swap;
      break;
    case Tag::d3:
      // Only the equal-entries sub-case needs more than shared randomness: when queue m is
      // served and queue n is not, the two queues trade arrivals.
      if (in.x_tilde[n] == in.x_tilde[m] && gets_service(in.c, in.m, m) && !gets_service(in.c, in.m, n)) {
        std::swap(out.a_tilde[n], out.a_tilde[m]);
        out.branch = CouplingBranch::arrival_swap;
      }
      break;
    case Tag::unrelated:
      break;
  }
  return out;
}

double CouplingReport::invariant_fraction() const {
  return horizon > 0 ? static_cast<double>(preserved_slots) / static_cast<double>(horizon) : 1.0;
}

double CouplingReport::coupled_connectivity_mean() const {
  return coupled_connectivity_entries > 0
             ? static_cast<double>(coupled_connectivity_ones) / static_cast<double>(coupled_connectivity_entries)
             : 0.0;
}

double CouplingReport::coupled_arrival_mean() const {
  return coupled_arrival_entries > 0
             ? static_cast<double>(coupled_arrivals) / static_cast<double>(coupled_arrival_entries)
             : 0.0;
}

namespace {

constexpr std::uint64_t kInitialStateTag = 5;

std::string format_vector(const std::vector<Count>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

std::string format_matrix(const BinaryMatrix& b) {
  std::ostringstream os;
  os << '[';
  for (int r = 0; r < b.rows(); ++r) {
    os << (r ? ";" : "");
    for (int k = 0; k < b.cols(); ++k) os << (b.at(r, k) ? '1' : '0');
  }
  os << ']';
  return os.str();
}

// Draws x and a partner x_tilde with the requested relation to it.
std::pair<QueueVector, QueueVector> initial_pair(const StochasticConfig& cfg, StartRelation start, Count max_len,
                                                 RandomStream& rng) {
  const int size = cfg.n_queues;
  QueueVector x(static_cast<std::size_t>(size));
  for (auto& v : x) v = static_cast<Count>(rng.uniform_index(static_cast<std::uint64_t>(max_len) + 1));
  if (start == StartRelation::random) start = static_cast<StartRelation>(rng.uniform_index(4));

  QueueVector x_tilde = x;
  switch (start) {
    case StartRelation::equal:
    case StartRelation::random:
      break;
    case StartRelation::d1: {
      if (cost_total(x) == 0) x[0] = x_tilde[0] = 1;
      bool reduced = false;
      while (!reduced) {
        for (int i = 0; i < size; ++i) {
          if (x_tilde[i] > 0 && rng.bernoulli(0.5)) {
            x_tilde[i] -= 1 + static_cast<Count>(rng.uniform_index(static_cast<std::uint64_t>(x_tilde[i])));
            reduced = true;
          }
        }
      }
      break;
    }
    case StartRelation::d2: {
      if (size < 2) throw std::invalid_argument("a swapped start needs at least two queues");
      if (std::all_of(x.begin(), x.end(), [&](Count v) { return v == x[0]; })) x[1] = x[0] + 1;
      int a = 0;
      int b = 0;
      do {
        a = static_cast<int>(rng.uniform_index(size));
        b = static_cast<int>(rng.uniform_index(size));
      } while (x[a] == x[b]);
      x_tilde = x;
      std::swap(x_tilde[a], x_tilde[b]);
      break;
    }
    case StartRelation::d3: {
      if (size < 2) throw std::invalid_argument("an interchange start needs at least two queues");
      std::vector<std::pair<int, int>> candidates;
      for (int n = 0; n < size; ++n)
        for (int m = 0; m < size; ++m)
          if (x[m] >= x[n] + 2) candidates.emplace_back(n, m);
      if (candidates.empty()) {
        x[1] = x[0] + 2;
        candidates.emplace_back(0, 1);
      }
      const auto [n, m] = candidates[rng.uniform_index(candidates.size())];
      x_tilde = x;
      ++x_tilde[n];
      --x_tilde[m];
      break;
    }
  }
  return {x, x_tilde};
}

}  // namespace

CouplingReport coupling_trajectory_check(const StochasticConfig& cfg, std::int64_t horizon, std::uint64_t seed,
                                         const CouplingCheckOptions& options) {
  cfg.validate();
  if (cfg.service_q != 1.0) throw std::invalid_argument("the coupling check requires perfect service (service_q = 1)");
  if (cfg.arrival_kind != ArrivalKind::bernoulli)
    throw std::invalid_argument("the coupling check requires Bernoulli arrivals");
  if (horizon < 0) throw std::invalid_argument("horizon must be non-negative");

  ExogenousStreams streams(seed);
  RandomStream policy_rng(seed, StreamTag::policy);
  RandomStream init_rng(derive_seed(seed, kInitialStateTag));
  const ServiceOutcomeMatrix perfect(cfg.n_queues, cfg.n_servers, true);

  auto [x, x_tilde] = initial_pair(cfg, options.start, options.initial_max, init_rng);
  CouplingReport report;
  report.horizon = horizon;
  report.start_relation = relation(x_tilde, x);

  for (std::int64_t slot = 1; slot <= horizon; ++slot) {
    const ConnectivityMatrix c = sample_connectivity(streams.connectivity, cfg);
    const ArrivalVector a = sample_arrivals(streams.arrivals, cfg);
    const Matching m = decide(options.policy, x, c, policy_rng);
    const RelationKind rel = relation(x_tilde, x);

    CoupledSlotOutput coupled{c, a, m, CouplingBranch::identity};
    if (rel.tag == RelationKind::Tag::equal && options.reallocate_when_equal) {
      if (auto better = find_balancing_reallocation(x, c, m)) {
        coupled.m_tilde = std::move(*better);
        ++report.reallocations;
      }
    } else {
      coupled = couple_step({x, x_tilde, rel, c, a, m});
    }

    report.coupled_connectivity_ones += coupled.c_tilde.count();
    report.coupled_connectivity_entries += static_cast<std::int64_t>(cfg.n_queues) * cfg.n_servers;
    report.coupled_arrivals += cost_total(coupled.a_tilde);
    report.coupled_arrival_entries += cfg.n_queues;

    const QueueVector x_next = step(x, c, m, perfect, a);
    const QueueVector x_tilde_next = step(x_tilde, coupled.c_tilde, coupled.m_tilde, perfect, coupled.a_tilde);
    const RelationKind next_rel = relation(x_tilde_next, x_next);
    const Count gap = cost_total(x_next) - cost_total(x_tilde_next);
    const bool cost_ok = gap >= 0 && (next_rel.tag != RelationKind::Tag::d2 || gap == 0);
    ++report.slots_run;
    ++report.relation_counts[static_cast<std::size_t>(next_rel.tag)];
    report.max_cost_gap = std::max(report.max_cost_gap, gap);
    if (!cost_ok) ++report.cost_violations;

    if (!next_rel.related() || !cost_ok) {
      if (report.violation_trace.empty()) {
        std::ostringstream os;
        os << "slot " << slot << ": x=" << format_vector(x) << " x~=" << format_vector(x_tilde)
           << " rel=" << to_string(rel.tag) << " c=" << format_matrix(c) << " a=" << format_vector(a)
           << " m=" << format_matrix(m) << " c~=" << format_matrix(coupled.c_tilde)
           << " a~=" << format_vector(coupled.a_tilde) << " m~=" << format_matrix(coupled.m_tilde)
           << " -> x=" << format_vector(x_next) << " x~=" << format_vector(x_tilde_next)
           << " rel=" << to_string(next_rel.tag);
        report.violation_trace = os.str();
      }
      if (!next_rel.related()) break;
    }
    ++report.preserved_slots;
    x = x_next;
    x_tilde = x_tilde_next;
  }
  return report;
}

}  // namespace mqms

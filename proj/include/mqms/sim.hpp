#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mqms/core.hpp"
#include "mqms/policies.hpp"

namespace mqms {

struct SimulationOptions {
  std::int64_t horizon = 200'000;
  std::int64_t warmup = 20'000;
  int replications = 20;
  /// A run diverges once total occupancy exceeds this many packets; it stops there.
  double divergence_threshold = 1e4;
  /// A run also diverges when the least-squares slope of total occupancy over the last
  /// half of the measured window exceeds this many packets per slot.
  double drift_threshold = 0.01;

  void validate() const;
};

struct ReplicationResult {
  double mean_total_occupancy = 0.0;  ///< time average over slots after warmup
  Count max_observed_total = 0;
  std::int64_t slots = 0;  ///< slots actually simulated (fewer than the horizon after divergence)
  std::uint64_t seed = 0;
  double drift = 0.0;  ///< packets per slot over the last half of the measured window
  bool diverged = false;
};

/// Everything that happened in one slot, for observers.
struct SlotRecord {
  std::int64_t slot = 0;
  const ConnectivityMatrix& c;
  const Matching& m;
  const ServiceOutcomeMatrix& q;
  const ArrivalVector& a;
  const QueueVector& x_prev;
  const QueueVector& x;
};

using SlotObserver = std::function<void(const SlotRecord&)>;

/// Simulates one replication starting from empty queues. Each slot samples connectivity,
/// lets the policy decide, samples service outcomes and arrivals, then applies `step`.
/// The exogenous streams depend only on `seed`, so different policies see identical
/// connectivity, arrivals and service outcomes.
ReplicationResult run_replication(const StochasticConfig& cfg, PolicyKind policy, const SimulationOptions& options,
                                  std::uint64_t seed, const SlotObserver& observer = {});

/// Seed of replication `index` under `master_seed`; shared by all policies and rates.
std::uint64_t replication_seed(std::uint64_t master_seed, int index);

struct MeanInterval {
  double mean = 0.0;
  double half_width = 0.0;  ///< 95% Student-t half width; 0 with fewer than two samples
};

MeanInterval student_t_interval(const std::vector<double>& samples);

struct SweepPoint {
  double arrival_rate = 0.0;
  PolicyKind policy = PolicyKind::mwm;
  double mean = 0.0;
  double ci_half_width = 0.0;
  int n_replications = 0;
  bool diverged = false;
  std::vector<double> replication_means;  ///< ordered by replication index
};

/// Runs `options.replications` replications for every (policy, rate) pair, in parallel
/// across replications. Output order is policies-major, then rates, as given.
std::vector<SweepPoint> sweep(const StochasticConfig& base, const std::vector<PolicyKind>& policies,
                              const std::vector<double>& rates, const SimulationOptions& options,
                              std::uint64_t master_seed);

struct PairedDifference {
  double arrival_rate = 0.0;
  double mean_diff = 0.0;  ///< policy A minus policy B
  double ci_half_width = 0.0;
  std::vector<double> differences;  ///< per replication
};

/// Per-replication differences of two sets of replication means from matched seeds.
PairedDifference paired_difference(const std::vector<double>& a_means, const std::vector<double>& b_means,
                                   double arrival_rate = 0.0);

PairedDifference paired_compare(const StochasticConfig& base, PolicyKind a, PolicyKind b, double arrival_rate,
                                const SimulationOptions& options, std::uint64_t master_seed);

struct StabilityPoint {
  std::optional<double> lambda_star;  ///< empty when no grid point diverged
  bool bracketed = false;
  std::vector<SweepPoint> points;  ///< evaluated grid points, up to and including lambda_star
};

/// Smallest rate of the ascending grid at which the policy diverges. Evaluation stops at
/// the first diverging point.
StabilityPoint stability_point(const StochasticConfig& base, PolicyKind policy, const std::vector<double>& rates,
                               const SimulationOptions& options, std::uint64_t master_seed);

/// Mean delay in slots from occupancy via Little's law, or nullopt at zero arrival rate.
std::optional<double> littles_law_delay(const SweepPoint& point, int n_queues);

/// Runs fn(i) for i in [0, count) on the available hardware threads.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace mqms

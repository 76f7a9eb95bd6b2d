#include "mqms/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "mqms/order.hpp"

namespace mqms {

void SimulationOptions::validate() const {
  if (warmup < 0) throw std::invalid_argument("warmup must be non-negative");
  if (horizon <= warmup) throw std::invalid_argument("horizon must exceed warmup");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (!(divergence_threshold > 0.0)) throw std::invalid_argument("divergence_threshold must be positive");
  if (!(drift_threshold > 0.0)) throw std::invalid_argument("drift_threshold must be positive");
}

namespace {

// Least-squares slope of y against t, accumulated online.
class SlopeAccumulator {
 public:
  void add(double t, double y) {
    ++n_;
    sum_t_ += t;
    sum_y_ += y;
    sum_tt_ += t * t;
    sum_ty_ += t * y;
  }
  double slope() const {
    if (n_ < 2) return 0.0;
    const double n = static_cast<double>(n_);
    const double denom = n * sum_tt_ - sum_t_ * sum_t_;
    return denom > 0.0 ? (n * sum_ty_ - sum_t_ * sum_y_) / denom : 0.0;
  }

 private:
  std::int64_t n_ = 0;
  double sum_t_ = 0.0, sum_y_ = 0.0, sum_tt_ = 0.0, sum_ty_ = 0.0;
};

}  // namespace

ReplicationResult run_replication(const StochasticConfig& cfg, PolicyKind policy, const SimulationOptions& options,
                                  std::uint64_t seed, const SlotObserver& observer) {
  cfg.validate();
  options.validate();

  ExogenousStreams streams(seed);
  RandomStream policy_rng(seed, StreamTag::policy);
  QueueVector x(static_cast<std::size_t>(cfg.n_queues), 0);

  ReplicationResult result;
  result.seed = seed;
  const std::int64_t drift_start = options.warmup + (options.horizon - options.warmup) / 2;
  // Offsets keep the slope sums well conditioned.
  const double drift_origin = static_cast<double>(drift_start);
  SlopeAccumulator drift;
  double measured_sum = 0.0;
  std::int64_t measured = 0;
  double all_sum = 0.0;

  for (std::int64_t t = 1; t <= options.horizon; ++t) {
    const ConnectivityMatrix c = sample_connectivity(streams.connectivity, cfg);
    const Matching m = decide(policy, x, c, policy_rng);
    const ServiceOutcomeMatrix q = sample_service(streams.service, cfg);
    const ArrivalVector a = sample_arrivals(streams.arrivals, cfg);
    QueueVector next = step(x, c, m, q, a);
    if (observer) observer(SlotRecord{t, c, m, q, a, x, next});
    x = std::move(next);

    const Count total = cost_total(x);
    result.slots = t;
    result.max_observed_total = std::max(result.max_observed_total, total);
    all_sum += static_cast<double>(total);
    if (t > options.warmup) {
      measured_sum += static_cast<double>(total);
      ++measured;
    }
    if (t > drift_start) drift.add(static_cast<double>(t) - drift_origin, static_cast<double>(total));
    if (static_cast<double>(total) > options.divergence_threshold) {
      result.diverged = true;
      break;
    }
  }

  result.mean_total_occupancy =
      measured > 0 ? measured_sum / static_cast<double>(measured) : all_sum / static_cast<double>(result.slots);
  result.drift = drift.slope();
  if (result.drift > options.drift_threshold) result.diverged = true;
  return result;
}

std::uint64_t replication_seed(std::uint64_t master_seed, int index) {
  return derive_seed(master_seed, 0x5EEDULL, static_cast<std::uint64_t>(index));
}

MeanInterval student_t_interval(const std::vector<double>& samples) {
  MeanInterval out;
  if (samples.empty()) return out;
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (const double s : samples) sum += s;
  out.mean = sum / n;
  if (samples.size() < 2) return out;
  double ss = 0.0;
  for (const double s : samples) ss += (s - out.mean) * (s - out.mean);
  const double stddev = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  out.half_width = t * stddev / std::sqrt(n);
  return out;
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  const int workers = std::max(1, std::min<int>(count, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SweepPoint> sweep(const StochasticConfig& base, const std::vector<PolicyKind>& policies,
                              const std::vector<double>& rates, const SimulationOptions& options,
                              std::uint64_t master_seed) {
  if (policies.empty()) throw std::invalid_argument("sweep needs at least one policy");
  if (rates.empty()) throw std::invalid_argument("sweep needs at least one arrival rate");
  options.validate();
  for (const double rate : rates) {
    StochasticConfig cfg = base;
    cfg.arrival_rate = rate;
    cfg.validate();
  }

  const int reps = options.replications;
  const int n_points = static_cast<int>(policies.size() * rates.size());
  std::vector<ReplicationResult> results(static_cast<std::size_t>(n_points) * reps);
  parallel_for(n_points * reps, [&](int task) {
    const int point = task / reps;
    const int rep = task % reps;
    StochasticConfig cfg = base;
    cfg.arrival_rate = rates[static_cast<std::size_t>(point) % rates.size()];
    const PolicyKind policy = policies[static_cast<std::size_t>(point) / rates.size()];
    results[task] = run_replication(cfg, policy, options, replication_seed(master_seed, rep));
  });

  std::vector<SweepPoint> points;
  points.reserve(static_cast<std::size_t>(n_points));
  for (int point = 0; point < n_points; ++point) {
    SweepPoint sp;
    sp.policy = policies[static_cast<std::size_t>(point) / rates.size()];
    sp.arrival_rate = rates[static_cast<std::size_t>(point) % rates.size()];
    sp.n_replications = reps;
    for (int rep = 0; rep < reps; ++rep) {
      const auto& r = results[static_cast<std::size_t>(point) * reps + rep];
      sp.replication_means.push_back(r.mean_total_occupancy);
      sp.diverged = sp.diverged || r.diverged;
    }
    const MeanInterval ci = student_t_interval(sp.replication_means);
    sp.mean = ci.mean;
    sp.ci_half_width = ci.half_width;
    points.push_back(std::move(sp));
  }
  return points;
}

PairedDifference paired_difference(const std::vector<double>& a_means, const std::vector<double>& b_means,
                                   double arrival_rate) {
  if (a_means.size() != b_means.size()) throw std::invalid_argument("paired samples must have equal length");
  PairedDifference out;
  out.arrival_rate = arrival_rate;
  out.differences.reserve(a_means.size());
  for (std::size_t i = 0; i < a_means.size(); ++i) out.differences.push_back(a_means[i] - b_means[i]);
  const MeanInterval ci = student_t_interval(out.differences);
  out.mean_diff = ci.mean;
  out.ci_half_width = ci.half_width;
  return out;
}

PairedDifference paired_compare(const StochasticConfig& base, PolicyKind a, PolicyKind b, double arrival_rate,
                                const SimulationOptions& options, std::uint64_t master_seed) {
  const auto points = sweep(base, {a, b}, {arrival_rate}, options, master_seed);
  return paired_difference(points[0].replication_means, points[1].replication_means, arrival_rate);
}

StabilityPoint stability_point(const StochasticConfig& base, PolicyKind policy, const std::vector<double>& rates,
                               const SimulationOptions& options, std::uint64_t master_seed) {
  if (rates.empty()) throw std::invalid_argument("stability_point needs a non-empty rate grid");
  if (!std::is_sorted(rates.begin(), rates.end()) ||
      std::adjacent_find(rates.begin(), rates.end()) != rates.end())
    throw std::invalid_argument("stability_point needs a strictly increasing rate grid");
  StabilityPoint out;
  for (const double rate : rates) {
    auto point = sweep(base, {policy}, {rate}, options, master_seed).front();
    const bool diverged = point.diverged;
    out.points.push_back(std::move(point));
    if (diverged) {
      out.lambda_star = rate;
      out.bracketed = true;
      break;
    }
  }
  return out;
}

std::optional<double> littles_law_delay(const SweepPoint& point, int n_queues) {
  const double throughput = point.arrival_rate * n_queues;
  if (throughput <= 0.0) return std::nullopt;
  return point.mean / throughput;
}

}  // namespace mqms

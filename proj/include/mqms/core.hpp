#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mqms {

using Count = std::int64_t;

/// Queue lengths X(t) or the intermediate state X'(t), one entry per queue.
using QueueVector = std::vector<Count>;

/// Per-queue packet arrivals A(t) of one slot.
using ArrivalVector = std::vector<Count>;

/// Dense row-major 0/1 matrix with queues on rows and servers on columns.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(int rows, int cols, bool fill = false);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool at(int row, int col) const { return bits_[index(row, col)] != 0; }
  void set(int row, int col, bool value) { bits_[index(row, col)] = value ? 1 : 0; }

  void swap_rows(int a, int b);
  /// Number of ones in the matrix.
  int count() const;

  bool operator==(const BinaryMatrix&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(col);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// C(t): entry (n, k) is 1 when queue n can reach server k in this slot.
class ConnectivityMatrix : public BinaryMatrix {
 public:
  using BinaryMatrix::BinaryMatrix;
  bool operator==(const ConnectivityMatrix&) const = default;
};

/// Q(t): entry (n, k) is 1 when a transmission from queue n through server k succeeds.
class ServiceOutcomeMatrix : public BinaryMatrix {
 public:
  using BinaryMatrix::BinaryMatrix;
  bool operator==(const ServiceOutcomeMatrix&) const = default;
};

/// Server assignment M(t). A valid matching has at most one 1 per row and per column;
/// invalid states are representable so that corrupted inputs can be rejected.
class Matching : public BinaryMatrix {
 public:
  using BinaryMatrix::BinaryMatrix;

  bool is_valid() const;
  /// Server assigned to `queue`, or -1. Returns the first one for invalid matchings.
  int server_of(int queue) const;
  /// Number of assigned (queue, server) pairs.
  int size() const { return count(); }

  bool operator==(const Matching&) const = default;
};

enum class ArrivalKind { bernoulli, binomial10 };

std::string_view to_string(ArrivalKind kind);
ArrivalKind arrival_kind_from_string(std::string_view name);

/// Trials per slot of the binomial arrival process.
inline constexpr int kBinomialTrials = 10;

struct StochasticConfig {
  int n_queues = 1;
  int n_servers = 1;
  double connectivity_p = 0.5;
  ArrivalKind arrival_kind = ArrivalKind::bernoulli;
  double arrival_rate = 0.0;
  double service_q = 1.0;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
  Count max_arrivals() const { return arrival_kind == ArrivalKind::bernoulli ? 1 : kBinomialTrials; }
};

/// Which exogenous or policy-internal process a random stream feeds.
enum class StreamTag : std::uint64_t {
  arrivals = 1,
  connectivity = 2,
  service = 3,
  policy = 4,
};

/// Mixes a master seed with a tag and an index (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index = 0);

/// A seeded 64-bit generator with platform-independent Bernoulli and index draws.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t master, StreamTag tag, std::uint64_t index = 0)
      : engine_(derive_seed(master, static_cast<std::uint64_t>(tag), index)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p);
  /// Uniform integer in [0, bound).
  std::uint64_t uniform_index(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

QueueVector intermediate_state(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m);

/// One slot of queue evolution: serve, clamp at zero, then add arrivals.
QueueVector step(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m,
                 const ServiceOutcomeMatrix& q, const ArrivalVector& a);

ConnectivityMatrix sample_connectivity(RandomStream& rng, const StochasticConfig& cfg);
ArrivalVector sample_arrivals(RandomStream& rng, const StochasticConfig& cfg);
ServiceOutcomeMatrix sample_service(RandomStream& rng, const StochasticConfig& cfg);

/// The three exogenous streams of one replication, derived from its seed.
struct ExogenousStreams {
  explicit ExogenousStreams(std::uint64_t seed)
      : arrivals(seed, StreamTag::arrivals),
        connectivity(seed, StreamTag::connectivity),
        service(seed, StreamTag::service) {}

  RandomStream arrivals;
  RandomStream connectivity;
  RandomStream service;
};

}  // namespace mqms

#include "mqms/core.hpp"

#include <array>
#include <cmath>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mqms {

BinaryMatrix::BinaryMatrix(int rows, int cols, bool fill)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("matrix dimensions must be non-negative");
  bits_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill ? 1 : 0);
}

void BinaryMatrix::swap_rows(int a, int b) {
  if (a == b) return;
  for (int k = 0; k < cols_; ++k) std::swap(bits_[index(a, k)], bits_[index(b, k)]);
}

int BinaryMatrix::count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool Matching::is_valid() const {
  for (int n = 0; n < rows(); ++n) {
    int row_sum = 0;
    for (int k = 0; k < cols(); ++k) row_sum += at(n, k) ? 1 : 0;
    if (row_sum > 1) return false;
  }
  for (int k = 0; k < cols(); ++k) {
    int col_sum = 0;
    for (int n = 0; n < rows(); ++n) col_sum += at(n, k) ? 1 : 0;
    if (col_sum > 1) return false;
  }
  return true;
}

int Matching::server_of(int queue) const {
  for (int k = 0; k < cols(); ++k)
    if (at(queue, k)) return k;
  return -1;
}

std::string_view to_string(ArrivalKind kind) {
  switch (kind) {
    case ArrivalKind::bernoulli: return "bernoulli";
    case ArrivalKind::binomial10: return "binomial10";
  }
  return "unknown";
}

ArrivalKind arrival_kind_from_string(std::string_view name) {
  if (name == "bernoulli") return ArrivalKind::bernoulli;
  if (name == "binomial10") return ArrivalKind::binomial10;
  throw std::invalid_argument("unknown arrival kind '" + std::string(name) + "'");
}

void StochasticConfig::validate() const {
  if (n_queues < 1) throw std::invalid_argument("n_queues must be >= 1");
  if (n_servers < 1) throw std::invalid_argument("n_servers must be >= 1");
  if (!(connectivity_p >= 0.0 && connectivity_p <= 1.0))
    throw std::invalid_argument("connectivity_p must lie in [0, 1]");
  if (!(service_q >= 0.0 && service_q <= 1.0)) throw std::invalid_argument("service_q must lie in [0, 1]");
  const double max_rate = static_cast<double>(max_arrivals());
  if (!(arrival_rate >= 0.0 && arrival_rate <= max_rate))
    throw std::invalid_argument("arrival_rate must lie in [0, " + std::to_string(static_cast<int>(max_rate)) +
                                "] for " + std::string(to_string(arrival_kind)) + " arrivals");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ tag) ^ index);
}

double RandomStream::uniform() {
  // 53 random mantissa bits give a uniform double in [0, 1).
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

bool RandomStream::bernoulli(double p) { return uniform() < p; }

std::uint64_t RandomStream::uniform_index(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

namespace {

void check_shape(const QueueVector& x, const BinaryMatrix& c, const BinaryMatrix& m) {
  const auto n = static_cast<int>(x.size());
  if (c.rows() != n || m.rows() != n || c.cols() != m.cols())
    throw std::invalid_argument("dimension mismatch between queue vector, connectivity and matching");
}

}  // namespace

QueueVector intermediate_state(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m) {
  check_shape(x_prev, c, m);
  QueueVector out(x_prev.size());
  for (int n = 0; n < c.rows(); ++n) {
    Count served = 0;
    for (int k = 0; k < c.cols(); ++k) served += (c.at(n, k) && m.at(n, k)) ? 1 : 0;
    out[n] = std::max<Count>(0, x_prev[n] - served);
  }
  return out;
}

QueueVector step(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m,
                 const ServiceOutcomeMatrix& q, const ArrivalVector& a) {
  check_shape(x_prev, c, m);
  if (q.rows() != c.rows() || q.cols() != c.cols() || a.size() != x_prev.size())
    throw std::invalid_argument("dimension mismatch between service outcomes, arrivals and the system");
  QueueVector out(x_prev.size());
  for (int n = 0; n < c.rows(); ++n) {
    Count served = 0;
    for (int k = 0; k < c.cols(); ++k) served += (c.at(n, k) && m.at(n, k) && q.at(n, k)) ? 1 : 0;
    out[n] = std::max<Count>(0, x_prev[n] - served) + a[n];
  }
  return out;
}

ConnectivityMatrix sample_connectivity(RandomStream& rng, const StochasticConfig& cfg) {
  ConnectivityMatrix c(cfg.n_queues, cfg.n_servers);
  for (int n = 0; n < cfg.n_queues; ++n)
    for (int k = 0; k < cfg.n_servers; ++k) c.set(n, k, rng.bernoulli(cfg.connectivity_p));
  return c;
}

ArrivalVector sample_arrivals(RandomStream& rng, const StochasticConfig& cfg) {
  const double max_rate = static_cast<double>(cfg.max_arrivals());
  if (!(cfg.arrival_rate >= 0.0 && cfg.arrival_rate <= max_rate))
    throw std::invalid_argument("arrival_rate out of range for the arrival kind");
  ArrivalVector a(static_cast<std::size_t>(cfg.n_queues), 0);
  if (cfg.arrival_kind == ArrivalKind::bernoulli) {
    for (auto& v : a) v = rng.bernoulli(cfg.arrival_rate) ? 1 : 0;
  } else {
    // Inverse-CDF draw of a Binomial(10, rate/10) count from one uniform.
    const double p = cfg.arrival_rate / kBinomialTrials;
    std::array<double, kBinomialTrials + 1> cdf{};
    double pmf = std::pow(1.0 - p, kBinomialTrials);
    double acc = 0.0;
    for (int i = 0; i <= kBinomialTrials; ++i) {
      acc += pmf;
      cdf[i] = acc;
      if (p < 1.0) pmf *= (static_cast<double>(kBinomialTrials - i) / (i + 1)) * (p / (1.0 - p));
    }
    if (p >= 1.0) cdf.fill(0.0);
    cdf[kBinomialTrials] = 1.0;
    for (auto& v : a) {
      const double u = rng.uniform();
      Count k = 0;
      while (u >= cdf[k]) ++k;
      v = k;
    }
  }
  return a;
}

ServiceOutcomeMatrix sample_service(RandomStream& rng, const StochasticConfig& cfg) {
  ServiceOutcomeMatrix q(cfg.n_queues, cfg.n_servers);
  for (int n = 0; n < cfg.n_queues; ++n)
    for (int k = 0; k < cfg.n_servers; ++k) q.set(n, k, rng.bernoulli(cfg.service_q));
  return q;
}

}  // namespace mqms

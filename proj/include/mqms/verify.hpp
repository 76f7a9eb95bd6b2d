#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mqms {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  std::string detail;          ///< one-line summary of what was measured
  std::string counterexample;  ///< first failing instance, empty when passed
};

struct VerifyOptions {
  int max_n = 4;
  int max_k = 4;
  int trials = 1000;
  int permutation_trials = 500;
  std::uint64_t seed = 1;
  int coupling_seeds = 100;
  std::int64_t coupling_horizon = 10'000;
  /// Negative control: replaces every reallocation fed to the strict-increase check by the
  /// original matching, so that suite must report counterexamples.
  bool corrupt = false;

  void validate() const;
};

/// Hungarian optimum against exhaustive enumeration on random weights 0..9.
SuiteResult verify_matching_oracle(int trials, int max_n, int max_k, std::uint64_t seed);
/// Every balancing reallocation is valid, classifies as c1 or c2 and strictly raises the
/// MW index; the reallocation chain ends at a maximum-weight matching.
SuiteResult verify_strict_increase(int trials, int max_n, int max_k, std::uint64_t seed, bool corrupt = false);
/// No balancing reallocation exists exactly when the matching has the maximum MW index:
/// exhaustively for N = K = 2 with queue lengths 0..3, then on random square instances.
SuiteResult verify_optimality_equivalence(int trials, int max_size, std::uint64_t seed);
/// All maximum-weight matchings leave intermediate states that are permutations of each other.
SuiteResult verify_mwm_permutation(int trials, int max_n, int max_k, std::uint64_t seed);
/// Coupled trajectories (N=3, K=2, p=0.5, Bernoulli 0.3, perfect service) keep a relation
/// and the cost ordering at every slot; coupled streams keep their marginal means.
SuiteResult verify_coupling(int seeds, std::int64_t horizon, std::uint64_t seed);

std::vector<SuiteResult> run_verify(const VerifyOptions& options);

}  // namespace mqms

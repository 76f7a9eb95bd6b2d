#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mqms/core.hpp"
#include "mqms/policies.hpp"
#include "mqms/sim.hpp"

namespace mqms {

/// Invalid or unreadable configuration. `field` names the offending key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Failure to read or write a data file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An experiment description. The arrival rate of `system` is unused; rates come from
/// `rate_grid`.
struct RunConfig {
  StochasticConfig system;
  SimulationOptions options;
  std::vector<double> rate_grid;
  std::vector<PolicyKind> policies;
  std::uint64_t seed = 1;
  std::optional<std::string> output_path;

  /// Throws ConfigError.
  void validate() const;
  /// `system` with the given arrival rate.
  StochasticConfig at_rate(double rate) const;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig parse_run_config_text(const std::string& text);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

/// Shortest decimal representation that reads back to the same double.
std::string format_number(double value);

std::string simulate_csv(const std::vector<SweepPoint>& points);
std::string compare_csv(const std::vector<PairedDifference>& diffs);

/// Throws IoError.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mqms

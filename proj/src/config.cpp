#include "mqms/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace mqms {

namespace {

using nlohmann::json;

const std::set<std::string> kRequiredKeys = {"n_queues",  "n_servers", "connectivity_p", "arrival_kind",
                                             "service_q", "rate_grid", "policies"};
const std::set<std::string> kOptionalKeys = {"seed",        "horizon",  "warmup", "replications",
                                             "output_path", "divergence_threshold", "drift_threshold"};

const json& require(const json& j, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(key, "missing required key");
  return *it;
}

double read_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::int64_t read_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    throw ConfigError(key, "integer out of range");
  return v.get<std::int64_t>();
}

int read_int(const json& v, const std::string& key) {
  const std::int64_t value = read_integer(v, key);
  if (value < INT32_MIN || value > INT32_MAX) throw ConfigError(key, "integer out of range");
  return static_cast<int>(value);
}

std::string read_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

void RunConfig::validate() const {
  // Validation messages of the library types start with the offending field name.
  auto wrap = [](const std::string& field, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      const std::string message = e.what();
      const std::string first = message.substr(0, message.find(' '));
      const bool known = kRequiredKeys.contains(first) || kOptionalKeys.contains(first);
      throw ConfigError(field.empty() && known ? first : field, message);
    }
  };
  wrap("", [&] {
    StochasticConfig probe = system;
    probe.arrival_rate = 0.0;
    probe.validate();
  });
  if (rate_grid.empty()) throw ConfigError("rate_grid", "must not be empty");
  for (const double rate : rate_grid) wrap("rate_grid", [&] { at_rate(rate).validate(); });
  if (policies.empty()) throw ConfigError("policies", "must not be empty");
  wrap("", [&] { options.validate(); });
}

StochasticConfig RunConfig::at_rate(double rate) const {
  StochasticConfig cfg = system;
  cfg.arrival_rate = rate;
  cfg.seed = seed;
  return cfg;
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kRequiredKeys.contains(key) && !kOptionalKeys.contains(key)) throw ConfigError(key, "unknown key");

  RunConfig config;
  config.system.n_queues = read_int(require(j, "n_queues"), "n_queues");
  config.system.n_servers = read_int(require(j, "n_servers"), "n_servers");
  config.system.connectivity_p = read_number(require(j, "connectivity_p"), "connectivity_p");
  config.system.service_q = read_number(require(j, "service_q"), "service_q");
  try {
    config.system.arrival_kind = arrival_kind_from_string(read_string(require(j, "arrival_kind"), "arrival_kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("arrival_kind", e.what());
  }

  const json& grid = require(j, "rate_grid");
  if (!grid.is_array()) throw ConfigError("rate_grid", "expected an array of numbers");
  for (const auto& v : grid) config.rate_grid.push_back(read_number(v, "rate_grid"));

  const json& policies = require(j, "policies");
  if (!policies.is_array()) throw ConfigError("policies", "expected an array of policy names");
  for (const auto& v : policies) {
    try {
      config.policies.push_back(policy_kind_from_string(read_string(v, "policies")));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("policies", e.what());
    }
  }

  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (!v.is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    config.seed = v.get<std::uint64_t>();
  }
  if (j.contains("horizon")) config.options.horizon = read_integer(j.at("horizon"), "horizon");
  if (j.contains("warmup")) config.options.warmup = read_integer(j.at("warmup"), "warmup");
  if (j.contains("replications")) config.options.replications = read_int(j.at("replications"), "replications");
  if (j.contains("divergence_threshold"))
    config.options.divergence_threshold = read_number(j.at("divergence_threshold"), "divergence_threshold");
  if (j.contains("drift_threshold"))
    config.options.drift_threshold = read_number(j.at("drift_threshold"), "drift_threshold");
  if (j.contains("output_path")) config.output_path = read_string(j.at("output_path"), "output_path");

  config.validate();
  return config;
}

RunConfig parse_run_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_run_config(j);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config_text(buffer.str());
}

json to_json(const RunConfig& config) {
  json j;
  j["n_queues"] = config.system.n_queues;
  j["n_servers"] = config.system.n_servers;
  j["connectivity_p"] = config.system.connectivity_p;
  j["arrival_kind"] = std::string(to_string(config.system.arrival_kind));
  j["service_q"] = config.system.service_q;
  j["rate_grid"] = config.rate_grid;
  json policies = json::array();
  for (const auto p : config.policies) policies.push_back(std::string(to_string(p)));
  j["policies"] = policies;
  j["seed"] = config.seed;
  j["horizon"] = config.options.horizon;
  j["warmup"] = config.options.warmup;
  j["replications"] = config.options.replications;
  j["divergence_threshold"] = config.options.divergence_threshold;
  j["drift_threshold"] = config.options.drift_threshold;
  if (config.output_path) j["output_path"] = *config.output_path;
  return j;
}

std::string format_number(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::string simulate_csv(const std::vector<SweepPoint>& points) {
  std::string out = "lambda,policy,mean_occupancy,ci_half_width,replications,diverged\n";
  for (const auto& p : points) {
    out += format_number(p.arrival_rate) + ',' + std::string(to_string(p.policy)) + ',' + format_number(p.mean) +
           ',' + format_number(p.ci_half_width) + ',' + std::to_string(p.n_replications) + ',' +
           (p.diverged ? "1" : "0") + '\n';
  }
  return out;
}

std::string compare_csv(const std::vector<PairedDifference>& diffs) {
  std::string out = "lambda,mean_diff,ci_half_width\n";
  for (const auto& d : diffs)
    out += format_number(d.arrival_rate) + ',' + format_number(d.mean_diff) + ',' + format_number(d.ci_half_width) +
           '\n';
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace mqms

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlsgs/flows.hpp"
#include "nlsgs/problem.hpp"
#include "nlsgs/sweeps.hpp"

namespace nlsgs::cli {

struct SeedConfig {
  std::string kind = "gaussian";  // gaussian | file | exact
  std::vector<double> shift;
  std::string path;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

struct SweepConfig {
  std::vector<double> omegas;
  bool warm_start = true;
  std::vector<std::vector<double>> seed_shifts;
  double margin = 1e-3;
  std::optional<double> omega0;
  bool write_fields = false;
  bool write_rescaled = false;
};

struct CompareConfig {
  int case_id = 1;
  std::vector<ComparisonRequest> runs;
  std::size_t max_iters = 200000;
};

struct ConvergeConfig {
  std::vector<double> h_list;
  std::string reference = "auto";
  double reference_h = 0.0;
};

struct CrosscheckConfig {
  std::vector<double> masses;
  double energy_tau = 1.0;
  double energy_epsilon = 1e-9;
  std::size_t energy_max_iters = 100000;
  double stabilization = 1.0;
  std::vector<std::vector<double>> seed_shifts;
};

struct RunConfig {
  ProblemSpec problem;
  DiscretizationSpec discretization;
  FlowConfig flow;
  SeedConfig seed;
  OutputConfig outputs;
  std::optional<SweepConfig> sweep;
  std::optional<CompareConfig> compare;
  std::optional<ConvergeConfig> converge;
  std::optional<CrosscheckConfig> crosscheck;
  bool has_problem = true;  ///< false when the file only configures a comparison
  nlohmann::json raw;
};

/// The JSON schema; its property lists also define the accepted keys.
const nlohmann::json& config_schema();

/// Strict parse: unknown keys, wrong types and out-of-range values raise ConfigError naming
/// the key. Physical bounds are re-checked through validate().
RunConfig parse_config(const nlohmann::json& j);

/// Reads and parses a file; unreadable files raise IoError, malformed JSON ConfigError.
RunConfig load_config(const std::string& path);

}  // namespace nlsgs::cli

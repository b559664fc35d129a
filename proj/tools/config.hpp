#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace catamp_cli {

/// Bad user input; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<int> n_atoms{100};
  std::vector<double> chi{0.2};
  std::vector<double> theta{0.0};
  std::string order = "twist_then_rotate";
  double gamma = 1.0;
  std::optional<double> t_end;  // empty means "auto"
  std::optional<std::size_t> n_trajectories;  // per-subcommand default
  std::optional<std::uint64_t> seed_base;
  std::vector<double> eta{0.5, 0.8, 0.9, 0.95, 1.0};
  std::string output_path;
  std::string output_format = "csv";
  int worker_count = 0;  // 0: all cores
  int samples = 401;
  int grid_points = 512;

  // Keys set by the config file or a flag; figures fall back to their own
  // parameter sets for anything not listed here.
  std::set<std::string> explicit_keys;
  bool has(const std::string& key) const { return explicit_keys.count(key) != 0; }
};

/// Parses "a", "a,b,c" or "start:stop:step" (stop included within half a step).
std::vector<double> parse_real_list(const std::string& text, const std::string& key);
std::vector<int> parse_int_list(const std::string& text, const std::string& key);

/// Overlays the keys present in `doc` onto `cfg`. Unknown keys are rejected.
void apply_json(RunConfig& cfg, const nlohmann::json& doc);
void load_config_file(RunConfig& cfg, const std::string& path);

/// Worker-count environment override.
inline constexpr const char* kWorkersEnv = "CATAMP_WORKERS";
void apply_environment(RunConfig& cfg);

/// Range and consistency checks shared by every subcommand.
void validate(const RunConfig& cfg);

}  // namespace catamp_cli

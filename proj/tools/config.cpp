#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

namespace catamp_cli {

namespace {

constexpr std::size_t kMaxListLength = 1'000'000;

double parse_real(const std::string& token, const std::string& key) {
  if (token.empty()) throw ConfigError(key + ": empty value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(key + ": not a finite number: '" + token + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> expand_range(double start, double stop, double step, const std::string& key) {
  if (!(step > 0)) throw ConfigError(key + ": range step must be positive");
  if (stop < start) throw ConfigError(key + ": range stop is below start");
  const double span = (stop - start) / step;
  if (span + 1 > static_cast<double>(kMaxListLength)) {
    throw ConfigError(key + ": range has too many points");
  }
  const auto count = static_cast<std::size_t>(std::floor(span + 0.5)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

std::vector<double> real_list_from_json(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_string()) return parse_real_list(v.get<std::string>(), key);
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& item : v) {
      if (!item.is_number()) throw ConfigError(key + ": list entries must be numbers");
      out.push_back(item.get<double>());
    }
    if (out.empty()) throw ConfigError(key + ": list is empty");
    return out;
  }
  if (v.is_object()) {
    for (const char* field : {"start", "stop", "step"}) {
      if (!v.contains(field) || !v[field].is_number()) {
        throw ConfigError(key + ": range object needs numeric start, stop and step");
      }
    }
    return expand_range(v["start"].get<double>(), v["stop"].get<double>(),
                        v["step"].get<double>(), key);
  }
  throw ConfigError(key + ": expected a number, list, range string or range object");
}

std::vector<int> to_ints(const std::vector<double>& values, const std::string& key) {
  std::vector<int> out;
  out.reserve(values.size());
  for (double v : values) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || std::abs(r) > 1e9) {
      throw ConfigError(key + ": expected integers");
    }
    out.push_back(static_cast<int>(r));
  }
  return out;
}

template <typename T>
T integer_from_json(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
  if (v.is_number_unsigned()) return static_cast<T>(v.get<std::uint64_t>());
  const auto i = v.get<std::int64_t>();
  if constexpr (std::is_unsigned_v<T>) {
    if (i < 0) throw ConfigError(key + ": must be non-negative");
  }
  return static_cast<T>(i);
}

std::string string_from_json(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key + ": expected a string");
  return v.get<std::string>();
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text, const std::string& key) {
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError(key + ": ranges are start:stop:step");
    return expand_range(parse_real(parts[0], key), parse_real(parts[1], key),
                        parse_real(parts[2], key), key);
  }
  std::vector<double> out;
  for (const auto& token : split(text, ',')) out.push_back(parse_real(token, key));
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& key) {
  return to_ints(parse_real_list(text, key), key);
}

void apply_json(RunConfig& cfg, const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known = {
      "n_atoms",    "chi",           "theta",        "order",         "gamma",
      "t_end",      "n_trajectories", "seed_base",   "eta",           "output_path",
      "output_format", "worker_count", "samples",    "grid_points"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
    cfg.explicit_keys.insert(key);
  }
  if (doc.contains("n_atoms")) cfg.n_atoms = to_ints(real_list_from_json(doc["n_atoms"], "n_atoms"), "n_atoms");
  if (doc.contains("chi")) cfg.chi = real_list_from_json(doc["chi"], "chi");
  if (doc.contains("theta")) cfg.theta = real_list_from_json(doc["theta"], "theta");
  if (doc.contains("eta")) cfg.eta = real_list_from_json(doc["eta"], "eta");
  if (doc.contains("order")) cfg.order = string_from_json(doc["order"], "order");
  if (doc.contains("gamma")) {
    if (!doc["gamma"].is_number()) throw ConfigError("gamma: expected a number");
    cfg.gamma = doc["gamma"].get<double>();
  }
  if (doc.contains("t_end")) {
    const auto& v = doc["t_end"];
    if (v.is_string() && v.get<std::string>() == "auto") {
      cfg.t_end.reset();
    } else if (v.is_number()) {
      cfg.t_end = v.get<double>();
    } else {
      throw ConfigError("t_end: expected a number or \"auto\"");
    }
  }
  if (doc.contains("n_trajectories")) {
    cfg.n_trajectories = integer_from_json<std::size_t>(doc["n_trajectories"], "n_trajectories");
  }
  if (doc.contains("seed_base")) {
    if (doc["seed_base"].is_null()) {
      cfg.seed_base.reset();
    } else {
      cfg.seed_base = integer_from_json<std::uint64_t>(doc["seed_base"], "seed_base");
    }
  }
  if (doc.contains("output_path")) cfg.output_path = string_from_json(doc["output_path"], "output_path");
  if (doc.contains("output_format")) {
    cfg.output_format = string_from_json(doc["output_format"], "output_format");
  }
  if (doc.contains("worker_count")) cfg.worker_count = integer_from_json<int>(doc["worker_count"], "worker_count");
  if (doc.contains("samples")) cfg.samples = integer_from_json<int>(doc["samples"], "samples");
  if (doc.contains("grid_points")) cfg.grid_points = integer_from_json<int>(doc["grid_points"], "grid_points");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  apply_json(cfg, doc);
}

void apply_environment(RunConfig& cfg) {
  const char* raw = std::getenv(kWorkersEnv);
  if (!raw || !*raw) return;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 0 || v > 4096) {
    throw ConfigError(std::string(kWorkersEnv) + ": expected a non-negative integer");
  }
  cfg.worker_count = static_cast<int>(v);
}

void validate(const RunConfig& cfg) {
  if (cfg.n_atoms.empty()) throw ConfigError("n_atoms: list is empty");
  if (cfg.chi.empty()) throw ConfigError("chi: list is empty");
  if (cfg.theta.empty()) throw ConfigError("theta: list is empty");
  if (cfg.eta.empty()) throw ConfigError("eta: list is empty");
  for (double e : cfg.eta) {
    if (e < 0 || e > 1) throw ConfigError("eta: values must lie in [0, 1]");
  }
  if (!(cfg.gamma > 0) || !std::isfinite(cfg.gamma)) throw ConfigError("gamma: must be positive");
  if (cfg.t_end && !(*cfg.t_end > 0)) throw ConfigError("t_end: must be positive or \"auto\"");
  if (cfg.order != "twist_then_rotate" && cfg.order != "rotate_then_twist") {
    throw ConfigError("order: expected twist_then_rotate or rotate_then_twist");
  }
  if (cfg.output_format != "csv" && cfg.output_format != "json") {
    throw ConfigError("output_format: expected csv or json");
  }
  if (cfg.worker_count < 0) throw ConfigError("worker_count: must be non-negative");
  if (cfg.samples < 2) throw ConfigError("samples: need at least 2");
  if (cfg.grid_points < 16) throw ConfigError("grid_points: need at least 16");
}

}  // namespace catamp_cli

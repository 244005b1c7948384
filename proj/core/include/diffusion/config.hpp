#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "diffusion/sweep.hpp"

namespace diffusion {

inline constexpr const char* kToolVersion = "1.0.0";

/// Configuration problem, already formatted as "<source>:<line>: <message>"
/// (line omitted when it cannot be located).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a single-run configuration. Missing keys take the default values
/// (200x200 lattice, alpha 0.5, 2.5% innovators); unknown keys are errors.
/// A run manifest written by this library is accepted as well, in which case
/// its embedded configuration is used.
SimConfig parse_sim_config(std::string_view text, std::string_view source = "config");

/// Parses a sweep grid; an empty object yields the default 360-run grid.
/// `seed` (master seed) and `replications` are returned when the file sets them.
struct GridFile {
  SweepGrid grid;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
};
GridFile parse_sweep_grid(std::string_view text, std::string_view source = "grid");

nlohmann::json to_json(const SimConfig& config);
nlohmann::json to_json(const SweepGrid& grid);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const NetworkStats& stats);
nlohmann::json to_json(const RoiReport& report);

/// Reproduction record for one command invocation. `config` must be the fully
/// resolved configuration so that feeding the manifest back reproduces the run.
nlohmann::json make_manifest(std::string_view command, const nlohmann::json& config,
                             std::uint64_t seed, const nlohmann::json& parameters = nlohmann::json::object());

}  // namespace diffusion

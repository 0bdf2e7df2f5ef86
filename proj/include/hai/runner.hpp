#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hai/serialize.hpp"

namespace hai {

struct RunContext {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;     // --seed; beats the config "seed" field
  std::optional<unsigned> workers;       // --workers; beats HAI_WORKERS and the config
};

struct RunOutcome {
  std::vector<std::string> files;  // written artifacts, in write order
  bool passed = true;              // false when a requested check failed
  json summary;                    // echoed to stdout by the CLI
};

std::vector<std::string> verbs();

// Workers: ctx.workers, else HAI_WORKERS, else config "workers", else 1.
unsigned resolve_workers(const json& config, const RunContext& ctx);
std::uint64_t resolve_seed(const json& config, const RunContext& ctx);

// Applies "/json/pointer=value" overrides; value is parsed as JSON and
// falls back to a string.
void apply_override(json& config, const std::string& assignment);

// Grid spec: an array of numbers or {"lo", "hi", "n", "scale": "linear"|"log"}.
std::vector<double> grid_from_json(const json& j, const std::string& path);

// Throws ConfigError for invalid configs and unknown verbs.
RunOutcome run_verb(const std::string& verb, const json& config, const RunContext& ctx);

// `<verb>_<spec_hash>_<grid_hash>.<ext>`
std::string artifact_name(const std::string& verb, const json& spec, const json& grid, const std::string& ext);

}  // namespace hai

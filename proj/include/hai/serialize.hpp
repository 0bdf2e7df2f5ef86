#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hai/dynamics.hpp"
#include "hai/functions.hpp"
#include "hai/literacy.hpp"
#include "hai/mcsim.hpp"

namespace hai {

using json = nlohmann::json;

// Function specs: {"family": name, "params": {...}, "domain": [lo, hi|null]}.
// from_distribution adds "distribution": "uniform" | "exponential" | "truncated_gaussian".
json to_json(const ProductionFunction& p);
json to_json(const CostFunction& c);
json to_json(const TransitionFunction& t);
json to_json(const SkillChain& chain);
json to_json(const VerificationCurve& v);
json to_json(const LiteracyModel& m);

// Parsers throw ConfigError carrying a JSON pointer rooted at `path`.
ProductionFunction production_from_json(const json& j, const std::string& path = "");
CostFunction cost_from_json(const json& j, const std::string& path = "");
TransitionFunction transition_from_json(const json& j, const std::string& path = "");
SkillChain chain_from_json(const json& j, const std::string& path = "");
VerificationCurve verification_from_json(const json& j, const std::string& path = "");
LiteracyModel literacy_from_json(const json& j, const std::string& path = "");

std::uint64_t fnv1a64(const std::string& bytes);
// 16 hex digits of FNV-1a over the canonical (sorted-key, compact) dump.
std::string hash_hex(const json& j);

// %.17g; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);
std::string csv_escape(const std::string& field);

struct CsvTable {
  std::string spec_hash;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // First line is "# spec_hash=<hash>", then the header, then rows; CRLF-free.
  std::string render() const;
  std::size_t column(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);

// Columns a, P, E, pi_1..pi_N, interval_m.
CsvTable sweep_table(const SweepSeries& s, const std::string& spec_hash);
// Columns s, e_b, p_b, q1, q0, signal_prob_good.
CsvTable literacy_table(const EffortProfile& prof, const std::string& spec_hash);

json sweep_record(const SweepSeries& s, const json& spec);
json simulation_record(const SimulationRun& run, const std::vector<double>& pi);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hai

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "estimand/checker.hpp"
#include "estimand/engine.hpp"
#include "estimand/oracle.hpp"
#include "estimand/outcomes.hpp"
#include "estimand/trial_model.hpp"

namespace estimand {

inline constexpr std::string_view kVersion = ESTIMAND_VERSION;

// ---------------------------------------------------------------------------
// Presets

struct Preset {
  std::string name;
  std::string description;
  ScenarioConfig config;
};

const std::vector<Preset>& presets();
/// Throws UnknownPreset.
const Preset& find_preset(std::string_view name);

// ---------------------------------------------------------------------------
// Config ingestion. Parsers are strict: unknown keys, wrong types and
// out-of-range values raise SchemaViolation naming the key. A scenario file
// may name a "preset" whose values it then overrides.

ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig parse_scenario_text(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

EstimandSpec parse_estimand(const nlohmann::json& doc);
EstimandSpec parse_estimand_text(std::string_view text);
EstimandSpec load_estimand(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Report emission

nlohmann::json to_json(const ScenarioConfig& config);
nlohmann::json to_json(const PerformanceSummary& summary, const ScenarioConfig& config);
nlohmann::json to_json(const OracleSummary& oracle, const ScenarioConfig& config,
                       const std::string& preset);
nlohmann::json to_json(const Verdict& verdict);
nlohmann::json to_json(const DecompositionReport& report, std::size_t cohort_size,
                       std::uint64_t seed);

/// Manifest written next to a per-rep CSV; together they reproduce the summary.
nlohmann::json make_manifest(const ScenarioConfig& config, const std::string& preset,
                             const std::vector<std::string>& outputs);

std::string summary_table(const PerformanceSummary& summary, const ScenarioConfig& config);
std::string oracle_table(const OracleSummary& oracle, const ScenarioConfig& config);
std::string verdict_text(const Verdict& verdict);

/// Shortest decimal representation that reads back to the same double.
std::string format_number(double value);

}  // namespace estimand

#include "estimand/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "estimand/error.hpp"

namespace estimand {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 2718281828ULL;

ScenarioConfig base_scenario(double p_ya_treat, double q612) {
  ScenarioConfig c;
  c.n = 1000;
  c.arms = default_duration_arms();
  c.p_ya_control = 0.4;
  c.p_ya_treat = p_ya_treat;
  c.p_disc_first = 0.15;
  c.p_disc_second = 0.15;
  c.q612 = q612;
  c.alpha = 0.05;
  c.n_reps = 10000;
  c.seed = kDefaultSeed;
  return c;
}

[[noreturn]] void schema_error(const std::string& key, const std::string& message) {
  throw Error(ErrorCode::SchemaViolation, key, "'" + key + "': " + message);
}

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!object.is_object()) schema_error(where, "expected a JSON object");
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) {
      schema_error(item.key(), "unknown key in " + where);
    }
  }
}

double number_at(const json& object, const std::string& key) {
  const json& v = object.at(key);
  if (!v.is_number()) schema_error(key, "expected a number");
  return v.get<double>();
}

int integer_at(const json& object, const std::string& key) {
  const json& v = object.at(key);
  if (!v.is_number_integer()) schema_error(key, "expected an integer");
  const auto value = v.get<long long>();
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
    schema_error(key, "integer out of range");
  }
  return static_cast<int>(value);
}

std::string string_at(const json& object, const std::string& key) {
  const json& v = object.at(key);
  if (!v.is_string()) schema_error(key, "expected a string");
  return v.get<std::string>();
}

std::string pretty_location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  const std::size_t end = std::min(text.size(), byte > 0 ? byte - 1 : 0);
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::string where = pretty_location(text, e.byte);
    throw Error(ErrorCode::MalformedJson, where, where + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::FileNotFound, path.string(), "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ArmDefinition parse_arm(const json& doc, bool duration_required) {
  reject_unknown_keys(doc, {"id", "label", "treatment_duration"}, "arm");
  ArmDefinition arm;
  if (!doc.contains("id")) schema_error("id", "arm needs an id");
  arm.id = string_at(doc, "id");
  arm.label = doc.contains("label") ? string_at(doc, "label") : arm.id;
  if (doc.contains("treatment_duration")) {
    arm.treatment_duration = integer_at(doc, "treatment_duration");
  } else if (duration_required) {
    schema_error("treatment_duration", "scenario arms need a treatment_duration");
  }
  return arm;
}

std::vector<ArmDefinition> parse_arms(const json& doc, bool duration_required) {
  if (!doc.is_array()) schema_error("arms", "expected an array");
  std::vector<ArmDefinition> arms;
  for (const auto& item : doc) arms.push_back(parse_arm(item, duration_required));
  return arms;
}

json arm_json(const ArmDefinition& arm) {
  json j = {{"id", arm.id}, {"label", arm.label}};
  if (arm.treatment_duration) j["treatment_duration"] = *arm.treatment_duration;
  return j;
}

std::string_view t_test_name(TTestKind kind) {
  return kind == TTestKind::Pooled ? "pooled" : "welch";
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<Preset>& presets() {
  static const std::vector<Preset> registry = [] {
    ScenarioConfig baseline = base_scenario(0.4, 0.4);
    baseline.p_disc_second = 0.0;
    return std::vector<Preset>{
        {"scenario1-independence",
         "no effect on either component; clinical outcome independent of discontinuation",
         base_scenario(0.4, 0.4)},
        {"scenario2-independence",
         "short arm clinically harmful (0.5 vs 0.4); independent components",
         base_scenario(0.5, 0.4)},
        {"scenario1-calibrated",
         "no effect on either component; P(Y_a=1 | discontinue 6-12) = 1/3",
         base_scenario(0.4, 1.0 / 3.0)},
        {"scenario2-calibrated",
         "short arm clinically harmful; P(Y_a=1 | discontinue 6-12) = 1/3",
         base_scenario(0.5, 1.0 / 3.0)},
        {"baseline-no-arm-only",
         "scenario 1 without months 6-12 discontinuation: identical arm laws",
         baseline},
    };
  }();
  return registry;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& preset : presets()) {
    if (preset.name == name) return preset;
  }
  std::string known;
  for (const auto& preset : presets()) known += (known.empty() ? "" : ", ") + preset.name;
  throw Error(ErrorCode::UnknownPreset, std::string(name),
              "unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

ScenarioConfig parse_scenario(const json& doc) {
  static const std::set<std::string> allowed = {
      "preset",       "n",             "arms",  "p_ya_control", "p_ya_treat",
      "p_ya_excess_timing", "p_disc_first", "p_disc_second", "q612", "alpha",
      "n_reps",       "seed",          "t_test"};
  reject_unknown_keys(doc, allowed, "scenario");

  ScenarioConfig c;
  if (doc.contains("preset")) {
    c = find_preset(string_at(doc, "preset")).config;
  } else {
    c = base_scenario(0.4, 0.4);
  }

  if (doc.contains("n")) c.n = integer_at(doc, "n");
  if (doc.contains("arms")) c.arms = parse_arms(doc.at("arms"), true);
  for (auto [key, field] : {std::pair{"p_ya_control", &ScenarioConfig::p_ya_control},
                            {"p_ya_treat", &ScenarioConfig::p_ya_treat},
                            {"p_disc_first", &ScenarioConfig::p_disc_first},
                            {"p_disc_second", &ScenarioConfig::p_disc_second},
                            {"q612", &ScenarioConfig::q612},
                            {"alpha", &ScenarioConfig::alpha}}) {
    if (doc.contains(key)) c.*field = number_at(doc, key);
  }
  if (doc.contains("p_ya_excess_timing") &&
      string_at(doc, "p_ya_excess_timing") != "after_month_6") {
    schema_error("p_ya_excess_timing", "only \"after_month_6\" is supported");
  }
  if (doc.contains("n_reps")) c.n_reps = integer_at(doc, "n_reps");
  if (doc.contains("seed")) {
    const json& v = doc.at("seed");
    if (!v.is_number_unsigned()) schema_error("seed", "expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  }
  if (doc.contains("t_test")) {
    const std::string kind = string_at(doc, "t_test");
    if (kind == "pooled") {
      c.t_test = TTestKind::Pooled;
    } else if (kind == "welch") {
      c.t_test = TTestKind::Welch;
    } else {
      schema_error("t_test", "expected \"pooled\" or \"welch\"");
    }
  }

  try {
    return validate_scenario(c);
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaViolation, e.field(), e.what());
  }
}

ScenarioConfig parse_scenario_text(std::string_view text) {
  return parse_scenario(parse_json(text));
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario_text(read_file(path));
}

EstimandSpec parse_estimand(const json& doc) {
  reject_unknown_keys(doc, {"arms", "endpoint", "events"}, "estimand");
  EstimandSpec spec;
  if (!doc.contains("arms")) schema_error("arms", "estimand needs arms");
  if (!doc.contains("endpoint")) schema_error("endpoint", "estimand needs an endpoint");
  spec.arms = parse_arms(doc.at("arms"), false);
  spec.endpoint = string_at(doc, "endpoint");

  if (doc.contains("events")) {
    const json& events = doc.at("events");
    if (!events.is_array()) schema_error("events", "expected an array");
    for (const auto& e : events) {
      reject_unknown_keys(e, {"name", "strategy", "strategy_label", "categories"}, "event");
      IntercurrentEvent event;
      if (!e.contains("name")) schema_error("name", "event needs a name");
      if (!e.contains("strategy")) schema_error("strategy", "event needs a strategy");
      event.name = string_at(e, "name");
      const std::string strategy = string_at(e, "strategy");
      if (strategy == "composite") {
        event.strategy = StrategyKind::composite();
      } else if (strategy == "while_on_treatment") {
        event.strategy = StrategyKind::while_on_treatment();
      } else if (strategy == "other") {
        if (!e.contains("strategy_label")) {
          schema_error("strategy_label", "strategy \"other\" needs a strategy_label");
        }
        event.strategy = StrategyKind::other(string_at(e, "strategy_label"));
      } else {
        schema_error("strategy", "expected \"composite\", \"while_on_treatment\" or \"other\"");
      }
      if (strategy != "other" && e.contains("strategy_label")) {
        schema_error("strategy_label", "only valid with strategy \"other\"");
      }

      if (e.contains("categories")) {
        const json& categories = e.at("categories");
        if (!categories.is_array()) schema_error("categories", "expected an array");
        for (const auto& cj : categories) {
          reject_unknown_keys(cj, {"id", "description", "applicable_arms", "window"}, "category");
          IntercurrentEventCategory category;
          if (!cj.contains("id")) schema_error("id", "category needs an id");
          category.id = string_at(cj, "id");
          category.description = cj.contains("description") ? string_at(cj, "description")
                                                            : category.id;
          if (!cj.contains("applicable_arms") || !cj.at("applicable_arms").is_array()) {
            schema_error("applicable_arms", "category needs an array of arm ids");
          }
          for (const auto& arm : cj.at("applicable_arms")) {
            if (!arm.is_string()) schema_error("applicable_arms", "arm ids must be strings");
            category.applicable_arms.push_back(arm.get<std::string>());
          }
          if (cj.contains("window")) {
            const json& w = cj.at("window");
            if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
              schema_error("window", "expected [start, end] in months");
            }
            category.window = MonthWindow{w[0].get<double>(), w[1].get<double>()};
          }
          event.categories.push_back(std::move(category));
        }
      }
      spec.events.push_back(std::move(event));
    }
  }
  return validate_estimand(spec);
}

EstimandSpec parse_estimand_text(std::string_view text) {
  return parse_estimand(parse_json(text));
}

EstimandSpec load_estimand(const std::filesystem::path& path) {
  return parse_estimand_text(read_file(path));
}

// ---------------------------------------------------------------------------

json to_json(const ScenarioConfig& c) {
  json arms = json::array();
  for (const auto& arm : c.arms) arms.push_back(arm_json(arm));
  return {{"n", c.n},
          {"arms", arms},
          {"p_ya_control", c.p_ya_control},
          {"p_ya_treat", c.p_ya_treat},
          {"p_ya_excess_timing", "after_month_6"},
          {"p_disc_first", c.p_disc_first},
          {"p_disc_second", c.p_disc_second},
          {"q612", c.q612},
          {"alpha", c.alpha},
          {"n_reps", c.n_reps},
          {"seed", c.seed},
          {"t_test", std::string(t_test_name(c.t_test))}};
}

json to_json(const PerformanceSummary& s, const ScenarioConfig& config) {
  return {{"artifact_version", std::string(kVersion)},
          {"preset", s.preset},
          {"seed", s.seed},
          {"n_reps", s.n_reps},
          {"mean_rd", s.mean_rd},
          {"mcse_rd", s.mcse_rd},
          {"mean_rd_pp", 100.0 * s.mean_rd},
          {"mcse_rd_pp", 100.0 * s.mcse_rd},
          {"rejection_fraction", s.rejection_fraction},
          {"mcse_rej", s.mcse_rej},
          {"rejection_pct", 100.0 * s.rejection_fraction},
          {"mcse_rej_pct", 100.0 * s.mcse_rej},
          {"mean_excess", s.mean_excess},
          {"mcse_excess", s.mcse_excess},
          {"config", to_json(config)}};
}

json to_json(const OracleSummary& o, const ScenarioConfig& config, const std::string& preset) {
  return {{"artifact_version", std::string(kVersion)},
          {"preset", preset},
          {"p_event_treat", o.p_event_treat},
          {"p_event_control", o.p_event_control},
          {"true_rd", o.true_rd},
          {"expected_excess", o.expected_excess},
          {"se_asymptotic", o.se_asymptotic},
          {"asymptotic_rejection", o.asymptotic_rejection},
          {"config", to_json(config)}};
}

json to_json(const Verdict& v) {
  json offending = json::array();
  for (const auto& o : v.offending) {
    offending.push_back({{"event", o.event},
                         {"category", o.category_id},
                         {"strategy", o.strategy.label},
                         {"arms_lacking", o.arms_lacking},
                         {"message", describe(o)}});
  }
  return {{"status", to_string(v.status)},
          {"offending", offending},
          {"rendered_definitions", v.rendered_definitions}};
}

json to_json(const DecompositionReport& r, std::size_t cohort_size, std::uint64_t seed) {
  return {{"cohort_size", cohort_size},
          {"seed", seed},
          {"d_a", r.d_a},
          {"d_b06", r.d_b06},
          {"m_b612", r.m_b612},
          {"additive_effect", r.additive_effect()},
          {"mean_effect", r.mean_effect},
          {"implied_rd_gap", r.implied_rd_gap()}};
}

json make_manifest(const ScenarioConfig& config, const std::string& preset,
                   const std::vector<std::string>& outputs) {
  return {{"artifact_version", std::string(kVersion)},
          {"preset", preset},
          {"seed", config.seed},
          {"timestamp", timestamp_utc()},
          {"config", to_json(config)},
          {"outputs", outputs}};
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

namespace {

void row(std::ostringstream& out, std::string_view key, const std::string& value) {
  out << "  " << key;
  for (std::size_t i = key.size(); i < 22; ++i) out << ' ';
  out << value << '\n';
}

}  // namespace

std::string summary_table(const PerformanceSummary& s, const ScenarioConfig& config) {
  std::ostringstream out;
  out << "Simulation summary"
      << (s.preset.empty() ? "" : " (" + s.preset + ")") << "\n";
  row(out, "n_reps", std::to_string(s.n_reps));
  row(out, "seed", std::to_string(s.seed));
  row(out, "n", std::to_string(config.n));
  row(out, "mean_rd", format_number(s.mean_rd));
  row(out, "mcse_rd", format_number(s.mcse_rd));
  row(out, "rejection_fraction", format_number(s.rejection_fraction));
  row(out, "mcse_rej", format_number(s.mcse_rej));
  row(out, "mean_excess", format_number(s.mean_excess));
  row(out, "mcse_excess", format_number(s.mcse_excess));
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "  => risk difference %.1f%% (%.2f), rejection %.1f%% (%.2f), "
                "excess %.1f (%.2f)\n",
                100 * s.mean_rd, 100 * s.mcse_rd, 100 * s.rejection_fraction, 100 * s.mcse_rej,
                s.mean_excess, s.mcse_excess);
  out << buf;
  return out.str();
}

std::string oracle_table(const OracleSummary& o, const ScenarioConfig& config) {
  std::ostringstream out;
  out << "Population values (exact enumeration)\n";
  row(out, "n", std::to_string(config.n));
  row(out, "p_event_treat", format_number(o.p_event_treat));
  row(out, "p_event_control", format_number(o.p_event_control));
  row(out, "true_rd", format_number(o.true_rd));
  row(out, "expected_excess", format_number(o.expected_excess));
  row(out, "se_asymptotic", format_number(o.se_asymptotic));
  row(out, "asymptotic_rejection", format_number(o.asymptotic_rejection));
  return out.str();
}

std::string verdict_text(const Verdict& v) {
  std::ostringstream out;
  out << "verdict: " << to_string(v.status) << '\n';
  for (const auto& o : v.offending) out << "  - " << describe(o) << '\n';
  out << "outcome definitions:\n";
  for (const auto& [arm, text] : v.rendered_definitions) out << "  " << arm << ": " << text << '\n';
  return out.str();
}

}  // namespace estimand

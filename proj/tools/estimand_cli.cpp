// estimand-sim: simulate, compute population values for, and lint
// composite-strategy estimands.
//
// Exit codes: 0 success (Causal/Unassessed for `check`), 1 usage or config
// error, 2 runtime failure, 3 NonCausal verdict from `check`.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "estimand/checker.hpp"
#include "estimand/dgm.hpp"
#include "estimand/engine.hpp"
#include "estimand/error.hpp"
#include "estimand/io.hpp"
#include "estimand/oracle.hpp"
#include "estimand/outcomes.hpp"

namespace {

using namespace estimand;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitNonCausal = 3;

// Thrown for failures that belong to exit code 1.
struct ConfigFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioSource {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App& cmd) {
    auto* config = cmd.add_option("--config", config_path, "scenario JSON file");
    auto* named = cmd.add_option("--preset", preset, "named preset (see `presets`)");
    config->excludes(named);
    cmd.add_option("--seed", seed, "master seed (overrides the config)");
  }

  std::pair<ScenarioConfig, std::string> load() const {
    try {
      ScenarioConfig config;
      std::string name;
      if (!config_path.empty()) {
        config = load_scenario(config_path);
        name = fs::path(config_path).stem().string();
      } else if (!preset.empty()) {
        config = find_preset(preset).config;
        name = preset;
      } else {
        throw ConfigFailure("one of --config or --preset is required");
      }
      if (seed) config.seed = *seed;
      return {config, name};
    } catch (const Error& e) {
      throw ConfigFailure(e.what());
    }
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int run_simulate(const ScenarioSource& source, std::optional<int> reps, const std::string& out_dir,
                 const std::string& format, unsigned workers) {
  auto [config, name] = source.load();
  if (reps) {
    config.n_reps = *reps;
    try {
      validate_scenario(config);
    } catch (const Error& e) {
      throw ConfigFailure(e.what());
    }
  }

  const SimulationResult result = run_simulation(config, workers, name);
  const std::string summary_json = to_json(result.summary, config).dump(2) + "\n";

  if (!out_dir.empty()) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::ostringstream csv;
    write_reps_csv(csv, result.reps);
    write_text(dir / "reps.csv", csv.str());
    write_text(dir / "summary.json", summary_json);
    write_text(dir / "manifest.json",
               make_manifest(config, name, {"reps.csv", "summary.json"}).dump(2) + "\n");
  }

  if (format == "json") {
    std::cout << summary_json;
  } else if (format == "table") {
    std::cout << summary_table(result.summary, config);
  } else {
    write_reps_csv(std::cout, result.reps);
  }
  return kExitOk;
}

int run_oracle(const ScenarioSource& source, const std::string& format) {
  const auto [config, name] = source.load();
  const OracleSummary oracle = summarize_population(config);
  if (format == "table") {
    std::cout << oracle_table(oracle, config);
  } else {
    std::cout << to_json(oracle, config, name).dump(2) << '\n';
  }
  return kExitOk;
}

int run_check(const std::string& path, const std::string& format) {
  EstimandSpec spec;
  try {
    spec = load_estimand(path);
  } catch (const Error& e) {
    throw ConfigFailure(e.what());
  }
  const Verdict verdict = check_estimand(spec);
  if (format == "json") {
    std::cout << to_json(verdict).dump(2) << '\n';
  } else {
    std::cout << verdict_text(verdict);
  }
  return verdict.status == VerdictStatus::NonCausal ? kExitNonCausal : kExitOk;
}

int run_decompose(const ScenarioSource& source, std::optional<std::size_t> cohort_size,
                  const std::string& dump_path) {
  const auto [config, name] = source.load();
  const std::size_t size = cohort_size.value_or(static_cast<std::size_t>(config.n));
  if (size == 0) throw ConfigFailure("--cohort-size must be positive");

  const auto cohort = generate_cohort(config, config.seed, size);
  if (!dump_path.empty()) {
    std::ofstream out(dump_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + dump_path);
    write_cohort_csv(out, cohort);
  }
  std::cout << to_json(decomposition_report(cohort), size, config.seed).dump(2) << '\n';
  return kExitOk;
}

int run_plan(const ScenarioSource& source, double target, int pilot, unsigned workers) {
  const auto [config, name] = source.load();
  const long long required = estimate_required_reps(config, target, pilot, workers);
  std::cout << nlohmann::json{{"preset", name},
                              {"target_mcse", target},
                              {"pilot_reps", pilot},
                              {"required_reps", required}}
                   .dump(2)
            << '\n';
  return kExitOk;
}

int run_presets() {
  for (const auto& preset : presets()) {
    std::cout << preset.name << "\n    " << preset.description << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite-estimand trial simulator and estimand checker"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  unsigned workers = 0;
  app.add_option("--workers", workers, "worker threads (default: ESTIMAND_MAX_WORKERS or all cores)");

  ScenarioSource sim_source, oracle_source, decompose_source, plan_source;
  std::optional<int> reps;
  std::string out_dir, sim_format = "json", oracle_format = "json";

  auto* simulate = app.add_subcommand("simulate", "run the Monte Carlo study");
  sim_source.add_to(*simulate);
  simulate->add_option("--reps", reps, "number of replications (overrides the config)");
  simulate->add_option("--out", out_dir, "write reps.csv, summary.json and manifest.json here");
  simulate->add_option("--format", sim_format, "stdout format")
      ->check(CLI::IsMember({"csv", "json", "table"}));
  simulate->add_option("--workers", workers, "worker threads");

  auto* oracle = app.add_subcommand("oracle", "exact population values for a scenario");
  oracle_source.add_to(*oracle);
  oracle->add_option("--format", oracle_format, "output format")
      ->check(CLI::IsMember({"json", "table"}));

  std::string estimand_path, check_format = "text";
  auto* check = app.add_subcommand("check", "lint an estimand definition");
  check->add_option("--estimand", estimand_path, "estimand JSON file")->required();
  check->add_option("--format", check_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  std::optional<std::size_t> cohort_size;
  std::string dump_path;
  auto* decompose = app.add_subcommand("decompose", "component contrasts over both potential outcomes");
  decompose_source.add_to(*decompose);
  decompose->add_option("--cohort-size", cohort_size, "patients to generate (default: n)");
  decompose->add_option("--dump-cohort", dump_path, "write the cohort as CSV");

  double target_mcse = 0.001;
  int pilot = 500;
  auto* plan = app.add_subcommand("plan", "replications needed for a target MCSE of the mean estimate");
  plan_source.add_to(*plan);
  plan->add_option("--target-mcse", target_mcse, "target Monte Carlo SE");
  plan->add_option("--pilot", pilot, "run-in replications");
  plan->add_option("--workers", workers, "worker threads");

  auto* list = app.add_subcommand("presets", "list named scenario presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate) return run_simulate(sim_source, reps, out_dir, sim_format, workers);
    if (*oracle) return run_oracle(oracle_source, oracle_format);
    if (*check) return run_check(estimand_path, check_format);
    if (*decompose) return run_decompose(decompose_source, cohort_size, dump_path);
    if (*plan) return run_plan(plan_source, target_mcse, pilot, workers);
    if (*list) return run_presets();
  } catch (const ConfigFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. All replications use each preset's pinned seed.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "estimand/checker.hpp"
#include "estimand/engine.hpp"
#include "estimand/io.hpp"
#include "estimand/oracle.hpp"
#include "estimand/outcomes.hpp"
#include "estimand/stats.hpp"

using namespace estimand;

namespace {

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("[%s] %s  %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct PresetRun {
  ScenarioConfig config;
  OracleSummary oracle;
  PerformanceSummary summary;
  double seconds = 0.0;
};

PresetRun run_preset(const std::string& name) {
  PresetRun r;
  r.config = find_preset(name).config;
  r.oracle = summarize_population(r.config);
  const auto start = std::chrono::steady_clock::now();
  r.summary = run_simulation(r.config, 0, name).summary;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int cli_exit_code(const std::string& args) {
  const std::string command = std::string(ESTIMAND_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double phi_reference(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

}  // namespace

int main() {
  const char* kPresets[] = {"scenario1-independence", "scenario2-independence",
                            "scenario1-calibrated", "scenario2-calibrated"};
  std::map<std::string, PresetRun> runs;
  for (const char* name : kPresets) runs[name] = run_preset(name);

  // 1. Oracle / Monte Carlo agreement at 3 MCSE, <= 10 s per preset.
  for (const char* name : kPresets) {
    const PresetRun& r = runs[name];
    const auto& s = r.summary;
    const double mcse_rej = mcse_proportion(s.rejection_fraction, s.n_reps);
    const bool rd_ok = std::abs(s.mean_rd - r.oracle.true_rd) <= 3 * s.mcse_rd;
    const bool rej_ok = std::abs(s.rejection_fraction - r.oracle.asymptotic_rejection) <= 3 * mcse_rej;
    const bool exc_ok = std::abs(s.mean_excess - r.oracle.expected_excess) <= 3 * s.mcse_excess;
    const bool time_ok = r.seconds <= 10.0;
    report(std::string("AC1 oracle-MC agreement ") + name, rd_ok && rej_ok && exc_ok && time_ok,
           fmt("n_reps=%lld rd %.5f vs %.5f (3mcse %.5f); rej %.4f vs %.4f (3mcse %.4f); "
               "excess %.3f vs %.3f (3mcse %.3f); %.2fs",
               s.n_reps, s.mean_rd, r.oracle.true_rd, 3 * s.mcse_rd, s.rejection_fraction,
               r.oracle.asymptotic_rejection, 3 * mcse_rej, s.mean_excess,
               r.oracle.expected_excess, 3 * s.mcse_excess, r.seconds));
  }

  // 2. Scenario 1 (calibrated) against the published table.
  {
    const auto& s = runs["scenario1-calibrated"].summary;
    const bool ok = std::abs(s.mean_rd - (-0.100)) <= 0.001 &&
                    std::abs(s.rejection_fraction - 0.892) <= 0.010 &&
                    std::abs(s.mean_excess - 49.9) <= 0.25;
    report("AC2 scenario 1 targets (-10.0% +-0.1pp, 89.2% +-1.0pp, 49.9 +-0.25)", ok,
           fmt("rd %.3f%%, rejection %.2f%%, excess %.3f", 100 * s.mean_rd,
               100 * s.rejection_fraction, s.mean_excess));
  }

  // 3. Scenario 2 (calibrated): harmful treatment masked.
  {
    const auto& r = runs["scenario2-calibrated"];
    const auto& s = r.summary;
    const bool ok = r.config.p_ya_treat > r.config.p_ya_control && s.mean_rd < 0.0 &&
                    s.rejection_fraction >= 0.05 && s.rejection_fraction <= 0.15 &&
                    std::abs(s.mean_excess - 50.0) <= 0.25;
    report("AC3 scenario 2 masks harm (rd < 0, rejection in [5%,15%], excess 50 +-0.25)", ok,
           fmt("p_ya %.2f vs %.2f; rd %.3f%%, rejection %.2f%%, excess %.3f", r.config.p_ya_treat,
               r.config.p_ya_control, 100 * s.mean_rd, 100 * s.rejection_fraction, s.mean_excess));
  }

  // 4. Independence presets: theta = -0.09, 45 expected excess events.
  {
    const auto& o = runs["scenario1-independence"].oracle;
    const bool ok = std::abs(o.true_rd - (-0.09)) < 1e-12 && std::abs(o.expected_excess - 45.0) < 1e-9;
    report("AC4 independence oracle (theta=-0.09, excess=45; MC agreement under AC1)", ok,
           fmt("theta %.15f, excess %.12f", o.true_rd, o.expected_excess));
  }

  // 5. MCSE of the mean estimate below 0.1%.
  {
    bool ok = true;
    std::string detail;
    for (const char* name : kPresets) {
      ok = ok && runs[name].summary.mcse_rd < 0.001;
      detail += fmt("%s %.5f; ", name, runs[name].summary.mcse_rd);
    }
    report("AC5 mcse_rd < 0.001 at n_reps=10000", ok, detail);
  }

  // 6. Sharp-null identity, per patient.
  {
    bool ok = true;
    std::size_t checked = 0;
    for (const char* name : {"scenario1-calibrated", "scenario1-independence"}) {
      const ScenarioConfig c = find_preset(name).config;
      const auto cohort = generate_cohort(c, c.seed, 200'000);
      for (const auto& p : cohort) {
        const int effect =
            int(potential_outcome(p, Arm::Treated)) - int(potential_outcome(p, Arm::Control));
        const ComponentBundle b = components_under(p, Arm::Control);
        const int predicted = -(1 - int(b.ya)) * (1 - int(b.yb_first)) * int(b.yb_second);
        ok = ok && effect == predicted;
        ++checked;
      }
    }
    report("AC6 sharp-null identity Y1-Y0 = -(1-Ya0)(1-Yb06_0)Yb612_0", ok,
           fmt("%zu patients checked", checked));
  }

  // 7. No arm-only category: causal null and nominal type I error.
  {
    const PresetRun r = run_preset("baseline-no-arm-only");
    const bool ok = std::abs(r.oracle.true_rd) < 1e-15 && r.summary.rejection_fraction >= 0.04 &&
                    r.summary.rejection_fraction <= 0.06 && r.summary.n_reps == 10000;
    report("AC7 no-defect baseline (theta=0, rejection in [4%,6%])", ok,
           fmt("theta %.3g, rejection %.4f (mcse %.4f)", r.oracle.true_rd,
               r.summary.rejection_fraction, r.summary.mcse_rej));
  }

  // 8. Checker fixtures and CLI exit codes.
  {
    const std::string dir = ESTIMAND_FIXTURE_DIR;
    const std::pair<const char*, const char*> expected[] = {{"table1-row1", "disc-6-12"},
                                                            {"table1-row2", "switch-on-progression"},
                                                            {"table1-row3", "transfuse-8-10"},
                                                            {"table1-row4", "stop-cbt"}};
    bool ok = true;
    std::string detail;
    for (const auto& [file, category] : expected) {
      const std::string path = dir + "/" + file + ".json";
      const Verdict v = check_estimand(load_estimand(path));
      const bool row_ok = v.status == VerdictStatus::NonCausal && v.offending.size() == 1 &&
                          v.offending[0].category_id == category &&
                          cli_exit_code("check --estimand " + path) == 3;
      ok = ok && row_ok;
      detail += fmt("%s:%s ", file, row_ok ? "ok" : "bad");
    }
    const std::string rescue = dir + "/rescue-medication.json";
    const bool rescue_ok = check_estimand(load_estimand(rescue)).status == VerdictStatus::Causal &&
                           cli_exit_code("check --estimand " + rescue) == 0;
    ok = ok && rescue_ok;
    detail += fmt("rescue-medication:%s", rescue_ok ? "ok" : "bad");
    report("AC8 checker fixtures (rows 1-4 NonCausal/exit 3, rescue Causal/exit 0)", ok, detail);
  }

  // 9. Numerics.
  {
    double worst_closed = 0.0;
    for (double t = -10.0; t <= 10.0 + 1e-9; t += 0.01) {
      const double cauchy = 0.5 + std::atan(t) / M_PI;
      const double df2 = 0.5 + t / (2.0 * std::sqrt(2.0 + t * t));
      worst_closed = std::max(worst_closed, std::abs(student_t_cdf(t, 1) - cauchy));
      worst_closed = std::max(worst_closed, std::abs(student_t_cdf(t, 2) - df2));
    }
    std::mt19937_64 gen(31337);
    std::uniform_real_distribution<double> shape(0.01, 100.0), unit(0.0, 1.0);
    double worst_reflection = 0.0;
    for (int i = 0; i < 10'000; ++i) {
      const double a = shape(gen), b = shape(gen), x = unit(gen);
      worst_reflection =
          std::max(worst_reflection, std::abs(reg_inc_beta(a, b, x) + reg_inc_beta(b, a, 1 - x) - 1));
    }
    double worst_normal = 0.0;
    for (double t = -4.0; t <= 4.0 + 1e-9; t += 0.001) {
      worst_normal = std::max(worst_normal, std::abs(student_t_cdf(t, 998) - phi_reference(t)));
    }
    const bool ok = worst_closed <= 1e-10 && worst_reflection <= 1e-10 && worst_normal < 1e-3;
    report("AC9 numerics (closed forms 1e-10, reflection 1e-10, df=998 vs normal 1e-3)", ok,
           fmt("closed %.2e, reflection %.2e, normal %.2e", worst_closed, worst_reflection,
               worst_normal));
  }

  // 10. Serial vs parallel byte-identical outputs.
  {
    const ScenarioConfig c = find_preset("scenario1-calibrated").config;
    const unsigned parallel = std::max(8u, std::thread::hardware_concurrency());
    const SimulationResult serial = run_simulation(c, 1, "scenario1-calibrated");
    const SimulationResult threaded = run_simulation(c, parallel, "scenario1-calibrated");
    std::ostringstream csv_a, csv_b;
    write_reps_csv(csv_a, serial.reps);
    write_reps_csv(csv_b, threaded.reps);
    const std::string json_a = to_json(serial.summary, c).dump(2);
    const std::string json_b = to_json(threaded.summary, c).dump(2);
    report("AC10 reproducibility serial vs parallel", csv_a.str() == csv_b.str() && json_a == json_b,
           fmt("workers 1 vs %u; csv %zu bytes; summary %zu bytes", parallel, csv_a.str().size(),
               json_a.size()));
  }

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}

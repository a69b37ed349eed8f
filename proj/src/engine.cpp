#include "estimand/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <thread>

#include "estimand/dgm.hpp"
#include "estimand/error.hpp"
#include "estimand/outcomes.hpp"
#include "estimand/rng.hpp"
#include "estimand/stats.hpp"

namespace estimand {

RepResult run_rep(const ScenarioConfig& config, long long rep_index, std::uint64_t master_seed) {
  const std::uint64_t substream = mix(master_seed, static_cast<std::uint64_t>(rep_index));
  const auto cohort = assign_arms(generate_cohort(config, mix(substream, 0)), mix(substream, 1));

  std::vector<std::uint8_t> y_treat, y_control;
  y_treat.reserve(cohort.size() / 2);
  y_control.reserve(cohort.size() / 2);
  int excess = 0;
  for (const auto& patient : cohort) {
    const Arm arm = *patient.assigned_arm;
    // Each arm's outcome follows that arm's own composite definition.
    const auto y = static_cast<std::uint8_t>(potential_outcome(patient, arm));
    (arm == Arm::Treated ? y_treat : y_control).push_back(y);
    excess += excess_indicator(patient);
  }

  const TestResult test = pooled_t_test(y_treat, y_control, config.alpha, config.t_test);
  return {rep_index, test.estimate, test.p_value, test.rejected, excess};
}

unsigned default_worker_count() {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("ESTIMAND_MAX_WORKERS")) {
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(cap, cap + std::char_traits<char>::length(cap), value);
    if (ec == std::errc() && value > 0) workers = std::min(workers, value);
  }
  return workers;
}

SimulationResult run_simulation(const ScenarioConfig& config, unsigned workers,
                                const std::string& preset) {
  if (config.n_reps < 2) {
    throw Error(ErrorCode::TooFewValues, "n_reps", "a simulation needs n_reps >= 2");
  }
  const auto n_reps = static_cast<std::size_t>(config.n_reps);
  if (workers == 0) workers = default_worker_count();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_reps));

  SimulationResult result;
  result.reps.resize(n_reps);

  if (workers <= 1) {
    for (std::size_t i = 0; i < n_reps; ++i) {
      result.reps[i] = run_rep(config, static_cast<long long>(i), config.seed);
    }
  } else {
    // Strided partition; each slot is written by exactly one worker.
    std::vector<std::exception_ptr> failures(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < n_reps; i += workers) {
              result.reps[i] = run_rep(config, static_cast<long long>(i), config.seed);
            }
          } catch (...) {
            failures[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  result.summary = summarize(result.reps, config.seed, preset);
  return result;
}

PerformanceSummary summarize(std::span<const RepResult> reps, std::uint64_t seed,
                             const std::string& preset) {
  if (reps.size() < 2) {
    throw Error(ErrorCode::TooFewValues, "reps", "summary needs at least two replications");
  }
  std::vector<RepResult> ordered(reps.begin(), reps.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const RepResult& a, const RepResult& b) { return a.rep_index < b.rep_index; });

  std::vector<double> thetas, excess;
  thetas.reserve(reps.size());
  excess.reserve(reps.size());
  long long rejections = 0;
  double theta_sum = 0.0, excess_sum = 0.0;
  for (const auto& rep : ordered) {
    thetas.push_back(rep.theta_hat);
    excess.push_back(rep.excess_count);
    theta_sum += rep.theta_hat;
    excess_sum += rep.excess_count;
    rejections += rep.rejected;
  }

  const auto n = static_cast<long long>(reps.size());
  PerformanceSummary s;
  s.n_reps = n;
  s.mean_rd = theta_sum / static_cast<double>(n);
  s.mcse_rd = mcse_mean(thetas);
  s.rejection_fraction = static_cast<double>(rejections) / static_cast<double>(n);
  s.mcse_rej = mcse_proportion(s.rejection_fraction, n);
  s.mean_excess = excess_sum / static_cast<double>(n);
  s.mcse_excess = mcse_mean(excess);
  s.seed = seed;
  s.preset = preset;
  return s;
}

long long estimate_required_reps(const ScenarioConfig& config, double target_mcse,
                                 int pilot_reps, unsigned workers) {
  if (pilot_reps < 2) {
    throw Error(ErrorCode::TooFewValues, "pilot_reps", "run-in needs at least two replications");
  }
  if (!(target_mcse > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "target_mcse", "target MCSE must be positive");
  }
  ScenarioConfig pilot = config;
  pilot.n_reps = pilot_reps;
  const SimulationResult run = run_simulation(pilot, workers);

  std::vector<double> thetas;
  thetas.reserve(run.reps.size());
  for (const auto& rep : run.reps) thetas.push_back(rep.theta_hat);
  const double ratio = sample_sd(thetas) / target_mcse;
  return std::max(1LL, static_cast<long long>(std::ceil(ratio * ratio)));
}

void write_reps_csv(std::ostream& out, std::span<const RepResult> reps) {
  out << "rep_index,theta_hat,p_value,rejected,excess_count\n";
  char buf[64];
  for (const auto& rep : reps) {
    out << rep.rep_index << ',';
    std::snprintf(buf, sizeof buf, "%.17g", rep.theta_hat);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", rep.p_value);
    out << buf << ',' << int(rep.rejected) << ',' << rep.excess_count << '\n';
  }
}

namespace {

template <typename T>
T parse_field(std::string_view text, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line),
                "cannot parse '" + std::string(text) + "' on line " + std::to_string(line));
  }
  return value;
}

}  // namespace

std::vector<RepResult> read_reps_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "rep_index,theta_hat,p_value,rejected,excess_count") {
    throw Error(ErrorCode::MalformedCsv, "header", "unexpected per-rep CSV header");
  }
  std::vector<RepResult> reps;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 5) {
      throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line_no),
                  "expected 5 columns on line " + std::to_string(line_no));
    }
    RepResult rep;
    rep.rep_index = parse_field<long long>(cells[0], line_no);
    rep.theta_hat = parse_field<double>(cells[1], line_no);
    rep.p_value = parse_field<double>(cells[2], line_no);
    rep.rejected = parse_field<int>(cells[3], line_no) != 0;
    rep.excess_count = parse_field<int>(cells[4], line_no);
    reps.push_back(rep);
  }
  return reps;
}

}  // namespace estimand

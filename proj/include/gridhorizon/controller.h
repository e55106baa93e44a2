#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridhorizon/action.h"
#include "gridhorizon/environment.h"
#include "gridhorizon/lp.h"
#include "gridhorizon/network.h"
#include "gridhorizon/planner.h"
#include "gridhorizon/scenario.h"

namespace gridhorizon {

enum class Policy { kRollingHorizon, kMyopic, kPerfectInfo, kTwoStage };

std::string_view ToString(Policy p);
// Accepts the canonical names plus "rh" and "pi". Throws invalid_argument.
Policy ParsePolicy(std::string_view name);

struct SimulationConfig {
  Policy policy = Policy::kRollingHorizon;
  PlannerConfig planner;
  ErrorSpec errors;
  int scenarios = 5;  // two-stage only
  lp::SolverOptions solver;
  PowerFlowOptions power_flow;
};

struct StepRecord {
  int t = 0;
  WindowForecast forecast;  // empty for plan-once policies after step 0
  ActionVector action;
  Realization realized;
  StepOutcome outcome;
  std::vector<double> soc_before;  // [device]
  double solve_seconds = 0.0;      // 0 when no LP was solved at this step
  int lp_iterations = 0;
  bool relaxed = false;            // wedge widened after an infeasible solve
};

struct SimulationTrace {
  Policy policy = Policy::kRollingHorizon;
  uint64_t seed = 0;
  SimulationConfig config;
  uint64_t realization_digest = 0;
  std::vector<StepRecord> steps;
  double total_cost = 0.0;
  int voltage_violations = 0;
  int current_violations = 0;
  int bus_phase_steps = 0;
  int solves = 0;
  double max_solve_seconds = 0.0;
  double mean_solve_seconds = 0.0;
  double worst_voltage = 0.0;  // largest |V| excess over the run
};

// Raised when a window program stays infeasible after relaxation or the
// environment cannot solve a step. `step` is the failing time index.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& message, int step)
      : std::runtime_error(message), step(step) {}
  int step;
};

// FNV-1a over the raw bytes of every drawn value, in a fixed order.
uint64_t RealizationDigest(const RealizationPath& path);

SimulationTrace Simulate(const NetworkModel& net, const Profiles& profiles,
                         const SimulationConfig& config, uint64_t seed);

// Solves one window with the relaxation fallback. Returns the model and the
// optimal solution; throws SimulationError(step) when no optimum is found.
struct PlannedWindow {
  WindowModel model;
  lp::LpSolution solution;
  double seconds = 0.0;
  bool relaxed = false;
};
PlannedWindow PlanWindow(const NetworkModel& net, const std::vector<double>& soc,
                         const std::vector<WindowForecast>& scenarios,
                         const PlannerConfig& planner, const lp::SolverOptions& solver,
                         const OperatingPoint& point, int step);

// Worker count from GRIDHORIZON_THREADS, capped by hardware concurrency and
// the number of jobs. Unset or invalid values mean hardware concurrency.
int WorkerCount(int jobs);

// Runs `config` for every seed. Results are in seed order regardless of the
// thread schedule. The first failure (lowest seed index) is rethrown.
std::vector<SimulationTrace> RunEnsemble(const NetworkModel& net, const Profiles& profiles,
                                         const SimulationConfig& config,
                                         const std::vector<uint64_t>& seeds);

struct PolicySummary {
  Policy policy = Policy::kRollingHorizon;
  int runs = 0;
  double mean_cost = 0.0;
  double stdev_cost = 0.0;
  double mean_solve_seconds = 0.0;
  double max_solve_seconds = 0.0;
  double violation_rate = 0.0;  // voltage violations per bus-phase-step
  double worst_violation = 0.0;
};

PolicySummary Summarize(const std::vector<SimulationTrace>& traces);

struct SweepCell {
  int window = 0;
  double beta = 0.0;
  int runs = 0;
  double mean_cost = 0.0;
  double stdev_cost = 0.0;
};

// Rolling-horizon runs for every (window, beta) pair, windows outermost.
std::vector<SweepCell> Sweep(const NetworkModel& net, const Profiles& profiles,
                             const SimulationConfig& base, const std::vector<int>& windows,
                             const std::vector<double>& betas,
                             const std::vector<uint64_t>& seeds);

}  // namespace gridhorizon

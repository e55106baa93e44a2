#include "gridhorizon/controller.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

namespace gridhorizon {

namespace {

using Clock = std::chrono::steady_clock;

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

void HashDouble(uint64_t& h, double v) {
  unsigned char bytes[sizeof(double)];
  std::memcpy(bytes, &v, sizeof(double));
  for (unsigned char b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
}

// Runs fn(i) for i in [0, jobs) on up to WorkerCount(jobs) threads. Every
// job runs even if another fails; the lowest-index exception is rethrown.
template <typename Fn>
void ParallelFor(int jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(jobs);
  const int workers = WorkerCount(jobs);
  auto guarded = [&](int i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) guarded(i);
  } else {
    std::mutex mu;
    int next = 0;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          int i;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= jobs) return;
            i = next++;
          }
          guarded(i);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void MeanStdev(const std::vector<double>& v, double& mean, double& stdev) {
  mean = 0.0;
  stdev = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  stdev = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

class Runner {
 public:
  Runner(const NetworkModel& net, const Profiles& profiles, const SimulationConfig& cfg,
         uint64_t seed)
      : net_(net), profiles_(profiles), cfg_(cfg) {
    trace_.policy = cfg.policy;
    trace_.seed = seed;
    trace_.config = cfg;
    path_ = SampleRealizationPath(profiles, net, cfg.errors, seed);
    trace_.realization_digest = RealizationDigest(path_);
    soc_ = InitialSoc(net);
  }

  SimulationTrace Run() {
    switch (cfg_.policy) {
      case Policy::kRollingHorizon:
        RunReceding(cfg_.planner.window);
        break;
      case Policy::kMyopic:
        RunReceding(1);
        break;
      case Policy::kPerfectInfo:
        RunOpenLoop({WindowForecast{0, path_}});
        break;
      case Policy::kTwoStage: {
        if (cfg_.scenarios < 1) throw std::invalid_argument("two-stage needs at least one scenario");
        std::vector<WindowForecast> scen;
        for (RealizationPath& p :
             SampleScenarios(profiles_, net_, cfg_.errors, cfg_.scenarios, trace_.seed)) {
          scen.push_back(WindowForecast{0, std::move(p)});
        }
        RunOpenLoop(scen);
        break;
      }
    }
    Finish();
    return std::move(trace_);
  }

 private:
  void RunReceding(int window) {
    PlannerConfig planner = cfg_.planner;
    planner.window = window;
    OperatingPoint point = FlatOperatingPoint(net_);
    for (int t = 0; t < profiles_.horizon; ++t) {
      StepRecord rec;
      rec.t = t;
      rec.forecast = MakeForecast(profiles_, t, window);
      if (planner.relinearize == Relinearize::kFlat) point = FlatOperatingPoint(net_);
      PlannedWindow pw = PlanWindow(net_, soc_, {rec.forecast}, planner, cfg_.solver, point, t);
      rec.action = ExtractAction(net_, pw.model, pw.solution, 0);
      rec.solve_seconds = pw.seconds;
      rec.lp_iterations = pw.solution.iterations;
      rec.relaxed = pw.relaxed;
      Execute(rec);
      point = OperatingPointFrom(net_, rec.outcome.flow, rec.outcome.executed);
      trace_.steps.push_back(std::move(rec));
    }
  }

  // Plans the whole horizon once and executes the fixed schedule.
  void RunOpenLoop(const std::vector<WindowForecast>& forecasts) {
    PlannerConfig planner = cfg_.planner;
    planner.window = profiles_.horizon;
    PlannedWindow pw = PlanWindow(net_, soc_, forecasts, planner, cfg_.solver,
                                  FlatOperatingPoint(net_), 0);
    for (int t = 0; t < profiles_.horizon; ++t) {
      StepRecord rec;
      rec.t = t;
      if (t == 0) {
        rec.forecast = forecasts.front();
        rec.solve_seconds = pw.seconds;
        rec.lp_iterations = pw.solution.iterations;
        rec.relaxed = pw.relaxed;
      }
      rec.action = ExtractAction(net_, pw.model, pw.solution, t);
      Execute(rec);
      trace_.steps.push_back(std::move(rec));
    }
  }

  void Execute(StepRecord& rec) {
    rec.soc_before = soc_;
    rec.realized = path_[rec.t];
    try {
      rec.outcome = Step(net_, soc_, rec.action, path_[rec.t], cfg_.power_flow);
    } catch (const PowerFlowError& e) {
      throw SimulationError("step " + std::to_string(rec.t) + ": " + e.what(), rec.t);
    }
    for (size_t d = 0; d < net_.devices.size(); ++d) {
      if (net_.devices[d].kind == DeviceKind::kBattery) soc_[d] = rec.outcome.next_soc[d];
    }
  }

  void Finish() {
    double total = 0.0, solve_sum = 0.0;
    for (const StepRecord& rec : trace_.steps) {
      total += rec.outcome.cost;
      const ViolationReport& v = rec.outcome.violations;
      trace_.voltage_violations += static_cast<int>(v.voltage.size());
      trace_.current_violations += static_cast<int>(v.current.size());
      trace_.bus_phase_steps += v.bus_phases_checked;
      trace_.worst_voltage = std::max(trace_.worst_voltage, v.worst_voltage);
      if (rec.solve_seconds > 0.0 || rec.lp_iterations > 0) {
        ++trace_.solves;
        solve_sum += rec.solve_seconds;
        trace_.max_solve_seconds = std::max(trace_.max_solve_seconds, rec.solve_seconds);
      }
    }
    trace_.total_cost = total;
    trace_.mean_solve_seconds = trace_.solves ? solve_sum / trace_.solves : 0.0;
  }

  const NetworkModel& net_;
  const Profiles& profiles_;
  const SimulationConfig& cfg_;
  RealizationPath path_;
  std::vector<double> soc_;
  SimulationTrace trace_;
};

}  // namespace

std::string_view ToString(Policy p) {
  switch (p) {
    case Policy::kRollingHorizon: return "rolling_horizon";
    case Policy::kMyopic: return "myopic";
    case Policy::kPerfectInfo: return "perfect_info";
    case Policy::kTwoStage: return "two_stage";
  }
  return "?";
}

Policy ParsePolicy(std::string_view name) {
  if (name == "rolling_horizon" || name == "rh") return Policy::kRollingHorizon;
  if (name == "myopic") return Policy::kMyopic;
  if (name == "perfect_info" || name == "pi") return Policy::kPerfectInfo;
  if (name == "two_stage") return Policy::kTwoStage;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

uint64_t RealizationDigest(const RealizationPath& path) {
  uint64_t h = kFnvOffset;
  for (const Realization& r : path) {
    HashDouble(h, r.price);
    for (double a : r.available) HashDouble(h, a);
    for (const PhaseValues& v : r.load_p) for (double x : v) HashDouble(h, x);
    for (const PhaseValues& v : r.load_q) for (double x : v) HashDouble(h, x);
  }
  return h;
}

PlannedWindow PlanWindow(const NetworkModel& net, const std::vector<double>& soc,
                         const std::vector<WindowForecast>& scenarios,
                         const PlannerConfig& planner, const lp::SolverOptions& solver,
                         const OperatingPoint& point, int step) {
  PlannedWindow out;
  PlannerConfig cfg = planner;
  const auto start = Clock::now();
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      out.model = BuildWindowModel(net, soc, scenarios, cfg, point);
    } catch (const PlannerError& e) {
      throw SimulationError("step " + std::to_string(step) + ": " + e.what(), step);
    }
    out.solution = lp::Solve(out.model.program, solver);
    if (out.solution.optimal()) break;
    if (attempt == 1) {
      throw SimulationError("step " + std::to_string(step) + ": window program " +
                                lp::ToString(out.solution.status) + " after widening the " +
                                "voltage wedge (" + out.solution.diagnostics + ")",
                            step);
    }
    cfg.wedge_phi = std::min(2.0 * cfg.wedge_phi, 0.49 * std::numbers::pi);
    out.relaxed = true;
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

int WorkerCount(int jobs) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("GRIDHORIZON_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = static_cast<int>(std::min<long>(v, n));
  }
  return std::max(1, std::min(n, jobs));
}

SimulationTrace Simulate(const NetworkModel& net, const Profiles& profiles,
                         const SimulationConfig& config, uint64_t seed) {
  config.planner.Validate();
  if (profiles.horizon < 1) throw std::invalid_argument("profiles have an empty horizon");
  return Runner(net, profiles, config, seed).Run();
}

std::vector<SimulationTrace> RunEnsemble(const NetworkModel& net, const Profiles& profiles,
                                         const SimulationConfig& config,
                                         const std::vector<uint64_t>& seeds) {
  std::vector<SimulationTrace> out(seeds.size());
  ParallelFor(static_cast<int>(seeds.size()),
              [&](int i) { out[i] = Simulate(net, profiles, config, seeds[i]); });
  return out;
}

PolicySummary Summarize(const std::vector<SimulationTrace>& traces) {
  PolicySummary s;
  if (traces.empty()) return s;
  s.policy = traces.front().policy;
  s.runs = static_cast<int>(traces.size());
  std::vector<double> costs;
  double solve_sum = 0.0;
  long violations = 0, checked = 0;
  int solves = 0;
  for (const SimulationTrace& t : traces) {
    costs.push_back(t.total_cost);
    solve_sum += t.mean_solve_seconds * t.solves;
    solves += t.solves;
    s.max_solve_seconds = std::max(s.max_solve_seconds, t.max_solve_seconds);
    violations += t.voltage_violations;
    checked += t.bus_phase_steps;
    s.worst_violation = std::max(s.worst_violation, t.worst_voltage);
  }
  MeanStdev(costs, s.mean_cost, s.stdev_cost);
  s.mean_solve_seconds = solves ? solve_sum / solves : 0.0;
  s.violation_rate = checked ? static_cast<double>(violations) / static_cast<double>(checked) : 0.0;
  return s;
}

std::vector<SweepCell> Sweep(const NetworkModel& net, const Profiles& profiles,
                             const SimulationConfig& base, const std::vector<int>& windows,
                             const std::vector<double>& betas,
                             const std::vector<uint64_t>& seeds) {
  if (windows.empty() || betas.empty() || seeds.empty()) {
    throw std::invalid_argument("sweep grids and seed list must be nonempty");
  }
  std::vector<SimulationConfig> cells;
  for (int w : windows) {
    for (double b : betas) {
      SimulationConfig c = base;
      c.policy = Policy::kRollingHorizon;
      c.planner.window = w;
      c.planner.beta = b;
      c.planner.Validate();
      cells.push_back(c);
    }
  }
  const int per_cell = static_cast<int>(seeds.size());
  std::vector<double> cost(cells.size() * seeds.size());
  ParallelFor(static_cast<int>(cost.size()), [&](int i) {
    cost[i] = Simulate(net, profiles, cells[i / per_cell], seeds[i % per_cell]).total_cost;
  });
  std::vector<SweepCell> out;
  for (size_t c = 0; c < cells.size(); ++c) {
    SweepCell cell;
    cell.window = cells[c].planner.window;
    cell.beta = cells[c].planner.beta;
    cell.runs = per_cell;
    std::vector<double> v(cost.begin() + c * per_cell, cost.begin() + (c + 1) * per_cell);
    MeanStdev(v, cell.mean_cost, cell.stdev_cost);
    out.push_back(cell);
  }
  return out;
}

}  // namespace gridhorizon

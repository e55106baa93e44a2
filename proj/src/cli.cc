#include "gridhorizon/cli.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "gridhorizon/csv.h"
#include "gridhorizon/planner.h"
#include "gridhorizon/scenario.h"

namespace gridhorizon::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Input problems that are not parse errors of a specific document.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string Trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
  return b == std::string_view::npos ? "" : std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitList(std::string_view text) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string item = Trim(text.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

template <typename T>
T ParseNumber(const std::string& s, std::string_view what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad " + std::string(what) + " '" + s + "'");
  }
  return v;
}

std::string F(double v) { return csv::FormatDouble(v); }

const char* kPhaseNames[kNumPhases] = {"a", "b", "c"};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteOutput(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  csv::WriteFileAtomic(path, content);
}

struct Options {
  std::string config;
  std::string network;
  std::string profiles;
  std::string policy;
  std::string policies;
  std::string seeds;
  std::string out;
  std::string relinearize;
  std::string tw_grid;
  std::string beta_grid;
  std::string injections;
  std::string lp_out;
  std::string input_dir;
  std::optional<int> tw, chords, wedge_segments, scenarios, start;
  std::optional<double> beta, wedge_phi_deg;
  std::optional<double> sigma, sigma_pv, sigma_wt, sigma_p, sigma_q, sigma_price;
  bool no_export = false;
};

struct RunSetup {
  NetworkModel net;
  Profiles profiles;
  SimulationConfig sim;
  std::vector<uint64_t> seeds;
  std::string out;
};

// Config file values first, then flags.
RunSetup Resolve(const Options& o, bool need_profiles) {
  json cfg = json::object();
  if (!o.config.empty()) {
    try {
      cfg = json::parse(ReadFile(o.config));
    } catch (const json::exception& e) {
      throw InputError(o.config + ": " + e.what());
    }
    if (!cfg.is_object()) throw InputError(o.config + ": expected a JSON object");
  }
  auto str = [&](const char* key, const std::string& flag) {
    if (!flag.empty()) return flag;
    if (cfg.contains(key)) return cfg.at(key).get<std::string>();
    return std::string();
  };
  RunSetup s;
  const std::string network = str("network", o.network);
  if (network.empty()) throw UsageError("--network is required");
  s.net = LoadNetworkFile(network);
  const std::string profiles = str("profiles", o.profiles);
  if (need_profiles) {
    if (profiles.empty()) throw UsageError("--profiles is required");
    s.profiles = LoadProfiles(profiles, s.net);
  }

  SimulationConfig& sim = s.sim;
  const json planner = cfg.value("planner", json::object());
  const json errors = cfg.value("errors", json::object());
  try {
    sim.planner.window = planner.value("window", sim.planner.window);
    sim.planner.beta = planner.value("beta", sim.planner.beta);
    sim.planner.chords = planner.value("chords", sim.planner.chords);
    sim.planner.wedge_segments = planner.value("wedge_segments", sim.planner.wedge_segments);
    if (planner.contains("wedge_phi_deg")) {
      sim.planner.wedge_phi = planner.at("wedge_phi_deg").get<double>() * std::numbers::pi / 180;
    }
    sim.planner.allow_export = planner.value("allow_export", sim.planner.allow_export);
    std::string relin = planner.value("relinearize", std::string("warm"));
    if (!o.relinearize.empty()) relin = o.relinearize;
    if (relin == "flat") {
      sim.planner.relinearize = Relinearize::kFlat;
    } else if (relin == "warm") {
      sim.planner.relinearize = Relinearize::kWarm;
    } else {
      throw UsageError("--relinearize must be flat or warm");
    }
    sim.errors.pv = errors.value("pv", sim.errors.pv);
    sim.errors.wt = errors.value("wt", sim.errors.wt);
    sim.errors.p_demand = errors.value("p_demand", sim.errors.p_demand);
    sim.errors.q_demand = errors.value("q_demand", sim.errors.q_demand);
    sim.errors.price = errors.value("price", sim.errors.price);
    sim.scenarios = cfg.value("scenarios", sim.scenarios);
    if (cfg.contains("policy")) sim.policy = ParsePolicy(cfg.at("policy").get<std::string>());
  } catch (const json::exception& e) {
    throw InputError(o.config + ": " + e.what());
  }
  if (o.tw) sim.planner.window = *o.tw;
  if (o.beta) sim.planner.beta = *o.beta;
  if (o.chords) sim.planner.chords = *o.chords;
  if (o.wedge_segments) sim.planner.wedge_segments = *o.wedge_segments;
  if (o.wedge_phi_deg) sim.planner.wedge_phi = *o.wedge_phi_deg * std::numbers::pi / 180.0;
  if (o.no_export) sim.planner.allow_export = false;
  if (o.scenarios) sim.scenarios = *o.scenarios;
  if (o.sigma) sim.errors = {*o.sigma, *o.sigma, *o.sigma, *o.sigma, *o.sigma};
  if (o.sigma_pv) sim.errors.pv = *o.sigma_pv;
  if (o.sigma_wt) sim.errors.wt = *o.sigma_wt;
  if (o.sigma_p) sim.errors.p_demand = *o.sigma_p;
  if (o.sigma_q) sim.errors.q_demand = *o.sigma_q;
  if (o.sigma_price) sim.errors.price = *o.sigma_price;
  if (!o.policy.empty()) {
    try {
      sim.policy = ParsePolicy(o.policy);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  for (double v : {sim.errors.pv, sim.errors.wt, sim.errors.p_demand, sim.errors.q_demand,
                   sim.errors.price}) {
    if (!(v >= 0.0)) throw UsageError("standard deviations must be non-negative");
  }
  if (sim.scenarios < 1) throw UsageError("--scenarios must be at least 1");
  try {
    sim.planner.Validate();
  } catch (const PlannerError& e) {
    throw UsageError(e.what());
  }

  std::string seeds = o.seeds;
  if (seeds.empty() && cfg.contains("seeds")) {
    const json& js = cfg.at("seeds");
    if (js.is_array()) {
      for (const json& v : js) s.seeds.push_back(v.get<uint64_t>());
    } else {
      seeds = js.get<std::string>();
    }
  }
  if (!seeds.empty()) {
    try {
      s.seeds = ParseSeeds(seeds);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (s.seeds.empty()) s.seeds = {1};
  s.out = str("out", o.out);
  return s;
}

std::string OutDir(const RunSetup& s) {
  std::string dir = s.out.empty() ? "." : s.out;
  fs::create_directories(dir);
  return dir;
}

std::string TraceName(Policy p, uint64_t seed) {
  return "trace_" + std::string(ToString(p)) + "_seed" + std::to_string(seed) + ".csv";
}

std::string TimingName(Policy p, uint64_t seed) {
  return "timing_" + std::string(ToString(p)) + "_seed" + std::to_string(seed) + ".csv";
}

std::string Hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json SummaryJson(const PolicySummary& s) {
  return {{"policy", ToString(s.policy)},
          {"runs", s.runs},
          {"mean_cost", s.mean_cost},
          {"stdev_cost", s.stdev_cost},
          {"mean_solve_seconds", s.mean_solve_seconds},
          {"max_solve_seconds", s.max_solve_seconds},
          {"violation_rate", s.violation_rate},
          {"worst_violation", s.worst_violation}};
}

void WriteTraces(const std::string& dir, const NetworkModel& net,
                 const std::vector<SimulationTrace>& traces) {
  for (const SimulationTrace& t : traces) {
    csv::WriteFileAtomic((fs::path(dir) / TraceName(t.policy, t.seed)).string(),
                         FormatTrace(net, t));
    csv::WriteFileAtomic((fs::path(dir) / TimingName(t.policy, t.seed)).string(),
                         FormatTimings(t));
  }
}

void LogRelaxations(const std::vector<SimulationTrace>& traces) {
  for (const SimulationTrace& tr : traces) {
    for (const StepRecord& r : tr.steps) {
      if (r.relaxed) {
        std::cerr << "note: " << ToString(tr.policy) << " seed " << tr.seed << " step " << r.t
                  << ": voltage wedge widened after an infeasible window\n";
      }
    }
  }
}

int CmdPf(const Options& o) {
  RunSetup s = Resolve(o, false);
  PowerFlowInput input = PowerFlowInput::Zero(s.net);
  if (!o.injections.empty()) {
    std::ifstream in(o.injections);
    if (!in) throw InputError("cannot open " + o.injections);
    try {
      input = ParseInjections(in, s.net);
    } catch (const std::invalid_argument& e) {
      throw InputError(o.injections + ": " + e.what());
    }
  }
  PowerFlowSolution sol;
  try {
    sol = SolvePowerFlow(s.net, input);
  } catch (const PowerFlowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  std::cerr << "converged in " << sol.iterations << " iterations, residual "
            << F(sol.residual) << "\n";
  WriteOutput(s.out, FormatPowerFlow(s.net, sol));
  return kExitOk;
}

int CmdPlan(const Options& o) {
  RunSetup s = Resolve(o, true);
  const int start = o.start.value_or(0);
  if (start < 0 || start >= s.profiles.horizon) throw UsageError("--start outside the horizon");
  PlannedWindow pw = PlanWindow(s.net, InitialSoc(s.net),
                                {MakeForecast(s.profiles, start, s.sim.planner.window)},
                                s.sim.planner, s.sim.solver, FlatOperatingPoint(s.net), start);
  if (!o.lp_out.empty()) WriteOutput(o.lp_out, lp::ToLpFormat(pw.model.program));
  std::ostringstream out;
  out << "# objective: " << F(pw.solution.objective) << "\n";
  out << "period,t,device,kind,p,q,p_ch,p_dis,curtail,energy\n";
  for (int k = 0; k < pw.model.periods; ++k) {
    ActionVector a = ExtractAction(s.net, pw.model, pw.solution, k);
    for (size_t d = 0; d < s.net.devices.size(); ++d) {
      const Device& dev = s.net.devices[d];
      if (dev.kind == DeviceKind::kSubstation) continue;
      const DeviceAction& x = a.devices[d];
      double energy = 0.0;
      if (dev.kind == DeviceKind::kBattery) {
        energy = pw.solution.x[pw.model.Column(Quantity::kEnergy, static_cast<int>(d), -1, k)];
      }
      out << csv::JoinRow({std::to_string(k), std::to_string(start + k), dev.id,
                           std::string(ToString(dev.kind)), F(x.p), F(x.q), F(x.p_ch),
                           F(x.p_dis), F(x.curtail), F(energy)})
          << "\n";
    }
  }
  std::cerr << "window " << start << ".." << start + pw.model.periods - 1 << ": "
            << pw.model.program.num_variables() << " columns, "
            << pw.model.program.num_constraints() << " rows, " << pw.solution.iterations
            << " iterations, " << F(pw.seconds) << " s\n";
  WriteOutput(s.out.empty() ? "-" : s.out, out.str());
  return kExitOk;
}

int CmdRun(const Options& o) {
  RunSetup s = Resolve(o, true);
  const std::string dir = OutDir(s);
  std::vector<SimulationTrace> traces = RunEnsemble(s.net, s.profiles, s.sim, s.seeds);
  LogRelaxations(traces);
  WriteTraces(dir, s.net, traces);
  PolicySummary sum = Summarize(traces);
  json j = SummaryJson(sum);
  json runs = json::array();
  for (const SimulationTrace& t : traces) {
    runs.push_back({{"seed", t.seed},
                    {"total_cost", t.total_cost},
                    {"realization_digest", Hex(t.realization_digest)},
                    {"max_solve_seconds", t.max_solve_seconds}});
  }
  j["seeds"] = runs;
  csv::WriteFileAtomic((fs::path(dir) / "summary.json").string(), j.dump(2) + "\n");
  std::cout << ToString(sum.policy) << ": mean cost " << F(sum.mean_cost) << " over "
            << sum.runs << " run(s), max window solve " << F(sum.max_solve_seconds) << " s\n";
  return kExitOk;
}

int CmdCompare(const Options& o) {
  std::vector<std::string> names = SplitList(o.policies);
  if (names.size() < 2) throw UsageError("compare needs at least two policies");
  RunSetup s = Resolve(o, true);
  std::vector<Policy> policies;
  for (const std::string& n : names) {
    try {
      policies.push_back(ParsePolicy(n));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const std::string dir = OutDir(s);
  std::vector<PolicySummary> rows;
  std::ostringstream runs;
  runs << "policy,seed,realization_digest,total_cost,voltage_violations,current_violations\n";
  json timing = json::array();
  for (Policy p : policies) {
    SimulationConfig c = s.sim;
    c.policy = p;
    std::vector<SimulationTrace> traces = RunEnsemble(s.net, s.profiles, c, s.seeds);
    LogRelaxations(traces);
    WriteTraces(dir, s.net, traces);
    for (const SimulationTrace& t : traces) {
      runs << csv::JoinRow({std::string(ToString(p)), std::to_string(t.seed),
                            Hex(t.realization_digest), F(t.total_cost),
                            std::to_string(t.voltage_violations),
                            std::to_string(t.current_violations)})
           << "\n";
    }
    rows.push_back(Summarize(traces));
    timing.push_back(SummaryJson(rows.back()));
  }
  csv::WriteFileAtomic((fs::path(dir) / "compare_runs.csv").string(), runs.str());
  const std::string table = FormatCompare(rows);
  csv::WriteFileAtomic((fs::path(dir) / "compare.csv").string(), table);
  csv::WriteFileAtomic((fs::path(dir) / "summary.json").string(),
                       json{{"policies", timing}}.dump(2) + "\n");
  std::cout << table;
  return kExitOk;
}

int CmdSweep(const Options& o) {
  std::vector<int> windows;
  std::vector<double> betas;
  try {
    windows = ParseIntList(o.tw_grid);
    betas = ParseDoubleList(o.beta_grid);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (windows.empty() || betas.empty()) throw UsageError("--tw-grid and --beta-grid must be nonempty");
  RunSetup s = Resolve(o, true);
  std::vector<SweepCell> cells;
  try {
    cells = Sweep(s.net, s.profiles, s.sim, windows, betas, s.seeds);
  } catch (const PlannerError& e) {
    throw UsageError(e.what());
  }
  const std::string table = FormatSweep(cells);
  csv::WriteFileAtomic((fs::path(OutDir(s)) / "sweep.csv").string(), table);
  std::cout << table;
  return kExitOk;
}

// Rebuilds per-policy summaries from the trace files of a run directory.
int CmdReport(const Options& o) {
  const std::string dir = o.input_dir.empty() ? (o.out.empty() ? "." : o.out) : o.input_dir;
  if (!fs::is_directory(dir)) throw InputError("no such directory " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("trace_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no trace files in " + dir);
  std::map<std::string, std::vector<SimulationTrace>> by_policy;
  for (const fs::path& f : files) {
    std::ifstream in(f);
    csv::Table t = csv::Read(in);
    SimulationTrace tr;
    std::string policy;
    for (const auto& [k, v] : t.directives) {
      if (k == "policy") policy = v;
      if (k == "seed") tr.seed = std::stoull(v);
    }
    if (policy.empty()) throw InputError(f.string() + ": missing policy directive");
    tr.policy = ParsePolicy(policy);
    auto col = [&](const std::string& name) {
      auto it = std::find(t.header.begin(), t.header.end(), name);
      if (it == t.header.end()) throw InputError(f.string() + ": missing column " + name);
      return static_cast<size_t>(it - t.header.begin());
    };
    const size_t cost = col("cost"), vv = col("voltage_violations"),
                 cv = col("current_violations"), bp = col("bus_phases"),
                 worst = col("worst_voltage_excess");
    for (const auto& row : t.rows) {
      auto num = [&](size_t c) {
        std::optional<double> v = csv::ParseDouble(row[c]);
        if (!v) throw InputError(f.string() + ": bad number '" + row[c] + "'");
        return *v;
      };
      tr.total_cost += num(cost);
      tr.voltage_violations += static_cast<int>(num(vv));
      tr.current_violations += static_cast<int>(num(cv));
      tr.bus_phase_steps += static_cast<int>(num(bp));
      tr.worst_voltage = std::max(tr.worst_voltage, num(worst));
    }
    by_policy[policy].push_back(std::move(tr));
  }
  std::vector<PolicySummary> rows;
  for (auto& [name, traces] : by_policy) rows.push_back(Summarize(traces));
  WriteOutput("-", FormatCompare(rows));
  return kExitOk;
}

void AddCommon(CLI::App* app, Options& o, bool simulation) {
  app->add_option("--network", o.network, "Network JSON document");
  app->add_option("--config", o.config, "JSON run configuration; flags override it");
  app->add_option("--out", o.out, "Output file (pf, plan) or directory");
  if (!simulation) return;
  app->add_option("--profiles", o.profiles, "Profile CSV");
  app->add_option("--tw", o.tw, "Prediction window length in steps");
  app->add_option("--beta", o.beta, "Discount factor in (0, 1]");
  app->add_option("--chords", o.chords, "Chords per circle approximation");
  app->add_option("--wedge-segments", o.wedge_segments, "Upper-voltage chords per wedge side");
  app->add_option("--wedge-phi", o.wedge_phi_deg, "Wedge half-angle in degrees");
  app->add_option("--relinearize", o.relinearize, "Taylor point: flat or warm");
  app->add_flag("--no-export", o.no_export, "Forbid selling power to the grid");
  app->add_option("--seeds", o.seeds, "Seed list, e.g. 1-30 or 1,5,9");
  app->add_option("--scenarios", o.scenarios, "Scenario count for two_stage");
  app->add_option("--sigma", o.sigma, "Relative standard deviation for every input class");
  app->add_option("--sigma-pv", o.sigma_pv, "PV availability error");
  app->add_option("--sigma-wt", o.sigma_wt, "Wind availability error");
  app->add_option("--sigma-p", o.sigma_p, "Active demand error");
  app->add_option("--sigma-q", o.sigma_q, "Reactive demand error");
  app->add_option("--sigma-price", o.sigma_price, "Price error");
}

}  // namespace

std::vector<uint64_t> ParseSeeds(std::string_view text) {
  std::vector<uint64_t> out;
  for (const std::string& item : SplitList(text)) {
    size_t dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(ParseNumber<uint64_t>(item, "seed"));
      continue;
    }
    uint64_t lo = ParseNumber<uint64_t>(Trim(item.substr(0, dash)), "seed");
    uint64_t hi = ParseNumber<uint64_t>(Trim(item.substr(dash + 1)), "seed");
    if (hi < lo || hi - lo > 1'000'000) throw std::invalid_argument("bad seed range '" + item + "'");
    for (uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw std::invalid_argument("empty seed list");
  return out;
}

std::vector<int> ParseIntList(std::string_view text) {
  std::vector<int> out;
  for (const std::string& item : SplitList(text)) out.push_back(ParseNumber<int>(item, "integer"));
  return out;
}

std::vector<double> ParseDoubleList(std::string_view text) {
  std::vector<double> out;
  for (const std::string& item : SplitList(text)) {
    std::optional<double> v = csv::ParseDouble(item);
    if (!v) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

PowerFlowInput ParseInjections(std::istream& in, const NetworkModel& net) {
  csv::Table t;
  try {
    t = csv::Read(in);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
  if (t.header != std::vector<std::string>{"id", "phase", "p", "q"}) {
    throw std::invalid_argument("header: expected id,phase,p,q");
  }
  PowerFlowInput input = PowerFlowInput::Zero(net);
  for (size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = "line " + std::to_string(t.line_numbers[r]);
    std::optional<double> p = csv::ParseDouble(row[2]), q = csv::ParseDouble(row[3]);
    if (!p || !q || !std::isfinite(*p) || !std::isfinite(*q)) {
      throw std::invalid_argument(where + ": p and q must be numbers");
    }
    if (const int d = net.FindDevice(row[0]); d >= 0) {
      if (row[1] != "abc") throw std::invalid_argument(where + ": device rows use phase abc");
      if (net.devices[d].kind == DeviceKind::kSubstation) {
        throw std::invalid_argument(where + ": the substation injection is not an input");
      }
      input.device_p[d] = *p;
      input.device_q[d] = *q;
      continue;
    }
    const int l = net.FindLoad(row[0]);
    if (l < 0) throw std::invalid_argument(where + ": unknown element '" + row[0] + "'");
    const PhaseSet& on = net.loads[l].phases;
    if (row[1] == "abc") {
      int n = 0;
      for (bool b : on) n += b;
      for (int f = 0; f < kNumPhases; ++f) {
        if (!on[f]) continue;
        input.load_p[l][f] = *p / n;
        input.load_q[l][f] = *q / n;
      }
      continue;
    }
    int f = -1;
    for (int k = 0; k < kNumPhases; ++k) {
      if (row[1] == kPhaseNames[k]) f = k;
    }
    if (f < 0 || !on[f]) {
      throw std::invalid_argument(where + ": load " + row[0] + " has no phase '" + row[1] + "'");
    }
    input.load_p[l][f] = *p;
    input.load_q[l][f] = *q;
  }
  return input;
}

std::string FormatPowerFlow(const NetworkModel& net, const PowerFlowSolution& sol) {
  std::ostringstream out;
  out << "quantity,element,phase,re,im,magnitude\n";
  auto row = [&](const char* q, const std::string& id, const std::string& ph, double re,
                 double im) {
    out << csv::JoinRow({q, id, ph, F(re), F(im), F(std::hypot(re, im))}) << "\n";
  };
  for (size_t b = 0; b < net.buses.size(); ++b) {
    for (int f = 0; f < kNumPhases; ++f) {
      if (net.buses[b].phases[f]) {
        row("voltage", net.buses[b].id, kPhaseNames[f], sol.v_re[b][f], sol.v_im[b][f]);
      }
    }
  }
  for (size_t l = 0; l < net.lines.size(); ++l) {
    const Line& line = net.lines[l];
    for (int f = 0; f < kNumPhases; ++f) {
      if (net.buses[line.from].phases[f] && net.buses[line.to].phases[f]) {
        row("line_current", line.id, kPhaseNames[f], sol.line_re[l][f], sol.line_im[l][f]);
      }
    }
  }
  for (size_t l = 0; l < net.loads.size(); ++l) {
    for (int f = 0; f < kNumPhases; ++f) {
      if (net.loads[l].phases[f]) {
        row("load_current", net.loads[l].id, kPhaseNames[f], sol.load_re[l][f], sol.load_im[l][f]);
      }
    }
  }
  for (size_t d = 0; d < net.devices.size(); ++d) {
    if (net.devices[d].kind == DeviceKind::kSubstation) continue;
    for (int f = 0; f < kNumPhases; ++f) {
      row("device_current", net.devices[d].id, kPhaseNames[f], sol.device_re[d][f],
          sol.device_im[d][f]);
    }
  }
  const std::string& sub = net.devices[net.substation()].id;
  for (int f = 0; f < kNumPhases; ++f) {
    row("grid_current", sub, kPhaseNames[f], sol.grid_re[f], sol.grid_im[f]);
  }
  row("grid_power", sub, "abc", sol.p_grid, sol.q_grid);
  return out.str();
}

std::string FormatTrace(const NetworkModel& net, const SimulationTrace& trace) {
  std::ostringstream out;
  out << "# policy: " << ToString(trace.policy) << "\n";
  out << "# seed: " << trace.seed << "\n";
  out << "# realization_digest: " << Hex(trace.realization_digest) << "\n";
  std::vector<std::string> header = {"t", "price"};
  for (const Device& d : net.devices) {
    switch (d.kind) {
      case DeviceKind::kPv:
      case DeviceKind::kWt:
        for (const char* s : {".p", ".q", ".curtail"}) header.push_back(d.id + s);
        break;
      case DeviceKind::kDg:
        for (const char* s : {".p", ".q"}) header.push_back(d.id + s);
        break;
      case DeviceKind::kBattery:
        for (const char* s : {".p_ch", ".p_dis", ".q", ".soc"}) header.push_back(d.id + s);
        break;
      case DeviceKind::kSubstation:
        break;
    }
  }
  for (const char* c : {"p_grid", "q_grid", "cost", "voltage_violations", "current_violations",
                        "bus_phases", "worst_voltage_excess", "worst_current_excess",
                        "lp_iterations", "relaxed"}) {
    header.push_back(c);
  }
  out << csv::JoinRow(header) << "\n";
  for (const StepRecord& r : trace.steps) {
    const StepOutcome& o = r.outcome;
    std::vector<std::string> row = {std::to_string(r.t), F(r.realized.price)};
    for (size_t d = 0; d < net.devices.size(); ++d) {
      const DeviceAction& a = r.action.devices[d];
      switch (net.devices[d].kind) {
        case DeviceKind::kPv:
        case DeviceKind::kWt:
          row.insert(row.end(), {F(o.executed.device_p[d]), F(o.executed.device_q[d]),
                                 F(a.curtail)});
          break;
        case DeviceKind::kDg:
          row.insert(row.end(), {F(o.executed.device_p[d]), F(o.executed.device_q[d])});
          break;
        case DeviceKind::kBattery:
          row.insert(row.end(), {F(a.p_ch), F(a.p_dis), F(a.q), F(o.next_soc[d])});
          break;
        case DeviceKind::kSubstation:
          break;
      }
    }
    row.insert(row.end(),
               {F(o.flow.p_grid), F(o.flow.q_grid), F(o.cost),
                std::to_string(o.violations.voltage.size()),
                std::to_string(o.violations.current.size()),
                std::to_string(o.violations.bus_phases_checked), F(o.violations.worst_voltage),
                F(o.violations.worst_current), std::to_string(r.lp_iterations),
                r.relaxed ? "1" : "0"});
    out << csv::JoinRow(row) << "\n";
  }
  return out.str();
}

std::string FormatTimings(const SimulationTrace& trace) {
  std::ostringstream out;
  out << "t,solve_ms,lp_iterations\n";
  for (const StepRecord& r : trace.steps) {
    out << r.t << "," << F(1000.0 * r.solve_seconds) << "," << r.lp_iterations << "\n";
  }
  return out.str();
}

std::string FormatCompare(const std::vector<PolicySummary>& rows) {
  std::ostringstream out;
  out << "policy,runs,mean_cost,stdev_cost,violation_rate,worst_violation\n";
  for (const PolicySummary& s : rows) {
    out << csv::JoinRow({std::string(ToString(s.policy)), std::to_string(s.runs), F(s.mean_cost),
                         F(s.stdev_cost), F(s.violation_rate), F(s.worst_violation)})
        << "\n";
  }
  return out.str();
}

std::string FormatSweep(const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "window,beta,runs,mean_cost,stdev_cost\n";
  for (const SweepCell& c : cells) {
    out << csv::JoinRow({std::to_string(c.window), F(c.beta), std::to_string(c.runs),
                         F(c.mean_cost), F(c.stdev_cost)})
        << "\n";
  }
  return out.str();
}

int Main(int argc, char** argv) {
  CLI::App app{"Rolling-horizon dispatch for unbalanced three-phase microgrids"};
  app.require_subcommand(1);
  Options o;
  CLI::App* pf = app.add_subcommand("pf", "Solve one power flow and print phasors");
  AddCommon(pf, o, false);
  pf->add_option("--injections", o.injections, "CSV with id,phase,p,q rows");
  CLI::App* plan = app.add_subcommand("plan", "Solve one window program on mean forecasts");
  AddCommon(plan, o, true);
  plan->add_option("--start", o.start, "First step of the window");
  plan->add_option("--lp-out", o.lp_out, "Also write the program in LP format");
  CLI::App* run = app.add_subcommand("run", "Simulate one policy over a seed list");
  AddCommon(run, o, true);
  run->add_option("--policy", o.policy,
                  "rolling_horizon, myopic, perfect_info or two_stage");
  CLI::App* compare = app.add_subcommand("compare", "Simulate several policies on shared seeds");
  AddCommon(compare, o, true);
  compare->add_option("--policies", o.policies, "Comma-separated policy list")->required();
  CLI::App* sweep = app.add_subcommand("sweep", "Mean rolling-horizon cost over a window/beta grid");
  AddCommon(sweep, o, true);
  sweep->add_option("--tw-grid", o.tw_grid, "Comma-separated window lengths")->required();
  sweep->add_option("--beta-grid", o.beta_grid, "Comma-separated discount factors")->required();
  CLI::App* report = app.add_subcommand("report", "Summarize the traces in a directory");
  report->add_option("--in", o.input_dir, "Directory holding trace_*.csv files");
  report->add_option("--out", o.out, "Same as --in when --in is absent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*pf) return CmdPf(o);
    if (*plan) return CmdPlan(o);
    if (*run) return CmdRun(o);
    if (*compare) return CmdCompare(o);
    if (*sweep) return CmdSweep(o);
    if (*report) return CmdReport(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NetworkError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ProfileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SimulationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const PlannerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const PowerFlowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace gridhorizon::cli

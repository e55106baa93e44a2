#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridhorizon/action.h"
#include "gridhorizon/network.h"
#include "gridhorizon/scenario.h"

namespace gridhorizon {

// Fixed power at every element for one power-flow solve. Device powers are
// three-phase totals split evenly over the phases. Positive p/q means
// generation for pv, wt and dg and consumption for batteries.
struct PowerFlowInput {
  std::vector<double> device_p;          // [device]
  std::vector<double> device_q;          // [device]
  std::vector<PhaseValues> load_p;       // [load]
  std::vector<PhaseValues> load_q;       // [load]

  static PowerFlowInput Zero(const NetworkModel& net);
};

struct PowerFlowOptions {
  double tolerance = 1e-10;
  int max_iterations = 50;
};

struct PowerFlowSolution {
  std::vector<PhaseValues> v_re, v_im;          // [bus]
  std::vector<PhaseValues> line_re, line_im;    // [line], from -> to series current
  std::vector<PhaseValues> load_re, load_im;    // [load], drawn
  std::vector<PhaseValues> device_re, device_im;  // [device], injected for generators,
                                                  // drawn for batteries
  PhaseValues grid_re{}, grid_im{};  // current supplied by the substation
  double p_grid = 0.0;
  double q_grid = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

class PowerFlowError : public std::runtime_error {
 public:
  PowerFlowError(const std::string& message, double residual, int iterations)
      : std::runtime_error(message), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

// Newton iteration in rectangular coordinates on the bus current mismatch.
// Throws PowerFlowError on non-convergence or a singular Jacobian.
PowerFlowSolution SolvePowerFlow(const NetworkModel& net, const PowerFlowInput& input,
                                 const PowerFlowOptions& options = {});

// Real power lost in line series resistances.
double LineLosses(const NetworkModel& net, const PowerFlowSolution& sol);

struct VoltageViolation {
  int bus;
  int phase;
  double magnitude;  // |V|
  double excess;     // distance outside [v_min, v_max], > 0
  bool under;
};

struct CurrentViolation {
  int line;
  int phase;
  double magnitude;  // |I|
  double excess;     // |I| - i_max
  double relative;   // excess / i_max
};

struct ViolationReport {
  std::vector<VoltageViolation> voltage;
  std::vector<CurrentViolation> current;
  int bus_phases_checked = 0;
  int line_phases_checked = 0;
  double worst_voltage = 0.0;
  double worst_current = 0.0;  // relative

  int count() const { return static_cast<int>(voltage.size() + current.size()); }
};

ViolationReport CheckLimits(const PowerFlowSolution& sol, const NetworkModel& net);

// Battery energy after one step of constant charge/discharge power.
double NextSoc(const BatteryParams& b, double soc, double p_ch, double p_dis, double dt_h);

struct StepOutcome {
  double cost = 0.0;
  std::vector<double> next_soc;       // [device], zero for non-batteries
  std::vector<bool> soc_clamped;      // [device]
  PowerFlowInput executed;            // powers actually applied
  PowerFlowSolution flow;
  ViolationReport violations;
};

// Applies `action` under `realized` conditions starting from `soc`
// ([device]-indexed battery energies).
StepOutcome Step(const NetworkModel& net, const std::vector<double>& soc,
                 const ActionVector& action, const Realization& realized,
                 const PowerFlowOptions& options = {});

// Stage cost dt * (price * P_grid + sum dg cost * P_dg).
double StageCost(const NetworkModel& net, double price, double p_grid,
                 const std::vector<double>& device_p);

std::vector<double> InitialSoc(const NetworkModel& net);

}  // namespace gridhorizon

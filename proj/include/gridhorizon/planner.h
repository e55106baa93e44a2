#pragma once

#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridhorizon/action.h"
#include "gridhorizon/environment.h"
#include "gridhorizon/lp.h"
#include "gridhorizon/network.h"
#include "gridhorizon/scenario.h"

namespace gridhorizon {

enum class Relinearize { kFlat, kWarm };

struct PlannerConfig {
  int window = 11;
  double beta = 0.997;
  int chords = 16;             // sides of the polygon replacing each circle
  int wedge_segments = 2;      // upper-voltage chords per side of the wedge
  double wedge_phi = 10.0 * std::numbers::pi / 180.0;
  Relinearize relinearize = Relinearize::kWarm;
  bool allow_export = true;
  long max_columns = 2'000'000;

  void Validate() const;
};

// Expansion point shared by every period of a window.
struct OperatingPoint {
  std::vector<PhaseValues> v_re, v_im;  // [bus]
  std::vector<double> device_p;          // [device], PowerFlowInput convention
  std::vector<double> device_q;
};

OperatingPoint FlatOperatingPoint(const NetworkModel& net);
OperatingPoint OperatingPointFrom(const NetworkModel& net, const PowerFlowSolution& flow,
                                  const PowerFlowInput& executed);

// Column families of the window program.
enum class Quantity {
  kVoltageRe,
  kVoltageIm,
  kLineRe,
  kLineIm,
  kLoadRe,
  kLoadIm,
  kDeviceRe,  // DER or battery current
  kDeviceIm,
  kGridRe,    // substation current
  kGridIm,
  kDeviceP,   // pv, wt, dg active power; battery net consumption
  kDeviceQ,
  kCurtail,
  kCharge,
  kDischarge,
  kEnergy,
  kGridP,
  kGridQ,
};

std::string_view ToString(Quantity q);
// Decision columns shared across scenarios in the extensive form.
bool IsActionQuantity(Quantity q, DeviceKind kind);

struct ColumnKey {
  Quantity quantity;
  int element;   // bus, line, load or device index; -1 for grid totals
  int phase;     // -1 when not phase-resolved
  int period;
  int scenario;  // 0 for shared columns

  auto operator<=>(const ColumnKey&) const = default;
};

struct WindowModel {
  lp::LinearProgram program;
  int periods = 0;
  int scenarios = 1;
  int start = 0;  // absolute step of period 0
  std::vector<ColumnKey> columns;  // one key per LP column
  std::map<ColumnKey, int> index;
  std::vector<std::vector<double>> forecast_available;  // [scenario][device], period 0
  std::vector<std::vector<double>> planned_available;   // [period][device], scenario mean
  OperatingPoint point;

  // Column for a key; shared columns may be looked up with any scenario.
  int Column(Quantity q, int element, int phase, int period, int scenario = 0) const;
  bool Has(Quantity q, int element, int phase, int period, int scenario = 0) const;
};

class PlannerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds the linearized window program. Each forecast is one scenario; all
// must cover the same number of periods (at most cfg.window). With several
// scenarios, device decisions are shared and the grid cost is averaged.
WindowModel BuildWindowModel(const NetworkModel& net, const std::vector<double>& soc,
                             const std::vector<WindowForecast>& scenarios,
                             const PlannerConfig& cfg, const OperatingPoint& point);
WindowModel BuildWindowModel(const NetworkModel& net, const std::vector<double>& soc,
                             const WindowForecast& forecast, const PlannerConfig& cfg,
                             const OperatingPoint& point);

// Decisions for one period (default the first). Throws PlannerError unless
// the solution is optimal.
ActionVector ExtractAction(const NetworkModel& net, const WindowModel& wm,
                           const lp::LpSolution& solution, int period = 0);
double PredictedCost(const WindowModel& wm, const lp::LpSolution& solution);

// Largest simultaneous charge/discharge product across batteries and periods.
double ComplementarityGap(const NetworkModel& net, const WindowModel& wm,
                          const lp::LpSolution& solution);

}  // namespace gridhorizon

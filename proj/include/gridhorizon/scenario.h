#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridhorizon/network.h"

namespace gridhorizon {

using PhaseValues = std::array<double, kNumPhases>;

// Hourly mean series. Device and load vectors are indexed like the network's
// devices and loads; non-renewable devices carry empty series.
struct Profiles {
  int horizon = 0;
  std::vector<double> price;                          // [t]
  std::vector<std::vector<double>> available;         // [device][t]
  std::vector<std::vector<PhaseValues>> load_p;       // [load][t]
  std::vector<std::vector<PhaseValues>> load_q;       // [load][t]
};

// Relative standard deviations per variable class.
struct ErrorSpec {
  double pv = 0.10;
  double wt = 0.10;
  double p_demand = 0.05;
  double q_demand = 0.05;
  double price = 0.05;

  static ErrorSpec Zero() { return {0.0, 0.0, 0.0, 0.0, 0.0}; }
};

// Values of the stochastic inputs for one step (mean or drawn).
struct Realization {
  double price = 0.0;
  std::vector<double> available;        // [device], zero for non-renewables
  std::vector<PhaseValues> load_p;      // [load]
  std::vector<PhaseValues> load_q;
};

struct WindowForecast {
  int start = 0;
  std::vector<Realization> steps;
  int length() const { return static_cast<int>(steps.size()); }
};

using RealizationPath = std::vector<Realization>;

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Profiles ParseProfiles(std::istream& in, const NetworkModel& net);
Profiles LoadProfiles(const std::string& path, const NetworkModel& net);
std::string FormatProfiles(const Profiles& p, const NetworkModel& net);

Realization MeanAt(const Profiles& p, int t);
WindowForecast MakeForecast(const Profiles& p, int start, int window);

// Counter-based normal draw for (seed, variable, t, stream).
double StandardNormal(uint64_t seed, std::string_view variable, int t, uint32_t stream = 0);
uint64_t HashName(std::string_view name);

// Draws for step t, stream 0. Each component is mean * max(0, 1 + sigma * z)
// with availabilities capped at device capacity.
Realization SampleRealization(const Profiles& p, const NetworkModel& net, const ErrorSpec& e,
                              uint64_t seed, int t);
RealizationPath SampleRealizationPath(const Profiles& p, const NetworkModel& net,
                                      const ErrorSpec& e, uint64_t seed);
// S horizon-length paths on streams 1..S, disjoint from the realization stream.
std::vector<RealizationPath> SampleScenarios(const Profiles& p, const NetworkModel& net,
                                             const ErrorSpec& e, int count, uint64_t seed);

// Piecewise wind turbine curve: zero below cut-in and above cut-out, cubic
// between cut-in and rated speed, rated power up to cut-out.
struct WindCurve {
  double cut_in = 3.0;
  double rated_speed = 12.0;
  double cut_out = 25.0;
  double rated_power = 1.0;
};
double WindPower(double speed, const WindCurve& curve);

}  // namespace gridhorizon

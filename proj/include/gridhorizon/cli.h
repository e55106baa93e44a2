#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "gridhorizon/controller.h"
#include "gridhorizon/environment.h"
#include "gridhorizon/network.h"

namespace gridhorizon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitUsage = 64;

// Entry point of the gridhorizon executable.
int Main(int argc, char** argv);

// "1-30", "1,4,9" or a mix such as "1-3,10". Throws invalid_argument.
std::vector<uint64_t> ParseSeeds(std::string_view text);
std::vector<int> ParseIntList(std::string_view text);
std::vector<double> ParseDoubleList(std::string_view text);

// Injection table with header id,phase,p,q. Device rows carry three-phase
// totals with phase "abc"; load rows name one phase or "abc" for an even
// split. Unlisted elements are zero. Throws invalid_argument naming the line.
PowerFlowInput ParseInjections(std::istream& in, const NetworkModel& net);

// quantity,element,phase,re,im,magnitude rows for voltages, currents and
// substation power, in network order.
std::string FormatPowerFlow(const NetworkModel& net, const PowerFlowSolution& sol);

// One row per step; wall times are written separately by FormatTimings so
// that traces stay byte-identical across reruns.
std::string FormatTrace(const NetworkModel& net, const SimulationTrace& trace);
std::string FormatTimings(const SimulationTrace& trace);

std::string FormatCompare(const std::vector<PolicySummary>& rows);
std::string FormatSweep(const std::vector<SweepCell>& cells);

}  // namespace gridhorizon::cli

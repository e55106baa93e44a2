#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gridhorizon/per_unit.h"

namespace gridhorizon {

inline constexpr int kNumPhases = 3;

// Nominal operating angle per phase (A, B, C).
inline constexpr std::array<double, kNumPhases> kPhaseAngle = {
    0.0, -2.0 * std::numbers::pi / 3.0, 2.0 * std::numbers::pi / 3.0};

using PhaseSet = std::array<bool, kNumPhases>;
using Matrix3 = std::array<std::array<double, kNumPhases>, kNumPhases>;

std::string PhaseString(const PhaseSet& phases);
std::optional<PhaseSet> ParsePhases(std::string_view text);

enum class BusKind { kPq, kSlack };

struct Bus {
  std::string id;
  BusKind kind = BusKind::kPq;
  PhaseSet phases = {true, true, true};
};

struct Line {
  std::string id;
  int from = -1;
  int to = -1;
  Matrix3 r{};  // p.u.
  Matrix3 x{};  // p.u.
  std::array<double, kNumPhases> b_sh{};  // p.u., total line charging
  double i_max = 0.0;  // p.u.
};

struct LoadPoint {
  std::string id;
  int bus = -1;
  PhaseSet phases = {true, true, true};
};

enum class DeviceKind { kPv, kWt, kDg, kBattery, kSubstation };

std::string_view ToString(DeviceKind kind);
std::optional<DeviceKind> ParseDeviceKind(std::string_view text);

struct BatteryParams {
  double e_min = 0.0;  // p.u.·h
  double e_max = 0.0;
  double e_init = 0.0;
  double p_ch_max = 0.0;  // p.u.
  double p_dis_max = 0.0;
  double eta_rt = 1.0;
  double self_discharge = 0.0;  // 1/h
};

struct Device {
  std::string id;
  DeviceKind kind = DeviceKind::kPv;
  int bus = -1;
  double s_max = 0.0;  // p.u.
  double pf_min = 1.0;
  double q_min = 0.0;
  double q_max = 0.0;
  double cost = 0.0;  // currency per p.u.·h, dg only
  double s_tr = 0.0;  // p.u., substation only
  BatteryParams battery;
};

struct NetworkModel {
  Bases bases{1.0, 1.0};
  double dt_h = 1.0;
  double v_min = 0.95;
  double v_max = 1.05;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<LoadPoint> loads;
  std::vector<Device> devices;

  int slack_bus() const;
  int FindBus(std::string_view id) const;
  int FindLoad(std::string_view id) const;
  int FindDevice(std::string_view id) const;
  std::vector<int> DevicesOfKind(DeviceKind kind) const;
  // Substation device, or -1 when absent.
  int substation() const;
};

// Load/validation error with the JSON path of the offending element,
// e.g. "lines[3].to".
class NetworkError : public std::runtime_error {
 public:
  NetworkError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Violation {
  std::string path;
  std::string message;
};

std::vector<Violation> Validate(const NetworkModel& model);

NetworkModel LoadNetwork(const nlohmann::json& document);
NetworkModel LoadNetworkFile(const std::string& path);
nlohmann::json Serialize(const NetworkModel& model);

}  // namespace gridhorizon

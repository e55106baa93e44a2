#pragma once

#include <vector>

namespace gridhorizon {

// Setpoints for one device over one control step. Which fields apply
// depends on the device kind:
//   battery     p_ch, p_dis, q (q is consumed reactive power)
//   dg          p, q
//   pv, wt      curtail, q; planned_available is the forecast used
//   substation  none
struct DeviceAction {
  double p = 0.0;
  double q = 0.0;
  double p_ch = 0.0;
  double p_dis = 0.0;
  double curtail = 0.0;
  double planned_available = 0.0;
};

// Indexed like NetworkModel::devices.
struct ActionVector {
  std::vector<DeviceAction> devices;
};

}  // namespace gridhorizon

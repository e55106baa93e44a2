#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "gridhorizon/network.h"
#include "gridhorizon/scenario.h"

namespace gridhorizon::testing {

// Two buses joined by one uncoupled three-phase line. Bases give Z_base = 1 ohm,
// so ohm values equal per-unit values.
inline nlohmann::json TwoBusDocument(double r_pu = 0.01, double x_pu = 0.01) {
  using nlohmann::json;
  json diag_r = {{r_pu, 0.0, 0.0}, {0.0, r_pu, 0.0}, {0.0, 0.0, r_pu}};
  json diag_x = {{x_pu, 0.0, 0.0}, {0.0, x_pu, 0.0}, {0.0, 0.0, x_pu}};
  return {
      {"version", 1},
      {"bases", {{"s_base_va", 1e6}, {"v_base_v", 1000.0}, {"dt_h", 1.0}}},
      {"limits", {{"v_min_pu", 0.95}, {"v_max_pu", 1.05}}},
      {"buses", {{{"id", "b1"}, {"kind", "slack"}, {"phases", "abc"}},
                 {{"id", "b2"}, {"kind", "pq"}, {"phases", "abc"}}}},
      {"lines", {{{"id", "l12"}, {"from", "b1"}, {"to", "b2"}, {"r", diag_r}, {"x", diag_x},
                  {"b_sh", {0.0, 0.0, 0.0}}, {"i_max_pu", 5.0}}}},
      {"loads", {{{"id", "d2"}, {"bus", "b2"}, {"phases", "abc"}}}},
      {"devices", {{{"id", "grid"}, {"kind", "substation"}, {"bus", "b1"}, {"s_tr_va", 1e7}}}},
  };
}

struct MicrogridParts {
  bool pv = true;
  bool dg = true;
  bool battery = true;
  double q_min_var = -2e5;  // applied to every DER
};

// Three buses in a chain with mutually coupled lines; load at the far end.
// Device order: grid, then pv (b2), dg (b3), bess (b2) as requested.
inline nlohmann::json MicrogridDocument(const MicrogridParts& parts = {}) {
  using nlohmann::json;
  json r = {{0.02, 0.004, 0.004}, {0.004, 0.02, 0.004}, {0.004, 0.004, 0.02}};
  json x = {{0.04, 0.01, 0.01}, {0.01, 0.04, 0.01}, {0.01, 0.01, 0.04}};
  json doc = TwoBusDocument();
  doc["buses"].push_back({{"id", "b3"}, {"kind", "pq"}, {"phases", "abc"}});
  doc["lines"] = {{{"id", "l12"}, {"from", "b1"}, {"to", "b2"}, {"r", r}, {"x", x},
                   {"b_sh", {1e-3, 1e-3, 1e-3}}, {"i_max_pu", 2.0}},
                  {{"id", "l23"}, {"from", "b2"}, {"to", "b3"}, {"r", r}, {"x", x},
                   {"b_sh", {1e-3, 1e-3, 1e-3}}, {"i_max_pu", 2.0}}};
  doc["loads"] = {{{"id", "d3"}, {"bus", "b3"}, {"phases", "abc"}}};
  doc["devices"][0]["s_tr_va"] = 5e6;
  if (parts.pv) {
    doc["devices"].push_back({{"id", "pv"}, {"kind", "pv"}, {"bus", "b2"}, {"s_max_va", 1e6},
                              {"pf_min", 0.95}, {"q_min_var", parts.q_min_var},
                              {"q_max_var", 2e5}});
  }
  if (parts.dg) {
    doc["devices"].push_back({{"id", "dg"}, {"kind", "dg"}, {"bus", "b3"}, {"s_max_va", 5e5},
                              {"pf_min", 0.9}, {"q_min_var", parts.q_min_var},
                              {"q_max_var", 2e5}, {"cost_per_kwh", 0.1}});
  }
  if (parts.battery) {
    doc["devices"].push_back({{"id", "bess"}, {"kind", "battery"}, {"bus", "b2"},
                              {"s_max_va", 1e6}, {"pf_min", 0.9}, {"q_min_var", -3e5},
                              {"q_max_var", 3e5}, {"e_min_wh", 2e5}, {"e_max_wh", 2e6},
                              {"e_init_wh", 1e6}, {"p_ch_max_w", 6e5}, {"p_dis_max_w", 6e5},
                              {"eta_rt", 0.9}, {"self_discharge_per_h", 0.001}});
  }
  return doc;
}

// Zero-valued profiles of the given length shaped for `net`.
inline Profiles ZeroProfiles(const NetworkModel& net, int horizon) {
  Profiles p;
  p.horizon = horizon;
  p.price.assign(horizon, 0.0);
  p.available.resize(net.devices.size());
  for (size_t d = 0; d < net.devices.size(); ++d) {
    DeviceKind k = net.devices[d].kind;
    if (k == DeviceKind::kPv || k == DeviceKind::kWt) p.available[d].assign(horizon, 0.0);
  }
  p.load_p.assign(net.loads.size(), std::vector<PhaseValues>(horizon, PhaseValues{}));
  p.load_q.assign(net.loads.size(), std::vector<PhaseValues>(horizon, PhaseValues{}));
  return p;
}

// A day with two price peaks, a midday solar bell and an evening load peak.
inline Profiles DailyProfiles(const NetworkModel& net, int horizon = 24) {
  Profiles p = ZeroProfiles(net, horizon);
  for (int t = 0; t < horizon; ++t) {
    const double h = t % 24;
    p.price[t] = 40.0 + 60.0 * std::exp(-0.5 * (h - 8) * (h - 8) / 2.0) +
                 90.0 * std::exp(-0.5 * (h - 18) * (h - 18) / 2.0) + 0.5 * t;
    const double sun = std::max(0.0, std::cos((h - 13) * 3.14159265358979 / 12.0));
    for (size_t d = 0; d < net.devices.size(); ++d) {
      if (net.devices[d].kind == DeviceKind::kPv) p.available[d][t] = 0.8 * sun;
    }
    const double load = 0.2 + 0.12 * std::exp(-0.5 * (h - 18) * (h - 18) / 6.0);
    for (size_t l = 0; l < net.loads.size(); ++l) {
      p.load_p[l][t] = {load, 0.9 * load, 1.1 * load};
      p.load_q[l][t] = {0.3 * load, 0.25 * load, 0.35 * load};
    }
  }
  return p;
}

}  // namespace gridhorizon::testing

#include "gridhorizon/network.h"

#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gridhorizon {

using nlohmann::json;

namespace {

constexpr std::array<char, kNumPhases> kPhaseLetters = {'a', 'b', 'c'};

std::string Index(std::string_view array, size_t i) {
  return std::string(array) + "[" + std::to_string(i) + "]";
}

const json& Require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw NetworkError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw NetworkError(path + "." + key, "missing required field");
  return *it;
}

double Number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = Require(obj, key, path);
  if (!v.is_number()) throw NetworkError(path + "." + key, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw NetworkError(path + "." + key, "value is not finite");
  return d;
}

double NumberOr(const json& obj, const std::string& key, const std::string& path,
                double fallback) {
  return obj.contains(key) ? Number(obj, key, path) : fallback;
}

std::string String(const json& obj, const std::string& key, const std::string& path) {
  const json& v = Require(obj, key, path);
  if (!v.is_string()) throw NetworkError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

const json& Array(const json& obj, const std::string& key, const std::string& path) {
  const json& v = Require(obj, key, path);
  if (!v.is_array()) throw NetworkError(path + "." + key, "expected an array");
  return v;
}

PhaseSet Phases(const json& obj, const std::string& path) {
  if (!obj.contains("phases")) return {true, true, true};
  std::string text = String(obj, "phases", path);
  auto phases = ParsePhases(text);
  if (!phases) throw NetworkError(path + ".phases", "invalid phase set \"" + text + "\"");
  return *phases;
}

Matrix3 Matrix(const json& obj, const std::string& key, const std::string& path) {
  const json& v = Array(obj, key, path);
  const std::string here = path + "." + key;
  if (v.size() != kNumPhases) throw NetworkError(here, "expected a 3x3 matrix");
  Matrix3 m{};
  for (int i = 0; i < kNumPhases; ++i) {
    if (!v[i].is_array() || v[i].size() != kNumPhases) {
      throw NetworkError(Index(here, i), "expected a row of 3 numbers");
    }
    for (int j = 0; j < kNumPhases; ++j) {
      if (!v[i][j].is_number()) {
        throw NetworkError(Index(Index(here, i), j), "expected a number");
      }
      m[i][j] = v[i][j].get<double>();
    }
  }
  return m;
}

std::array<double, kNumPhases> Vector3(const json& obj, const std::string& key,
                                       const std::string& path) {
  std::array<double, kNumPhases> out{};
  if (!obj.contains(key)) return out;
  const json& v = Array(obj, key, path);
  if (v.size() != kNumPhases) throw NetworkError(path + "." + key, "expected 3 numbers");
  for (int i = 0; i < kNumPhases; ++i) {
    if (!v[i].is_number()) throw NetworkError(Index(path + "." + key, i), "expected a number");
    out[i] = v[i].get<double>();
  }
  return out;
}

int ResolveBus(const std::map<std::string, int, std::less<>>& ids, const json& obj,
               const std::string& key, const std::string& path) {
  std::string id = String(obj, key, path);
  auto it = ids.find(id);
  if (it == ids.end()) {
    throw NetworkError(path + "." + key, "unknown bus \"" + id + "\"");
  }
  return it->second;
}

double CostScale(const Bases& b) { return b.s_base_va / 1000.0; }

bool Finite(const Matrix3& m) {
  for (const auto& row : m)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

std::string PhaseString(const PhaseSet& phases) {
  std::string s;
  for (int f = 0; f < kNumPhases; ++f)
    if (phases[f]) s += kPhaseLetters[f];
  return s;
}

std::optional<PhaseSet> ParsePhases(std::string_view text) {
  PhaseSet p = {false, false, false};
  if (text.empty()) return std::nullopt;
  for (char c : text) {
    int f = -1;
    if (c == 'a' || c == 'A') f = 0;
    if (c == 'b' || c == 'B') f = 1;
    if (c == 'c' || c == 'C') f = 2;
    if (f < 0 || p[f]) return std::nullopt;
    p[f] = true;
  }
  return p;
}

std::string_view ToString(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::kPv: return "pv";
    case DeviceKind::kWt: return "wt";
    case DeviceKind::kDg: return "dg";
    case DeviceKind::kBattery: return "battery";
    case DeviceKind::kSubstation: return "substation";
  }
  return "?";
}

std::optional<DeviceKind> ParseDeviceKind(std::string_view text) {
  for (DeviceKind k : {DeviceKind::kPv, DeviceKind::kWt, DeviceKind::kDg,
                       DeviceKind::kBattery, DeviceKind::kSubstation}) {
    if (ToString(k) == text) return k;
  }
  return std::nullopt;
}

NetworkError::NetworkError(std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

int NetworkModel::slack_bus() const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].kind == BusKind::kSlack) return static_cast<int>(i);
  return -1;
}

int NetworkModel::FindBus(std::string_view id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  return -1;
}

int NetworkModel::FindLoad(std::string_view id) const {
  for (size_t i = 0; i < loads.size(); ++i)
    if (loads[i].id == id) return static_cast<int>(i);
  return -1;
}

int NetworkModel::FindDevice(std::string_view id) const {
  for (size_t i = 0; i < devices.size(); ++i)
    if (devices[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<int> NetworkModel::DevicesOfKind(DeviceKind kind) const {
  std::vector<int> out;
  for (size_t i = 0; i < devices.size(); ++i)
    if (devices[i].kind == kind) out.push_back(static_cast<int>(i));
  return out;
}

int NetworkModel::substation() const {
  auto subs = DevicesOfKind(DeviceKind::kSubstation);
  return subs.empty() ? -1 : subs.front();
}

std::vector<Violation> Validate(const NetworkModel& m) {
  std::vector<Violation> out;
  auto add = [&out](std::string path, std::string msg) {
    out.push_back({std::move(path), std::move(msg)});
  };

  if (!(m.dt_h > 0.0)) add("bases.dt_h", "step length must be positive");
  if (!(m.v_min > 0.0 && m.v_min < 1.0 && 1.0 < m.v_max)) {
    add("limits", "voltage limits must satisfy 0 < v_min < 1 < v_max");
  }

  const int nb = static_cast<int>(m.buses.size());
  int slacks = 0;
  std::set<std::string, std::less<>> ids;
  for (int i = 0; i < nb; ++i) {
    const Bus& b = m.buses[i];
    if (!ids.insert(b.id).second) add(Index("buses", i), "duplicate bus id \"" + b.id + "\"");
    if (PhaseString(b.phases).empty()) add(Index("buses", i), "bus has no phases");
    if (b.kind == BusKind::kSlack) {
      if (++slacks > 1) add(Index("buses", i), "more than one slack bus");
      if (PhaseString(b.phases) != "abc") add(Index("buses", i), "slack bus must carry all phases");
    }
  }
  if (slacks == 0) add("buses", "missing slack bus");

  auto valid_bus = [nb](int b) { return b >= 0 && b < nb; };

  ids.clear();
  for (size_t i = 0; i < m.lines.size(); ++i) {
    const Line& l = m.lines[i];
    const std::string p = Index("lines", i);
    if (!ids.insert(l.id).second) add(p, "duplicate line id \"" + l.id + "\"");
    if (!valid_bus(l.from) || !valid_bus(l.to)) {
      add(p, "line endpoint out of range");
      continue;
    }
    if (l.from == l.to) add(p, "line " + l.id + " connects a bus to itself");
    if (!Finite(l.r) || !Finite(l.x) || !std::isfinite(l.i_max)) {
      add(p, "line " + l.id + " has non-finite parameters");
      continue;
    }
    bool r_sym = true, x_sym = true, diag_ok = true, absent_zero = true;
    PhaseSet on;
    for (int f = 0; f < kNumPhases; ++f) {
      on[f] = m.buses[l.from].phases[f] && m.buses[l.to].phases[f];
    }
    for (int f = 0; f < kNumPhases; ++f) {
      if (l.r[f][f] < 0.0 || l.x[f][f] < 0.0) diag_ok = false;
      for (int h = 0; h < kNumPhases; ++h) {
        if (l.r[f][h] != l.r[h][f]) r_sym = false;
        if (l.x[f][h] != l.x[h][f]) x_sym = false;
        if ((!on[f] || !on[h]) && (l.r[f][h] != 0.0 || l.x[f][h] != 0.0)) absent_zero = false;
      }
      if (!on[f] && l.b_sh[f] != 0.0) absent_zero = false;
    }
    if (!r_sym) add(p + ".r", "line " + l.id + " has an asymmetric R matrix");
    if (!x_sym) add(p + ".x", "line " + l.id + " has an asymmetric X matrix");
    if (!diag_ok) add(p, "line " + l.id + " has a negative diagonal entry");
    if (!absent_zero) add(p, "line " + l.id + " has nonzero entries on absent phases");
    if (PhaseString(on).empty()) add(p, "line " + l.id + " shares no phase between its buses");
    if (!(l.i_max > 0.0)) add(p + ".i_max_pu", "line " + l.id + " needs a positive current limit");
  }

  ids.clear();
  for (size_t i = 0; i < m.loads.size(); ++i) {
    const LoadPoint& ld = m.loads[i];
    const std::string p = Index("loads", i);
    if (!ids.insert(ld.id).second) add(p, "duplicate load id \"" + ld.id + "\"");
    if (!valid_bus(ld.bus)) {
      add(p + ".bus", "load bus out of range");
      continue;
    }
    if (PhaseString(ld.phases).empty()) add(p, "load " + ld.id + " has no phases");
    for (int f = 0; f < kNumPhases; ++f) {
      if (ld.phases[f] && !m.buses[ld.bus].phases[f]) {
        add(p + ".phases", "load " + ld.id + " uses a phase absent at its bus");
        break;
      }
    }
  }

  ids.clear();
  int substations = 0;
  for (size_t i = 0; i < m.devices.size(); ++i) {
    const Device& d = m.devices[i];
    const std::string p = Index("devices", i);
    if (!ids.insert(d.id).second) add(p, "duplicate device id \"" + d.id + "\"");
    if (!valid_bus(d.bus)) {
      add(p + ".bus", "device bus out of range");
      continue;
    }
    if (d.kind == DeviceKind::kSubstation) {
      if (++substations > 1) add(p, "more than one substation");
      if (m.buses[d.bus].kind != BusKind::kSlack) {
        add(p + ".bus", "substation " + d.id + " must sit at the slack bus");
      }
      if (!(d.s_tr > 0.0)) add(p + ".s_tr_va", "substation " + d.id + " needs positive capacity");
      continue;
    }
    if (PhaseString(m.buses[d.bus].phases) != "abc") {
      add(p + ".bus", "device " + d.id + " needs a three-phase bus");
    }
    if (!(d.s_max > 0.0)) add(p + ".s_max_va", "device " + d.id + " needs positive S_max");
    if (!(d.pf_min > 0.0 && d.pf_min <= 1.0)) {
      add(p + ".pf_min", "device " + d.id + " power factor must lie in (0, 1]");
    }
    if (!(d.q_min <= d.q_max)) add(p, "device " + d.id + " has q_min > q_max");
    if (d.kind == DeviceKind::kDg && !(d.cost >= 0.0)) {
      add(p + ".cost_per_kwh", "device " + d.id + " has a negative cost");
    }
    if (d.kind == DeviceKind::kBattery) {
      const BatteryParams& bp = d.battery;
      if (!(bp.e_min >= 0.0 && bp.e_min <= bp.e_max)) {
        add(p, "battery " + d.id + " needs 0 <= e_min <= e_max");
      } else if (bp.e_init > bp.e_max) {
        add(p + ".e_init_wh", "battery " + d.id + " has e_init above e_max");
      } else if (bp.e_init < bp.e_min) {
        add(p + ".e_init_wh", "battery " + d.id + " has e_init below e_min");
      }
      if (!(bp.p_ch_max >= 0.0 && bp.p_dis_max >= 0.0)) {
        add(p, "battery " + d.id + " has negative power limits");
      }
      if (!(bp.eta_rt > 0.0 && bp.eta_rt <= 1.0)) {
        add(p + ".eta_rt", "battery " + d.id + " efficiency must lie in (0, 1]");
      }
      if (!(bp.self_discharge >= 0.0)) {
        add(p + ".self_discharge_per_h", "battery " + d.id + " has negative self-discharge");
      }
    }
  }
  if (substations == 0) add("devices", "missing substation device");

  const int slack = m.slack_bus();
  if (slack >= 0 && nb > 0) {
    std::vector<std::vector<int>> adj(nb);
    for (const Line& l : m.lines) {
      if (valid_bus(l.from) && valid_bus(l.to)) {
        adj[l.from].push_back(l.to);
        adj[l.to].push_back(l.from);
      }
    }
    std::vector<bool> seen(nb, false);
    std::queue<int> q;
    q.push(slack);
    seen[slack] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          q.push(v);
        }
      }
    }
    for (int i = 0; i < nb; ++i) {
      if (!seen[i]) add(Index("buses", i), "bus \"" + m.buses[i].id + "\" is disconnected");
    }
  }
  return out;
}

NetworkModel LoadNetwork(const json& doc) {
  if (!doc.is_object()) throw NetworkError("$", "expected a JSON object");
  if (doc.contains("version")) {
    const json& v = doc["version"];
    if (!v.is_number_integer() || v.get<int>() != 1) {
      throw NetworkError("version", "unsupported network format version");
    }
  }
  NetworkModel m;
  const json& bases = Require(doc, "bases", "$");
  try {
    m.bases = Bases(Number(bases, "s_base_va", "bases"), Number(bases, "v_base_v", "bases"));
  } catch (const std::invalid_argument& e) {
    throw NetworkError("bases", e.what());
  }
  m.dt_h = NumberOr(bases, "dt_h", "bases", 1.0);
  const json& limits = Require(doc, "limits", "$");
  m.v_min = Number(limits, "v_min_pu", "limits");
  m.v_max = Number(limits, "v_max_pu", "limits");

  std::map<std::string, int, std::less<>> bus_ids;
  const json& buses = Array(doc, "buses", "$");
  for (size_t i = 0; i < buses.size(); ++i) {
    const std::string p = Index("buses", i);
    Bus b;
    b.id = String(buses[i], "id", p);
    std::string kind = buses[i].contains("kind") ? String(buses[i], "kind", p) : "pq";
    if (kind == "slack") {
      b.kind = BusKind::kSlack;
    } else if (kind != "pq") {
      throw NetworkError(p + ".kind", "unknown bus kind \"" + kind + "\"");
    }
    b.phases = Phases(buses[i], p);
    if (!bus_ids.emplace(b.id, static_cast<int>(i)).second) {
      throw NetworkError(p + ".id", "duplicate bus id \"" + b.id + "\"");
    }
    m.buses.push_back(std::move(b));
  }
  if (m.slack_bus() < 0) throw NetworkError("buses", "missing slack bus");

  const Bases& B = m.bases;
  const json& lines = Array(doc, "lines", "$");
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string p = Index("lines", i);
    Line l;
    l.id = lines[i].contains("id") ? String(lines[i], "id", p) : "line" + std::to_string(i);
    l.from = ResolveBus(bus_ids, lines[i], "from", p);
    l.to = ResolveBus(bus_ids, lines[i], "to", p);
    Matrix3 r = Matrix(lines[i], "r", p), x = Matrix(lines[i], "x", p);
    std::array<double, kNumPhases> b = Vector3(lines[i], "b_sh", p);
    for (int f = 0; f < kNumPhases; ++f) {
      for (int h = 0; h < kNumPhases; ++h) {
        l.r[f][h] = OhmsToPerUnit(r[f][h], B);
        l.x[f][h] = OhmsToPerUnit(x[f][h], B);
      }
      l.b_sh[f] = SiemensToPerUnit(b[f], B);
    }
    l.i_max = Number(lines[i], "i_max_pu", p);
    m.lines.push_back(std::move(l));
  }

  if (doc.contains("loads")) {
    const json& loads = Array(doc, "loads", "$");
    for (size_t i = 0; i < loads.size(); ++i) {
      const std::string p = Index("loads", i);
      LoadPoint ld;
      ld.id = String(loads[i], "id", p);
      ld.bus = ResolveBus(bus_ids, loads[i], "bus", p);
      ld.phases = Phases(loads[i], p);
      m.loads.push_back(std::move(ld));
    }
  }

  const json& devices = Array(doc, "devices", "$");
  for (size_t i = 0; i < devices.size(); ++i) {
    const json& d = devices[i];
    const std::string p = Index("devices", i);
    Device dev;
    dev.id = String(d, "id", p);
    std::string kind = String(d, "kind", p);
    auto k = ParseDeviceKind(kind);
    if (!k) throw NetworkError(p + ".kind", "unknown device kind \"" + kind + "\"");
    dev.kind = *k;
    dev.bus = ResolveBus(bus_ids, d, "bus", p);
    if (dev.kind == DeviceKind::kSubstation) {
      dev.s_tr = WattsToPerUnit(Number(d, "s_tr_va", p), B);
    } else {
      dev.s_max = WattsToPerUnit(Number(d, "s_max_va", p), B);
      dev.pf_min = NumberOr(d, "pf_min", p, 1.0);
      dev.q_min = WattsToPerUnit(NumberOr(d, "q_min_var", p, 0.0), B);
      dev.q_max = WattsToPerUnit(NumberOr(d, "q_max_var", p, 0.0), B);
    }
    if (dev.kind == DeviceKind::kDg) dev.cost = Number(d, "cost_per_kwh", p) * CostScale(B);
    if (dev.kind == DeviceKind::kBattery) {
      BatteryParams& bp = dev.battery;
      bp.e_min = WattsToPerUnit(Number(d, "e_min_wh", p), B);
      bp.e_max = WattsToPerUnit(Number(d, "e_max_wh", p), B);
      bp.e_init = WattsToPerUnit(Number(d, "e_init_wh", p), B);
      bp.p_ch_max = WattsToPerUnit(Number(d, "p_ch_max_w", p), B);
      bp.p_dis_max = WattsToPerUnit(Number(d, "p_dis_max_w", p), B);
      bp.eta_rt = Number(d, "eta_rt", p);
      bp.self_discharge = NumberOr(d, "self_discharge_per_h", p, 0.0);
    }
    m.devices.push_back(std::move(dev));
  }

  std::vector<Violation> v = Validate(m);
  if (!v.empty()) throw NetworkError(v.front().path, v.front().message);
  return m;
}

NetworkModel LoadNetworkFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NetworkError(path, "cannot open network file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw NetworkError(path, std::string("malformed JSON: ") + e.what());
  }
  return LoadNetwork(doc);
}

json Serialize(const NetworkModel& m) {
  const Bases& B = m.bases;
  json doc;
  doc["format"] = "gridhorizon-network";
  doc["version"] = 1;
  doc["bases"] = {{"s_base_va", B.s_base_va}, {"v_base_v", B.v_base_v}, {"dt_h", m.dt_h}};
  doc["limits"] = {{"v_min_pu", m.v_min}, {"v_max_pu", m.v_max}};
  doc["buses"] = json::array();
  for (const Bus& b : m.buses) {
    doc["buses"].push_back({{"id", b.id},
                            {"kind", b.kind == BusKind::kSlack ? "slack" : "pq"},
                            {"phases", PhaseString(b.phases)}});
  }
  doc["lines"] = json::array();
  for (const Line& l : m.lines) {
    json r = json::array(), x = json::array(), b = json::array();
    for (int f = 0; f < kNumPhases; ++f) {
      json rr = json::array(), xr = json::array();
      for (int h = 0; h < kNumPhases; ++h) {
        rr.push_back(PerUnitToOhms(l.r[f][h], B));
        xr.push_back(PerUnitToOhms(l.x[f][h], B));
      }
      r.push_back(rr);
      x.push_back(xr);
      b.push_back(PerUnitToSiemens(l.b_sh[f], B));
    }
    doc["lines"].push_back({{"id", l.id},
                            {"from", m.buses[l.from].id},
                            {"to", m.buses[l.to].id},
                            {"r", r},
                            {"x", x},
                            {"b_sh", b},
                            {"i_max_pu", l.i_max}});
  }
  doc["loads"] = json::array();
  for (const LoadPoint& ld : m.loads) {
    doc["loads"].push_back(
        {{"id", ld.id}, {"bus", m.buses[ld.bus].id}, {"phases", PhaseString(ld.phases)}});
  }
  doc["devices"] = json::array();
  for (const Device& d : m.devices) {
    json j = {{"id", d.id}, {"kind", std::string(ToString(d.kind))}, {"bus", m.buses[d.bus].id}};
    if (d.kind == DeviceKind::kSubstation) {
      j["s_tr_va"] = PerUnitToWatts(d.s_tr, B);
    } else {
      j["s_max_va"] = PerUnitToWatts(d.s_max, B);
      j["pf_min"] = d.pf_min;
      j["q_min_var"] = PerUnitToWatts(d.q_min, B);
      j["q_max_var"] = PerUnitToWatts(d.q_max, B);
    }
    if (d.kind == DeviceKind::kDg) {
      const double s = CostScale(B);
      j["cost_per_kwh"] = ExactProductPreimage(d.cost, s, d.cost / s);
    }
    if (d.kind == DeviceKind::kBattery) {
      const BatteryParams& bp = d.battery;
      j["e_min_wh"] = PerUnitToWatts(bp.e_min, B);
      j["e_max_wh"] = PerUnitToWatts(bp.e_max, B);
      j["e_init_wh"] = PerUnitToWatts(bp.e_init, B);
      j["p_ch_max_w"] = PerUnitToWatts(bp.p_ch_max, B);
      j["p_dis_max_w"] = PerUnitToWatts(bp.p_dis_max, B);
      j["eta_rt"] = bp.eta_rt;
      j["self_discharge_per_h"] = bp.self_discharge;
    }
    doc["devices"].push_back(std::move(j));
  }
  return doc;
}

}  // namespace gridhorizon

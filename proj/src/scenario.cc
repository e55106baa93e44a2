#include "gridhorizon/scenario.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

#include "gridhorizon/csv.h"

namespace gridhorizon {
namespace {

constexpr char kPhaseLetter[kNumPhases] = {'a', 'b', 'c'};
constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

uint64_t Mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Unit(uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

bool IsRenewable(DeviceKind k) { return k == DeviceKind::kPv || k == DeviceKind::kWt; }

std::string LoadColumn(const std::string& id, char quantity, int phase) {
  std::string s = id + "." + quantity;
  if (phase >= 0) s += std::string(".") + kPhaseLetter[phase];
  return s;
}

double Factor(uint64_t seed, const std::string& name, int t, uint32_t stream, double sigma) {
  if (sigma == 0.0) return 1.0;
  return std::max(0.0, 1.0 + sigma * StandardNormal(seed, name, t, stream));
}

Realization Draw(const Profiles& p, const NetworkModel& net, const ErrorSpec& e,
                 uint64_t seed, int t, uint32_t stream) {
  Realization r = MeanAt(p, t);
  r.price *= Factor(seed, "price", t, stream, e.price);
  for (size_t d = 0; d < net.devices.size(); ++d) {
    const Device& dev = net.devices[d];
    if (!IsRenewable(dev.kind)) continue;
    const double sigma = dev.kind == DeviceKind::kPv ? e.pv : e.wt;
    const double v = r.available[d] * Factor(seed, dev.id, t, stream, sigma);
    r.available[d] = std::min(v, dev.s_max);
  }
  for (size_t l = 0; l < net.loads.size(); ++l) {
    for (int f = 0; f < kNumPhases; ++f) {
      if (!net.loads[l].phases[f]) continue;
      const std::string& id = net.loads[l].id;
      r.load_p[l][f] *= Factor(seed, LoadColumn(id, 'p', f), t, stream, e.p_demand);
      r.load_q[l][f] *= Factor(seed, LoadColumn(id, 'q', f), t, stream, e.q_demand);
    }
  }
  return r;
}

}  // namespace

uint64_t HashName(std::string_view name) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double StandardNormal(uint64_t seed, std::string_view variable, int t, uint32_t stream) {
  const uint64_t counter = static_cast<uint32_t>(t) | (static_cast<uint64_t>(stream) << 32);
  const uint64_t key = Mix(Mix(Mix(seed + kGamma) ^ HashName(variable)) ^ counter);
  const double u1 = 1.0 - Unit(Mix(key + kGamma));  // (0, 1]
  const double u2 = Unit(Mix(key + 2 * kGamma));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Profiles ParseProfiles(std::istream& in, const NetworkModel& net) {
  csv::Table table;
  try {
    table = csv::Read(in);
  } catch (const std::runtime_error& e) {
    throw ProfileError(e.what());
  }
  if (table.header.size() < 2 || table.header[0] != "t" || table.header[1] != "price") {
    throw ProfileError("header: expected leading columns t,price");
  }
  std::map<std::string, int> column;
  for (size_t c = 0; c < table.header.size(); ++c) {
    if (!column.emplace(table.header[c], static_cast<int>(c)).second) {
      throw ProfileError("header: duplicate column " + table.header[c]);
    }
  }
  std::vector<bool> used(table.header.size(), false);
  used[0] = used[1] = true;
  auto take = [&](const std::string& name) {
    auto it = column.find(name);
    if (it == column.end()) return -1;
    used[it->second] = true;
    return it->second;
  };

  const int T = static_cast<int>(table.rows.size());
  for (const auto& [key, value] : table.directives) {
    if (key != "horizon") continue;
    auto declared = csv::ParseDouble(value);
    if (!declared || *declared != std::floor(*declared)) {
      throw ProfileError("horizon directive: not an integer");
    }
    if (static_cast<int>(*declared) != T) {
      throw ProfileError("length mismatch: header declares " + value + " rows, found " +
                         std::to_string(T));
    }
  }
  if (T == 0) throw ProfileError("no data rows");

  auto cell = [&](int row, int col) {
    auto v = csv::ParseDouble(table.rows[row][col]);
    if (!v) {
      throw ProfileError("line " + std::to_string(table.line_numbers[row]) + ", column " +
                         table.header[col] + ": non-numeric value \"" +
                         table.rows[row][col] + "\"");
    }
    return *v;
  };
  auto fail = [&](int row, int col, const std::string& why) {
    throw ProfileError("line " + std::to_string(table.line_numbers[row]) + ", column " +
                       table.header[col] + ": " + why);
  };

  Profiles p;
  p.horizon = T;
  p.price.resize(T);
  p.available.assign(net.devices.size(), {});
  p.load_p.assign(net.loads.size(), std::vector<PhaseValues>(T, PhaseValues{}));
  p.load_q = p.load_p;

  for (int t = 0; t < T; ++t) {
    if (cell(t, 0) != t) fail(t, 0, "expected step index " + std::to_string(t));
    p.price[t] = cell(t, 1);
    if (p.price[t] < 0.0) fail(t, 1, "negative price");
  }
  for (size_t d = 0; d < net.devices.size(); ++d) {
    const Device& dev = net.devices[d];
    if (!IsRenewable(dev.kind)) continue;
    const int c = take(dev.id);
    if (c < 0) throw ProfileError("header: missing column " + dev.id);
    p.available[d].resize(T);
    for (int t = 0; t < T; ++t) {
      const double v = cell(t, c);
      if (v < 0.0 || v > dev.s_max * (1.0 + 1e-12)) fail(t, c, "availability outside [0, S_max]");
      p.available[d][t] = v;
    }
  }
  for (size_t l = 0; l < net.loads.size(); ++l) {
    const LoadPoint& ld = net.loads[l];
    const int n_phases = static_cast<int>(PhaseString(ld.phases).size());
    for (char q : {'p', 'q'}) {
      auto& series = q == 'p' ? p.load_p[l] : p.load_q[l];
      const int total = take(LoadColumn(ld.id, q, -1));
      for (int f = 0; f < kNumPhases; ++f) {
        if (!ld.phases[f]) continue;
        const int c = total >= 0 ? total : take(LoadColumn(ld.id, q, f));
        if (c < 0) throw ProfileError("header: missing column " + LoadColumn(ld.id, q, -1));
        for (int t = 0; t < T; ++t) {
          double v = cell(t, c);
          if (q == 'p' && v < 0.0) fail(t, c, "negative demand");
          series[t][f] = total >= 0 ? v / n_phases : v;
        }
      }
    }
  }
  for (size_t c = 0; c < used.size(); ++c) {
    if (!used[c]) throw ProfileError("header: unknown column " + table.header[c]);
  }
  return p;
}

Profiles LoadProfiles(const std::string& path, const NetworkModel& net) {
  std::ifstream in(path);
  if (!in) throw ProfileError(path + ": cannot open profile file");
  try {
    return ParseProfiles(in, net);
  } catch (const ProfileError& e) {
    throw ProfileError(path + ": " + e.what());
  }
}

std::string FormatProfiles(const Profiles& p, const NetworkModel& net) {
  std::vector<std::string> header = {"t", "price"};
  for (const Device& d : net.devices)
    if (IsRenewable(d.kind)) header.push_back(d.id);
  for (const LoadPoint& ld : net.loads) {
    for (char q : {'p', 'q'})
      for (int f = 0; f < kNumPhases; ++f)
        if (ld.phases[f]) header.push_back(LoadColumn(ld.id, q, f));
  }
  std::string out = "# horizon: " + std::to_string(p.horizon) + "\n" + csv::JoinRow(header) + "\n";
  for (int t = 0; t < p.horizon; ++t) {
    std::vector<std::string> row = {std::to_string(t), csv::FormatDouble(p.price[t])};
    for (size_t d = 0; d < net.devices.size(); ++d) {
      if (IsRenewable(net.devices[d].kind)) row.push_back(csv::FormatDouble(p.available[d][t]));
    }
    for (size_t l = 0; l < net.loads.size(); ++l) {
      for (const auto* series : {&p.load_p[l], &p.load_q[l]})
        for (int f = 0; f < kNumPhases; ++f)
          if (net.loads[l].phases[f]) row.push_back(csv::FormatDouble((*series)[t][f]));
    }
    out += csv::JoinRow(row) + "\n";
  }
  return out;
}

Realization MeanAt(const Profiles& p, int t) {
  if (t < 0 || t >= p.horizon) {
    throw std::out_of_range("step " + std::to_string(t) + " outside the profile horizon");
  }
  Realization r;
  r.price = p.price[t];
  r.available.resize(p.available.size(), 0.0);
  for (size_t d = 0; d < p.available.size(); ++d) {
    if (!p.available[d].empty()) r.available[d] = p.available[d][t];
  }
  r.load_p.resize(p.load_p.size());
  r.load_q.resize(p.load_q.size());
  for (size_t l = 0; l < p.load_p.size(); ++l) {
    r.load_p[l] = p.load_p[l][t];
    r.load_q[l] = p.load_q[l][t];
  }
  return r;
}

WindowForecast MakeForecast(const Profiles& p, int start, int window) {
  if (start < 0 || start >= p.horizon) {
    throw std::out_of_range("forecast start " + std::to_string(start) + " at or past horizon");
  }
  if (window < 1) throw std::invalid_argument("window must be at least one step");
  WindowForecast fc;
  fc.start = start;
  const int end = std::min(start + window, p.horizon);
  for (int t = start; t < end; ++t) fc.steps.push_back(MeanAt(p, t));
  return fc;
}

Realization SampleRealization(const Profiles& p, const NetworkModel& net, const ErrorSpec& e,
                              uint64_t seed, int t) {
  return Draw(p, net, e, seed, t, 0);
}

RealizationPath SampleRealizationPath(const Profiles& p, const NetworkModel& net,
                                      const ErrorSpec& e, uint64_t seed) {
  RealizationPath path;
  for (int t = 0; t < p.horizon; ++t) path.push_back(Draw(p, net, e, seed, t, 0));
  return path;
}

std::vector<RealizationPath> SampleScenarios(const Profiles& p, const NetworkModel& net,
                                             const ErrorSpec& e, int count, uint64_t seed) {
  if (count < 1) throw std::invalid_argument("scenario count must be at least 1");
  std::vector<RealizationPath> out(count);
  for (int s = 0; s < count; ++s) {
    for (int t = 0; t < p.horizon; ++t) {
      out[s].push_back(Draw(p, net, e, seed, t, static_cast<uint32_t>(s + 1)));
    }
  }
  return out;
}

double WindPower(double speed, const WindCurve& c) {
  if (!(c.cut_in < c.rated_speed && c.rated_speed <= c.cut_out)) {
    throw std::invalid_argument("wind curve speeds must satisfy cut_in < rated <= cut_out");
  }
  if (speed < c.cut_in || speed >= c.cut_out) return 0.0;
  if (speed >= c.rated_speed) return c.rated_power;
  const double num = std::pow(speed, 3) - std::pow(c.cut_in, 3);
  const double den = std::pow(c.rated_speed, 3) - std::pow(c.cut_in, 3);
  return c.rated_power * num / den;
}

}  // namespace gridhorizon

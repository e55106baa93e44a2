#include "gridhorizon/planner.h"

#include <algorithm>
#include <cmath>

#include "gridhorizon/linearize.h"

namespace gridhorizon {

using lp::kInf;
using lp::Sense;
using lp::Term;

namespace {

bool IsRenewable(DeviceKind k) { return k == DeviceKind::kPv || k == DeviceKind::kWt; }

PhaseSet LinePhases(const NetworkModel& net, const Line& l) {
  PhaseSet on;
  for (int f = 0; f < kNumPhases; ++f) {
    on[f] = net.buses[l.from].phases[f] && net.buses[l.to].phases[f];
  }
  return on;
}

double PowerFactorSlope(double pf) { return std::tan(std::acos(pf)); }

Sense ToSense(linearize::Side s) {
  return s == linearize::Side::kLessEqual ? Sense::kLessEqual : Sense::kGreaterEqual;
}

class Builder {
 public:
  Builder(const NetworkModel& net, const std::vector<double>& soc,
          const std::vector<WindowForecast>& scenarios, const PlannerConfig& cfg,
          const OperatingPoint& point)
      : net_(net), soc_(soc), fc_(scenarios), cfg_(cfg), point_(point) {}

  WindowModel Build() {
    Check();
    wm_.periods = periods_;
    wm_.scenarios = static_cast<int>(fc_.size());
    wm_.start = fc_.front().start;
    wm_.point = point_;
    circle_ = linearize::CirclePolygon(1.0, cfg_.chords);
    for (int t = 0; t < periods_; ++t) {
      AddActionColumns(t);
      for (int s = 0; s < wm_.scenarios; ++s) AddScenarioPeriod(s, t);
    }
    for (const WindowForecast& f : fc_) {
      std::vector<double> avail(net_.devices.size(), 0.0);
      for (size_t d = 0; d < net_.devices.size(); ++d) avail[d] = f.steps[0].available[d];
      wm_.forecast_available.push_back(std::move(avail));
    }
    wm_.planned_available.assign(periods_, std::vector<double>(net_.devices.size(), 0.0));
    for (int t = 0; t < periods_; ++t) {
      for (size_t d = 0; d < net_.devices.size(); ++d) {
        double sum = 0.0;
        for (const WindowForecast& f : fc_) sum += f.steps[t].available[d];
        wm_.planned_available[t][d] = sum / wm_.scenarios;
      }
    }
    return std::move(wm_);
  }

 private:
  void Check() {
    cfg_.Validate();
    if (fc_.empty()) throw PlannerError("no forecast supplied");
    periods_ = fc_.front().length();
    if (periods_ < 1 || periods_ > cfg_.window) {
      throw PlannerError("forecast covers " + std::to_string(periods_) +
                         " steps; window allows 1.." + std::to_string(cfg_.window));
    }
    for (const WindowForecast& f : fc_) {
      if (f.length() != periods_) throw PlannerError("scenario forecasts differ in length");
      for (const Realization& r : f.steps) {
        if (r.available.size() != net_.devices.size() || r.load_p.size() != net_.loads.size() ||
            r.load_q.size() != net_.loads.size()) {
          throw PlannerError("forecast does not match the network");
        }
      }
    }
    if (soc_.size() != net_.devices.size()) throw PlannerError("SOC vector does not match");
    for (size_t d = 0; d < net_.devices.size(); ++d) {
      const Device& dev = net_.devices[d];
      if (dev.kind != DeviceKind::kBattery) continue;
      const double slop = 1e-9 * std::max(1.0, dev.battery.e_max);
      if (soc_[d] < dev.battery.e_min - slop || soc_[d] > dev.battery.e_max + slop) {
        throw PlannerError("SOC of " + dev.id + " outside its bounds");
      }
    }
    if (point_.v_re.size() != net_.buses.size() || point_.device_p.size() != net_.devices.size()) {
      throw PlannerError("operating point does not match the network");
    }
    long estimate = static_cast<long>(periods_) * static_cast<long>(fc_.size()) *
                    static_cast<long>(8 * kNumPhases * (net_.buses.size() + net_.lines.size()));
    if (estimate > cfg_.max_columns) {
      throw PlannerError("extensive form would exceed the column cap (" +
                         std::to_string(estimate) + " > " + std::to_string(cfg_.max_columns) +
                         ")");
    }
  }

  int Add(Quantity q, int element, int phase, int period, int scenario, double lo, double hi,
          double cost = 0.0) {
    const int id = wm_.program.AddVariable(lo, hi, cost);
    ColumnKey key{q, element, phase, period, scenario};
    wm_.columns.push_back(key);
    wm_.index.emplace(key, id);
    return id;
  }

  int Col(Quantity q, int element, int phase, int period, int scenario) const {
    return wm_.Column(q, element, phase, period, scenario);
  }

  double Weight(int t) const { return std::pow(cfg_.beta, t) * net_.dt_h; }

  void AddCircle(int x, int y, double radius) {
    for (const linearize::HalfPlane& hp : circle_) {
      Term terms[] = {{x, hp.a_re}, {y, hp.a_im}};
      wm_.program.AddConstraint(terms, ToSense(hp.sense), radius * hp.rhs);
    }
  }

  // Device decisions, shared by all scenarios.
  void AddActionColumns(int t) {
    auto& lp = wm_.program;
    for (size_t di = 0; di < net_.devices.size(); ++di) {
      const Device& dev = net_.devices[di];
      const int d = static_cast<int>(di);
      switch (dev.kind) {
        case DeviceKind::kPv:
        case DeviceKind::kWt: {
          double cap = kInf;
          for (const WindowForecast& f : fc_) cap = std::min(cap, f.steps[t].available[d]);
          Add(Quantity::kCurtail, d, -1, t, 0, 0.0, std::max(0.0, cap));
          Add(Quantity::kDeviceQ, d, -1, t, 0, dev.q_min, dev.q_max);
          break;
        }
        case DeviceKind::kDg: {
          const int p = Add(Quantity::kDeviceP, d, -1, t, 0, 0.0, dev.s_max,
                            Weight(t) * dev.cost);
          const int q = Add(Quantity::kDeviceQ, d, -1, t, 0, dev.q_min, dev.q_max);
          AddCircle(p, q, dev.s_max);
          Term pf[] = {{q, 1.0}, {p, -PowerFactorSlope(dev.pf_min)}};
          lp.AddConstraint(pf, Sense::kLessEqual, 0.0);
          break;
        }
        case DeviceKind::kBattery: {
          const BatteryParams& b = dev.battery;
          const int ch = Add(Quantity::kCharge, d, -1, t, 0, 0.0, b.p_ch_max);
          const int dis = Add(Quantity::kDischarge, d, -1, t, 0, 0.0, b.p_dis_max);
          const int net_p =
              Add(Quantity::kDeviceP, d, -1, t, 0, -b.p_dis_max, b.p_ch_max);
          const int q = Add(Quantity::kDeviceQ, d, -1, t, 0, dev.q_min, dev.q_max);
          const int e = Add(Quantity::kEnergy, d, -1, t, 0, b.e_min, b.e_max);
          Term balance[] = {{net_p, 1.0}, {ch, -1.0}, {dis, 1.0}};
          lp.AddConstraint(balance, Sense::kEqual, 0.0);
          const double k = PowerFactorSlope(dev.pf_min);
          Term upper[] = {{q, 1.0}, {ch, -k}, {dis, -k}};
          lp.AddConstraint(upper, Sense::kLessEqual, 0.0);
          Term lower[] = {{q, 1.0}, {ch, k}, {dis, k}};
          lp.AddConstraint(lower, Sense::kGreaterEqual, 0.0);
          const double eta = std::sqrt(b.eta_rt), dt = net_.dt_h;
          std::vector<Term> soc = {{e, 1.0 + dt * b.self_discharge},
                                   {ch, -dt * eta},
                                   {dis, dt / eta}};
          double rhs = 0.0;
          if (t == 0) {
            rhs = soc_[d];
          } else {
            soc.push_back({Col(Quantity::kEnergy, d, -1, t - 1, 0), -1.0});
          }
          lp.AddConstraint(soc, Sense::kEqual, rhs);
          break;
        }
        case DeviceKind::kSubstation:
          break;
      }
    }
  }

  void AddScenarioPeriod(int s, int t) {
    auto& lp = wm_.program;
    const Realization& fc = fc_[s].steps[t];
    const double prob = 1.0 / wm_.scenarios;
    const int slack = net_.slack_bus();
    const int nb = static_cast<int>(net_.buses.size());

    for (int b = 0; b < nb; ++b) {
      for (int f = 0; f < kNumPhases; ++f) {
        if (!net_.buses[b].phases[f]) continue;
        if (b == slack) {
          const double re = std::cos(kPhaseAngle[f]), im = std::sin(kPhaseAngle[f]);
          Add(Quantity::kVoltageRe, b, f, t, s, re, re);
          Add(Quantity::kVoltageIm, b, f, t, s, im, im);
        } else {
          Add(Quantity::kVoltageRe, b, f, t, s, -net_.v_max, net_.v_max);
          Add(Quantity::kVoltageIm, b, f, t, s, -net_.v_max, net_.v_max);
        }
      }
    }
    for (size_t li = 0; li < net_.lines.size(); ++li) {
      const Line& l = net_.lines[li];
      PhaseSet on = LinePhases(net_, l);
      for (int f = 0; f < kNumPhases; ++f) {
        if (!on[f]) continue;
        const int re = Add(Quantity::kLineRe, li, f, t, s, -l.i_max, l.i_max);
        const int im = Add(Quantity::kLineIm, li, f, t, s, -l.i_max, l.i_max);
        AddCircle(re, im, l.i_max);
      }
    }
    for (size_t l = 0; l < net_.loads.size(); ++l) {
      for (int f = 0; f < kNumPhases; ++f) {
        if (!net_.loads[l].phases[f]) continue;
        Add(Quantity::kLoadRe, l, f, t, s, -kInf, kInf);
        Add(Quantity::kLoadIm, l, f, t, s, -kInf, kInf);
      }
    }
    for (size_t di = 0; di < net_.devices.size(); ++di) {
      const Device& dev = net_.devices[di];
      const int d = static_cast<int>(di);
      if (dev.kind == DeviceKind::kSubstation) {
        for (int f = 0; f < kNumPhases; ++f) {
          Add(Quantity::kGridRe, d, f, t, s, -kInf, kInf);
          Add(Quantity::kGridIm, d, f, t, s, -kInf, kInf);
        }
        continue;
      }
      for (int f = 0; f < kNumPhases; ++f) {
        Add(Quantity::kDeviceRe, d, f, t, s, -kInf, kInf);
        Add(Quantity::kDeviceIm, d, f, t, s, -kInf, kInf);
      }
      if (IsRenewable(dev.kind)) {
        const double avail = fc.available[d];
        const int p = Add(Quantity::kDeviceP, d, -1, t, s, 0.0, avail);
        const int curtail = Col(Quantity::kCurtail, d, -1, t, s);
        const int q = Col(Quantity::kDeviceQ, d, -1, t, s);
        Term bal[] = {{p, 1.0}, {curtail, 1.0}};
        lp.AddConstraint(bal, Sense::kEqual, avail);
        AddCircle(p, q, dev.s_max);
        Term pf[] = {{q, 1.0}, {p, -PowerFactorSlope(dev.pf_min)}};
        lp.AddConstraint(pf, Sense::kLessEqual, 0.0);
      }
    }
    const int sub = net_.substation();
    const double grid_cap = net_.devices[sub].s_tr;
    const int pg = Add(Quantity::kGridP, -1, -1, t, s, cfg_.allow_export ? -grid_cap : 0.0,
                       grid_cap, prob * Weight(t) * fc.price);
    const int qg = Add(Quantity::kGridQ, -1, -1, t, s, -grid_cap, grid_cap);
    AddCircle(pg, qg, grid_cap);

    // Substation power from the fixed slack phasors.
    std::vector<Term> prow = {{pg, -1.0}}, qrow = {{qg, -1.0}};
    for (int f = 0; f < kNumPhases; ++f) {
      const double vr = std::cos(kPhaseAngle[f]), vi = std::sin(kPhaseAngle[f]);
      const int ir = Col(Quantity::kGridRe, sub, f, t, s), ii = Col(Quantity::kGridIm, sub, f, t, s);
      prow.push_back({ir, vr});
      prow.push_back({ii, vi});
      qrow.push_back({ir, vi});
      qrow.push_back({ii, -vr});
    }
    lp.AddConstraint(prow, Sense::kEqual, 0.0);
    lp.AddConstraint(qrow, Sense::kEqual, 0.0);

    AddKvl(s, t);
    AddKcl(s, t);
    AddLoadCurrents(s, t, fc);
    AddDeviceCurrents(s, t);
    AddWedges(s, t);
  }

  void AddKvl(int s, int t) {
    for (size_t li = 0; li < net_.lines.size(); ++li) {
      const Line& l = net_.lines[li];
      PhaseSet on = LinePhases(net_, l);
      for (int f = 0; f < kNumPhases; ++f) {
        if (!on[f]) continue;
        std::vector<Term> re = {{Col(Quantity::kVoltageRe, l.from, f, t, s), 1.0},
                                {Col(Quantity::kVoltageRe, l.to, f, t, s), -1.0}};
        std::vector<Term> im = {{Col(Quantity::kVoltageIm, l.from, f, t, s), 1.0},
                                {Col(Quantity::kVoltageIm, l.to, f, t, s), -1.0}};
        for (int h = 0; h < kNumPhases; ++h) {
          if (!on[h]) continue;
          const int ir = Col(Quantity::kLineRe, li, h, t, s);
          const int ii = Col(Quantity::kLineIm, li, h, t, s);
          if (l.r[f][h] != 0.0) {
            re.push_back({ir, -l.r[f][h]});
            im.push_back({ii, -l.r[f][h]});
          }
          if (l.x[f][h] != 0.0) {
            re.push_back({ii, l.x[f][h]});
            im.push_back({ir, -l.x[f][h]});
          }
        }
        wm_.program.AddConstraint(re, Sense::kEqual, 0.0);
        wm_.program.AddConstraint(im, Sense::kEqual, 0.0);
      }
    }
  }

  void AddKcl(int s, int t) {
    const int nb = static_cast<int>(net_.buses.size());
    // rows[b][f] collects terms of "current in - current out = 0".
    std::vector<std::array<std::vector<Term>, kNumPhases>> re(nb), im(nb);
    for (size_t li = 0; li < net_.lines.size(); ++li) {
      const Line& l = net_.lines[li];
      PhaseSet on = LinePhases(net_, l);
      for (int f = 0; f < kNumPhases; ++f) {
        if (!on[f]) continue;
        const int ir = Col(Quantity::kLineRe, li, f, t, s);
        const int ii = Col(Quantity::kLineIm, li, f, t, s);
        re[l.to][f].push_back({ir, 1.0});
        im[l.to][f].push_back({ii, 1.0});
        re[l.from][f].push_back({ir, -1.0});
        im[l.from][f].push_back({ii, -1.0});
        // Shunt current j(B/2)V leaves at both ends.
        const double half = l.b_sh[f] / 2.0;
        if (half != 0.0) {
          for (int b : {l.from, l.to}) {
            re[b][f].push_back({Col(Quantity::kVoltageIm, b, f, t, s), half});
            im[b][f].push_back({Col(Quantity::kVoltageRe, b, f, t, s), -half});
          }
        }
      }
    }
    for (size_t l = 0; l < net_.loads.size(); ++l) {
      const LoadPoint& ld = net_.loads[l];
      for (int f = 0; f < kNumPhases; ++f) {
        if (!ld.phases[f]) continue;
        re[ld.bus][f].push_back({Col(Quantity::kLoadRe, l, f, t, s), -1.0});
        im[ld.bus][f].push_back({Col(Quantity::kLoadIm, l, f, t, s), -1.0});
      }
    }
    for (size_t di = 0; di < net_.devices.size(); ++di) {
      const Device& dev = net_.devices[di];
      const int d = static_cast<int>(di);
      const bool grid = dev.kind == DeviceKind::kSubstation;
      const double sign = dev.kind == DeviceKind::kBattery ? -1.0 : 1.0;
      for (int f = 0; f < kNumPhases; ++f) {
        const int cr = Col(grid ? Quantity::kGridRe : Quantity::kDeviceRe, d, f, t, s);
        const int ci = Col(grid ? Quantity::kGridIm : Quantity::kDeviceIm, d, f, t, s);
        re[dev.bus][f].push_back({cr, sign});
        im[dev.bus][f].push_back({ci, sign});
      }
    }
    for (int b = 0; b < nb; ++b) {
      for (int f = 0; f < kNumPhases; ++f) {
        if (!net_.buses[b].phases[f]) continue;
        wm_.program.AddConstraint(re[b][f], Sense::kEqual, 0.0);
        wm_.program.AddConstraint(im[b][f], Sense::kEqual, 0.0);
      }
    }
  }

  linearize::TaylorPoint VoltagePoint(int bus, int f) const {
    return {point_.v_re[bus][f], point_.v_im[bus][f], 0.0, 0.0};
  }

  // I - dVre*Vre - dVim*Vim [- dP*P/3 - dQ*Q/3] = c0 - dVre*V*re - dVim*V*im [...]
  void AddTaylorRow(int current, const linearize::CurrentCoeffs& c,
                    const linearize::TaylorPoint& pt, int vre, int vim,
                    const std::vector<Term>& p_terms, int q_col) {
    std::vector<Term> row = {{current, 1.0}};
    double rhs = c.c0 - c.d_vre * pt.v_re - c.d_vim * pt.v_im;
    if (c.d_vre != 0.0) row.push_back({vre, -c.d_vre});
    if (c.d_vim != 0.0) row.push_back({vim, -c.d_vim});
    if (!p_terms.empty()) {
      for (const Term& pt_term : p_terms) row.push_back({pt_term.var, -c.d_p * pt_term.coef / 3.0});
      row.push_back({q_col, -c.d_q / 3.0});
      rhs -= c.d_p * pt.p + c.d_q * pt.q;
    }
    wm_.program.AddConstraint(row, Sense::kEqual, rhs);
  }

  void AddLoadCurrents(int s, int t, const Realization& fc) {
    for (size_t l = 0; l < net_.loads.size(); ++l) {
      const LoadPoint& ld = net_.loads[l];
      for (int f = 0; f < kNumPhases; ++f) {
        if (!ld.phases[f]) continue;
        linearize::TaylorPoint pt = VoltagePoint(ld.bus, f);
        linearize::CoeffPair c = linearize::LoadCurrentCoeffs(fc.load_p[l][f], fc.load_q[l][f], pt);
        const int vre = Col(Quantity::kVoltageRe, ld.bus, f, t, s);
        const int vim = Col(Quantity::kVoltageIm, ld.bus, f, t, s);
        AddTaylorRow(Col(Quantity::kLoadRe, l, f, t, s), c.re, pt, vre, vim, {}, -1);
        AddTaylorRow(Col(Quantity::kLoadIm, l, f, t, s), c.im, pt, vre, vim, {}, -1);
      }
    }
  }

  void AddDeviceCurrents(int s, int t) {
    for (size_t di = 0; di < net_.devices.size(); ++di) {
      const Device& dev = net_.devices[di];
      const int d = static_cast<int>(di);
      if (dev.kind == DeviceKind::kSubstation) continue;
      std::vector<Term> p_terms;
      if (dev.kind == DeviceKind::kBattery) {
        p_terms = {{Col(Quantity::kCharge, d, -1, t, s), 1.0},
                   {Col(Quantity::kDischarge, d, -1, t, s), -1.0}};
      } else {
        p_terms = {{Col(Quantity::kDeviceP, d, -1, t, s), 1.0}};
      }
      const int q = Col(Quantity::kDeviceQ, d, -1, t, s);
      for (int f = 0; f < kNumPhases; ++f) {
        linearize::TaylorPoint pt = VoltagePoint(dev.bus, f);
        pt.p = point_.device_p[d] / 3.0;
        pt.q = point_.device_q[d] / 3.0;
        linearize::CoeffPair c = linearize::DerCurrentCoeffs(pt);
        const int vre = Col(Quantity::kVoltageRe, dev.bus, f, t, s);
        const int vim = Col(Quantity::kVoltageIm, dev.bus, f, t, s);
        AddTaylorRow(Col(Quantity::kDeviceRe, d, f, t, s), c.re, pt, vre, vim, p_terms, q);
        AddTaylorRow(Col(Quantity::kDeviceIm, d, f, t, s), c.im, pt, vre, vim, p_terms, q);
      }
    }
  }

  void AddWedges(int s, int t) {
    const int slack = net_.slack_bus();
    for (size_t bi = 0; bi < net_.buses.size(); ++bi) {
      const int b = static_cast<int>(bi);
      if (b == slack) continue;
      for (int f = 0; f < kNumPhases; ++f) {
        if (!net_.buses[b].phases[f]) continue;
        if (wedges_[f].empty()) {
          wedges_[f] = linearize::VoltageWedge(net_.v_min, net_.v_max, kPhaseAngle[f],
                                               cfg_.wedge_phi, cfg_.wedge_segments);
        }
        const int vre = Col(Quantity::kVoltageRe, b, f, t, s);
        const int vim = Col(Quantity::kVoltageIm, b, f, t, s);
        for (const linearize::HalfPlane& hp : wedges_[f]) {
          Term terms[] = {{vre, hp.a_re}, {vim, hp.a_im}};
          wm_.program.AddConstraint(terms, ToSense(hp.sense), hp.rhs);
        }
      }
    }
  }

  const NetworkModel& net_;
  const std::vector<double>& soc_;
  const std::vector<WindowForecast>& fc_;
  const PlannerConfig& cfg_;
  const OperatingPoint& point_;
  int periods_ = 0;
  WindowModel wm_;
  std::vector<linearize::HalfPlane> circle_;
  std::array<std::vector<linearize::HalfPlane>, kNumPhases> wedges_;
};

}  // namespace

void PlannerConfig::Validate() const {
  if (window < 1) throw PlannerError("window must be at least 1");
  if (!(beta > 0.0 && beta <= 1.0)) throw PlannerError("beta must lie in (0, 1]");
  if (chords < 3) throw PlannerError("need at least 3 chords per circle");
  if (wedge_segments < 1) throw PlannerError("need at least one wedge segment");
  if (!(wedge_phi > 0.0 && wedge_phi < std::numbers::pi / 2.0)) {
    throw PlannerError("wedge half-angle must lie in (0, pi/2)");
  }
}

std::string_view ToString(Quantity q) {
  switch (q) {
    case Quantity::kVoltageRe: return "V_re";
    case Quantity::kVoltageIm: return "V_im";
    case Quantity::kLineRe: return "I_line_re";
    case Quantity::kLineIm: return "I_line_im";
    case Quantity::kLoadRe: return "I_load_re";
    case Quantity::kLoadIm: return "I_load_im";
    case Quantity::kDeviceRe: return "I_device_re";
    case Quantity::kDeviceIm: return "I_device_im";
    case Quantity::kGridRe: return "I_grid_re";
    case Quantity::kGridIm: return "I_grid_im";
    case Quantity::kDeviceP: return "P";
    case Quantity::kDeviceQ: return "Q";
    case Quantity::kCurtail: return "P_curtail";
    case Quantity::kCharge: return "P_ch";
    case Quantity::kDischarge: return "P_dis";
    case Quantity::kEnergy: return "E";
    case Quantity::kGridP: return "P_grid";
    case Quantity::kGridQ: return "Q_grid";
  }
  return "?";
}

bool IsActionQuantity(Quantity q, DeviceKind kind) {
  switch (q) {
    case Quantity::kCurtail:
    case Quantity::kCharge:
    case Quantity::kDischarge:
    case Quantity::kEnergy:
    case Quantity::kDeviceQ:
      return true;
    case Quantity::kDeviceP:
      return !IsRenewable(kind);
    default:
      return false;
  }
}

int WindowModel::Column(Quantity q, int element, int phase, int period, int scenario) const {
  auto it = index.find({q, element, phase, period, scenario});
  if (it == index.end() && scenario != 0) it = index.find({q, element, phase, period, 0});
  if (it == index.end()) {
    throw std::out_of_range("no column for " + std::string(ToString(q)) + " element " +
                            std::to_string(element) + " phase " + std::to_string(phase) +
                            " period " + std::to_string(period));
  }
  return it->second;
}

bool WindowModel::Has(Quantity q, int element, int phase, int period, int scenario) const {
  return index.count({q, element, phase, period, scenario}) ||
         (scenario != 0 && index.count({q, element, phase, period, 0}));
}

OperatingPoint FlatOperatingPoint(const NetworkModel& net) {
  OperatingPoint p;
  p.v_re.assign(net.buses.size(), PhaseValues{});
  p.v_im.assign(net.buses.size(), PhaseValues{});
  for (size_t b = 0; b < net.buses.size(); ++b) {
    for (int f = 0; f < kNumPhases; ++f) {
      p.v_re[b][f] = std::cos(kPhaseAngle[f]);
      p.v_im[b][f] = std::sin(kPhaseAngle[f]);
    }
  }
  p.device_p.assign(net.devices.size(), 0.0);
  p.device_q.assign(net.devices.size(), 0.0);
  return p;
}

OperatingPoint OperatingPointFrom(const NetworkModel& net, const PowerFlowSolution& flow,
                                  const PowerFlowInput& executed) {
  OperatingPoint p = FlatOperatingPoint(net);
  for (size_t b = 0; b < net.buses.size(); ++b) {
    for (int f = 0; f < kNumPhases; ++f) {
      if (!net.buses[b].phases[f]) continue;
      p.v_re[b][f] = flow.v_re[b][f];
      p.v_im[b][f] = flow.v_im[b][f];
    }
  }
  p.device_p = executed.device_p;
  p.device_q = executed.device_q;
  return p;
}

WindowModel BuildWindowModel(const NetworkModel& net, const std::vector<double>& soc,
                             const std::vector<WindowForecast>& scenarios,
                             const PlannerConfig& cfg, const OperatingPoint& point) {
  return Builder(net, soc, scenarios, cfg, point).Build();
}

WindowModel BuildWindowModel(const NetworkModel& net, const std::vector<double>& soc,
                             const WindowForecast& forecast, const PlannerConfig& cfg,
                             const OperatingPoint& point) {
  std::vector<WindowForecast> one = {forecast};
  return Builder(net, soc, one, cfg, point).Build();
}

ActionVector ExtractAction(const NetworkModel& net, const WindowModel& wm,
                           const lp::LpSolution& sol, int period) {
  if (!sol.optimal()) {
    throw PlannerError(std::string("cannot extract an action from a ") +
                       lp::ToString(sol.status) + " solution");
  }
  if (period < 0 || period >= wm.periods) throw PlannerError("period outside the window");
  auto value = [&](Quantity q, int d) {
    const int c = wm.Column(q, d, -1, period, 0);
    const lp::Variable& v = wm.program.variable(c);
    return std::clamp(sol.x[c], v.lower, v.upper);
  };
  ActionVector a;
  a.devices.resize(net.devices.size());
  for (size_t di = 0; di < net.devices.size(); ++di) {
    const int d = static_cast<int>(di);
    DeviceAction& out = a.devices[di];
    switch (net.devices[di].kind) {
      case DeviceKind::kPv:
      case DeviceKind::kWt:
        out.curtail = value(Quantity::kCurtail, d);
        out.q = value(Quantity::kDeviceQ, d);
        out.planned_available = wm.planned_available[period][d];
        out.p = std::max(0.0, out.planned_available - out.curtail);
        break;
      case DeviceKind::kDg:
        out.p = value(Quantity::kDeviceP, d);
        out.q = value(Quantity::kDeviceQ, d);
        break;
      case DeviceKind::kBattery:
        out.p_ch = value(Quantity::kCharge, d);
        out.p_dis = value(Quantity::kDischarge, d);
        out.q = value(Quantity::kDeviceQ, d);
        out.p = out.p_ch - out.p_dis;
        break;
      case DeviceKind::kSubstation:
        break;
    }
  }
  return a;
}

double PredictedCost(const WindowModel& wm, const lp::LpSolution& sol) {
  if (!sol.optimal()) throw PlannerError("predicted cost needs an optimal solution");
  return wm.program.Objective(sol.x);
}

double ComplementarityGap(const NetworkModel& net, const WindowModel& wm,
                          const lp::LpSolution& sol) {
  double worst = 0.0;
  for (int d : net.DevicesOfKind(DeviceKind::kBattery)) {
    for (int t = 0; t < wm.periods; ++t) {
      const double ch = sol.x[wm.Column(Quantity::kCharge, d, -1, t)];
      const double dis = sol.x[wm.Column(Quantity::kDischarge, d, -1, t)];
      worst = std::max(worst, std::max(0.0, ch) * std::max(0.0, dis));
    }
  }
  return worst;
}

}  // namespace gridhorizon

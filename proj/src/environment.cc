#include "gridhorizon/environment.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "gridhorizon/linearize.h"

namespace gridhorizon {
namespace {

using Complex = std::complex<double>;
using ComplexMatrix3 = std::array<std::array<Complex, kNumPhases>, kNumPhases>;

PhaseSet LinePhases(const NetworkModel& net, const Line& l) {
  PhaseSet on;
  for (int f = 0; f < kNumPhases; ++f) {
    on[f] = net.buses[l.from].phases[f] && net.buses[l.to].phases[f];
  }
  return on;
}

// Series admittance of a line restricted to its phases.
ComplexMatrix3 SeriesAdmittance(const NetworkModel& net, const Line& l) {
  PhaseSet on = LinePhases(net, l);
  std::vector<int> idx;
  for (int f = 0; f < kNumPhases; ++f)
    if (on[f]) idx.push_back(f);
  const int n = static_cast<int>(idx.size());
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(l.r[idx[i]][idx[j]], l.x[idx[i]][idx[j]]);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(z);
  if (!lu.isInvertible()) {
    throw PowerFlowError("line " + l.id + " has a singular impedance matrix", 0.0, 0);
  }
  Eigen::MatrixXcd y = lu.inverse();
  ComplexMatrix3 out{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[idx[i]][idx[j]] = y(i, j);
  return out;
}

struct Equations {
  const NetworkModel& net;
  std::vector<ComplexMatrix3> y;
  std::vector<std::array<int, kNumPhases>> var;  // unknown index per bus phase, -1 if none
  std::vector<std::array<Complex, kNumPhases>> s_net;  // net injected power per bus phase
  int n = 0;

  Equations(const NetworkModel& model, const PowerFlowInput& in) : net(model) {
    for (const Line& l : net.lines) y.push_back(SeriesAdmittance(net, l));
    const int slack = net.slack_bus();
    var.assign(net.buses.size(), {-1, -1, -1});
    for (size_t b = 0; b < net.buses.size(); ++b) {
      if (static_cast<int>(b) == slack) continue;
      for (int f = 0; f < kNumPhases; ++f)
        if (net.buses[b].phases[f]) var[b][f] = n++;
    }
    s_net.assign(net.buses.size(), std::array<Complex, kNumPhases>{});
    for (size_t d = 0; d < net.devices.size(); ++d) {
      const Device& dev = net.devices[d];
      if (dev.kind == DeviceKind::kSubstation) continue;
      const double sign = dev.kind == DeviceKind::kBattery ? -1.0 : 1.0;
      const Complex s = sign * Complex(in.device_p[d], in.device_q[d]) / 3.0;
      for (int f = 0; f < kNumPhases; ++f) s_net[dev.bus][f] += s;
    }
    for (size_t l = 0; l < net.loads.size(); ++l) {
      const LoadPoint& ld = net.loads[l];
      for (int f = 0; f < kNumPhases; ++f) {
        if (ld.phases[f]) s_net[ld.bus][f] -= Complex(in.load_p[l][f], in.load_q[l][f]);
      }
    }
  }

  // Current leaving each bus phase into the network (series plus shunt).
  std::vector<std::array<Complex, kNumPhases>> NetworkCurrents(
      const std::vector<std::array<Complex, kNumPhases>>& v) const {
    std::vector<std::array<Complex, kNumPhases>> out(net.buses.size());
    for (size_t li = 0; li < net.lines.size(); ++li) {
      const Line& l = net.lines[li];
      for (int f = 0; f < kNumPhases; ++f) {
        Complex i = 0.0;
        for (int h = 0; h < kNumPhases; ++h) i += y[li][f][h] * (v[l.from][h] - v[l.to][h]);
        out[l.from][f] += i;
        out[l.to][f] -= i;
        const Complex half(0.0, l.b_sh[f] / 2.0);
        out[l.from][f] += half * v[l.from][f];
        out[l.to][f] += half * v[l.to][f];
      }
    }
    return out;
  }

  Complex Injection(int b, int f, Complex v) const {
    const Complex s = s_net[b][f];
    if (s == 0.0) return 0.0;
    auto c = linearize::CurrentFromPower(s.real(), s.imag(), v.real(), v.imag());
    return {c.g, c.h};
  }

  Eigen::VectorXd Mismatch(const std::vector<std::array<Complex, kNumPhases>>& v) const {
    Eigen::VectorXd r(2 * n);
    auto net_i = NetworkCurrents(v);
    for (size_t b = 0; b < var.size(); ++b) {
      for (int f = 0; f < kNumPhases; ++f) {
        const int k = var[b][f];
        if (k < 0) continue;
        const Complex m = net_i[b][f] - Injection(static_cast<int>(b), f, v[b][f]);
        r[2 * k] = m.real();
        r[2 * k + 1] = m.imag();
      }
    }
    return r;
  }

  Eigen::SparseMatrix<double> Jacobian(
      const std::vector<std::array<Complex, kNumPhases>>& v) const {
    std::vector<Eigen::Triplet<double>> trip;
    auto add_block = [&](int row, int col, Complex a) {
      // d(I_re, I_im) / d(V_re, V_im) of I = a * V.
      if (row < 0 || col < 0) return;
      trip.emplace_back(2 * row, 2 * col, a.real());
      trip.emplace_back(2 * row, 2 * col + 1, -a.imag());
      trip.emplace_back(2 * row + 1, 2 * col, a.imag());
      trip.emplace_back(2 * row + 1, 2 * col + 1, a.real());
    };
    for (size_t li = 0; li < net.lines.size(); ++li) {
      const Line& l = net.lines[li];
      for (int f = 0; f < kNumPhases; ++f) {
        for (int h = 0; h < kNumPhases; ++h) {
          const Complex a = y[li][f][h];
          if (a == 0.0) continue;
          add_block(var[l.from][f], var[l.from][h], a);
          add_block(var[l.from][f], var[l.to][h], -a);
          add_block(var[l.to][f], var[l.from][h], -a);
          add_block(var[l.to][f], var[l.to][h], a);
        }
        const Complex half(0.0, l.b_sh[f] / 2.0);
        if (half != 0.0) {
          add_block(var[l.from][f], var[l.from][f], half);
          add_block(var[l.to][f], var[l.to][f], half);
        }
      }
    }
    for (size_t b = 0; b < var.size(); ++b) {
      for (int f = 0; f < kNumPhases; ++f) {
        const int k = var[b][f];
        if (k < 0) continue;
        const Complex s = s_net[b][f];
        if (s == 0.0) continue;
        auto j = linearize::CurrentVoltagePartials(s.real(), s.imag(), v[b][f].real(),
                                                   v[b][f].imag());
        trip.emplace_back(2 * k, 2 * k, -j.g_re);
        trip.emplace_back(2 * k, 2 * k + 1, -j.g_im);
        trip.emplace_back(2 * k + 1, 2 * k, -j.h_re);
        trip.emplace_back(2 * k + 1, 2 * k + 1, -j.h_im);
      }
    }
    Eigen::SparseMatrix<double> jac(2 * n, 2 * n);
    jac.setFromTriplets(trip.begin(), trip.end());
    return jac;
  }
};

}  // namespace

PowerFlowInput PowerFlowInput::Zero(const NetworkModel& net) {
  PowerFlowInput in;
  in.device_p.assign(net.devices.size(), 0.0);
  in.device_q.assign(net.devices.size(), 0.0);
  in.load_p.assign(net.loads.size(), PhaseValues{});
  in.load_q.assign(net.loads.size(), PhaseValues{});
  return in;
}

PowerFlowSolution SolvePowerFlow(const NetworkModel& net, const PowerFlowInput& input,
                                 const PowerFlowOptions& options) {
  if (input.device_p.size() != net.devices.size() ||
      input.device_q.size() != net.devices.size() || input.load_p.size() != net.loads.size() ||
      input.load_q.size() != net.loads.size()) {
    throw std::invalid_argument("power-flow input does not match the network");
  }
  Equations eq(net, input);
  std::vector<std::array<Complex, kNumPhases>> v(net.buses.size());
  for (size_t b = 0; b < net.buses.size(); ++b) {
    for (int f = 0; f < kNumPhases; ++f) {
      if (net.buses[b].phases[f]) v[b][f] = std::polar(1.0, kPhaseAngle[f]);
    }
  }

  int iter = 0;
  Eigen::VectorXd r = eq.Mismatch(v);
  double residual = eq.n ? r.lpNorm<Eigen::Infinity>() : 0.0;
  while (residual > options.tolerance) {
    if (iter >= options.max_iterations) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "power flow did not converge in %d iterations (residual %.3g)",
                    iter, residual);
      throw PowerFlowError(buf, residual, iter);
    }
    Eigen::SparseMatrix<double> jac = eq.Jacobian(v);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(jac);
    if (lu.info() != Eigen::Success) {
      throw PowerFlowError("singular power-flow Jacobian", residual, iter);
    }
    Eigen::VectorXd dx = lu.solve(-r);
    if (!dx.allFinite()) throw PowerFlowError("non-finite Newton step", residual, iter);
    for (size_t b = 0; b < eq.var.size(); ++b) {
      for (int f = 0; f < kNumPhases; ++f) {
        const int k = eq.var[b][f];
        if (k >= 0) v[b][f] += Complex(dx[2 * k], dx[2 * k + 1]);
      }
    }
    ++iter;
    r = eq.Mismatch(v);
    residual = r.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual)) throw PowerFlowError("power flow diverged", residual, iter);
  }

  PowerFlowSolution sol;
  sol.iterations = iter;
  sol.residual = residual;
  sol.v_re.assign(net.buses.size(), PhaseValues{});
  sol.v_im = sol.v_re;
  for (size_t b = 0; b < net.buses.size(); ++b) {
    for (int f = 0; f < kNumPhases; ++f) {
      sol.v_re[b][f] = v[b][f].real();
      sol.v_im[b][f] = v[b][f].imag();
    }
  }
  sol.line_re.assign(net.lines.size(), PhaseValues{});
  sol.line_im = sol.line_re;
  for (size_t li = 0; li < net.lines.size(); ++li) {
    const Line& l = net.lines[li];
    for (int f = 0; f < kNumPhases; ++f) {
      Complex i = 0.0;
      for (int h = 0; h < kNumPhases; ++h) i += eq.y[li][f][h] * (v[l.from][h] - v[l.to][h]);
      sol.line_re[li][f] = i.real();
      sol.line_im[li][f] = i.imag();
    }
  }
  sol.load_re.assign(net.loads.size(), PhaseValues{});
  sol.load_im = sol.load_re;
  for (size_t l = 0; l < net.loads.size(); ++l) {
    const LoadPoint& ld = net.loads[l];
    for (int f = 0; f < kNumPhases; ++f) {
      if (!ld.phases[f]) continue;
      auto c = linearize::CurrentFromPower(input.load_p[l][f], input.load_q[l][f],
                                           v[ld.bus][f].real(), v[ld.bus][f].imag());
      sol.load_re[l][f] = c.g;
      sol.load_im[l][f] = c.h;
    }
  }
  sol.device_re.assign(net.devices.size(), PhaseValues{});
  sol.device_im = sol.device_re;
  for (size_t d = 0; d < net.devices.size(); ++d) {
    const Device& dev = net.devices[d];
    if (dev.kind == DeviceKind::kSubstation) continue;
    for (int f = 0; f < kNumPhases; ++f) {
      auto c = linearize::CurrentFromPower(input.device_p[d] / 3.0, input.device_q[d] / 3.0,
                                           v[dev.bus][f].real(), v[dev.bus][f].imag());
      sol.device_re[d][f] = c.g;
      sol.device_im[d][f] = c.h;
    }
  }
  const int slack = net.slack_bus();
  auto net_i = eq.NetworkCurrents(v);
  for (int f = 0; f < kNumPhases; ++f) {
    const Complex i = net_i[slack][f] - eq.Injection(slack, f, v[slack][f]);
    sol.grid_re[f] = i.real();
    sol.grid_im[f] = i.imag();
    sol.p_grid += v[slack][f].real() * i.real() + v[slack][f].imag() * i.imag();
    sol.q_grid += v[slack][f].imag() * i.real() - v[slack][f].real() * i.imag();
  }
  return sol;
}

double LineLosses(const NetworkModel& net, const PowerFlowSolution& sol) {
  double loss = 0.0;
  for (size_t li = 0; li < net.lines.size(); ++li) {
    const Line& l = net.lines[li];
    for (int f = 0; f < kNumPhases; ++f) {
      for (int h = 0; h < kNumPhases; ++h) {
        loss += l.r[f][h] * (sol.line_re[li][f] * sol.line_re[li][h] +
                             sol.line_im[li][f] * sol.line_im[li][h]);
      }
    }
  }
  return loss;
}

ViolationReport CheckLimits(const PowerFlowSolution& sol, const NetworkModel& net) {
  ViolationReport rep;
  for (size_t b = 0; b < net.buses.size(); ++b) {
    for (int f = 0; f < kNumPhases; ++f) {
      if (!net.buses[b].phases[f]) continue;
      ++rep.bus_phases_checked;
      const double m = std::hypot(sol.v_re[b][f], sol.v_im[b][f]);
      if (m < net.v_min) {
        rep.voltage.push_back({static_cast<int>(b), f, m, net.v_min - m, true});
      } else if (m > net.v_max) {
        rep.voltage.push_back({static_cast<int>(b), f, m, m - net.v_max, false});
      } else {
        continue;
      }
      rep.worst_voltage = std::max(rep.worst_voltage, rep.voltage.back().excess);
    }
  }
  for (size_t li = 0; li < net.lines.size(); ++li) {
    const Line& l = net.lines[li];
    PhaseSet on = LinePhases(net, l);
    for (int f = 0; f < kNumPhases; ++f) {
      if (!on[f]) continue;
      ++rep.line_phases_checked;
      const double m = std::hypot(sol.line_re[li][f], sol.line_im[li][f]);
      if (m <= l.i_max) continue;
      const double excess = m - l.i_max;
      rep.current.push_back({static_cast<int>(li), f, m, excess, excess / l.i_max});
      rep.worst_current = std::max(rep.worst_current, excess / l.i_max);
    }
  }
  return rep;
}

double NextSoc(const BatteryParams& b, double soc, double p_ch, double p_dis, double dt_h) {
  const double eta = std::sqrt(b.eta_rt);
  return (soc + dt_h * (p_ch * eta - p_dis / eta)) / (1.0 + dt_h * b.self_discharge);
}

double StageCost(const NetworkModel& net, double price, double p_grid,
                 const std::vector<double>& device_p) {
  double cost = price * p_grid;
  for (size_t d = 0; d < net.devices.size(); ++d) {
    if (net.devices[d].kind == DeviceKind::kDg) cost += net.devices[d].cost * device_p[d];
  }
  return net.dt_h * cost;
}

std::vector<double> InitialSoc(const NetworkModel& net) {
  std::vector<double> soc(net.devices.size(), 0.0);
  for (size_t d = 0; d < net.devices.size(); ++d) {
    if (net.devices[d].kind == DeviceKind::kBattery) soc[d] = net.devices[d].battery.e_init;
  }
  return soc;
}

StepOutcome Step(const NetworkModel& net, const std::vector<double>& soc,
                 const ActionVector& action, const Realization& realized,
                 const PowerFlowOptions& options) {
  const size_t nd = net.devices.size();
  if (soc.size() != nd || action.devices.size() != nd || realized.available.size() != nd) {
    throw std::invalid_argument("step inputs do not match the network");
  }
  StepOutcome out;
  out.executed = PowerFlowInput::Zero(net);
  out.executed.load_p = realized.load_p;
  out.executed.load_q = realized.load_q;
  out.next_soc.assign(nd, 0.0);
  out.soc_clamped.assign(nd, false);
  for (size_t d = 0; d < nd; ++d) {
    const Device& dev = net.devices[d];
    const DeviceAction& a = action.devices[d];
    switch (dev.kind) {
      case DeviceKind::kPv:
      case DeviceKind::kWt: {
        const double planned = a.planned_available - a.curtail;
        out.executed.device_p[d] = std::max(0.0, std::min(planned, realized.available[d]));
        out.executed.device_q[d] = a.q;
        break;
      }
      case DeviceKind::kDg:
        out.executed.device_p[d] = a.p;
        out.executed.device_q[d] = a.q;
        break;
      case DeviceKind::kBattery: {
        out.executed.device_p[d] = a.p_ch - a.p_dis;
        out.executed.device_q[d] = a.q;
        const BatteryParams& b = dev.battery;
        double e = NextSoc(b, soc[d], a.p_ch, a.p_dis, net.dt_h);
        // Planner round-off is absorbed silently; real excursions are flagged.
        const double slop = 1e-9 * std::max(1.0, b.e_max);
        if (e < b.e_min - slop || e > b.e_max + slop) out.soc_clamped[d] = true;
        e = std::clamp(e, b.e_min, b.e_max);
        out.next_soc[d] = e;
        break;
      }
      case DeviceKind::kSubstation:
        break;
    }
  }
  out.flow = SolvePowerFlow(net, out.executed, options);
  out.cost = StageCost(net, realized.price, out.flow.p_grid, out.executed.device_p);
  out.violations = CheckLimits(out.flow, net);
  return out;
}

}  // namespace gridhorizon

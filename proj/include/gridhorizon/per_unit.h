#pragma once

namespace gridhorizon {

// Per-unit bases. Every phase quantity in the model shares the same power
// base, so a balanced three-phase injection P carries P/3 on each phase.
struct Bases {
  double s_base_va;
  double v_base_v;

  Bases(double s_base_va, double v_base_v);

  double impedance_base() const { return v_base_v * v_base_v / s_base_va; }
  double current_base() const { return s_base_va / v_base_v; }
};

double OhmsToPerUnit(double ohms, const Bases& b);
double PerUnitToOhms(double pu, const Bases& b);
double SiemensToPerUnit(double siemens, const Bases& b);
double PerUnitToSiemens(double pu, const Bases& b);
double WattsToPerUnit(double watts, const Bases& b);
double PerUnitToWatts(double pu, const Bases& b);
double AmpsToPerUnit(double amps, const Bases& b);
double PerUnitToAmps(double pu, const Bases& b);

// Smallest adjustment of `guess` such that guess / base == target exactly,
// when one exists within a few ulps. Used when writing documents so that
// loading them reproduces the stored per-unit value bit for bit.
double ExactDivisionPreimage(double target, double base, double guess);
double ExactProductPreimage(double target, double base, double guess);

}  // namespace gridhorizon

#include "gridhorizon/per_unit.h"

#include <cmath>
#include <stdexcept>

namespace gridhorizon {

Bases::Bases(double s_base_va, double v_base_v)
    : s_base_va(s_base_va), v_base_v(v_base_v) {
  if (!(s_base_va > 0.0) || !(v_base_v > 0.0) || !std::isfinite(s_base_va) ||
      !std::isfinite(v_base_v)) {
    throw std::invalid_argument("per-unit bases must be positive and finite");
  }
}

double OhmsToPerUnit(double ohms, const Bases& b) { return ohms / b.impedance_base(); }
double PerUnitToOhms(double pu, const Bases& b) {
  const double zb = b.impedance_base();
  return ExactDivisionPreimage(pu, zb, pu * zb);
}
double SiemensToPerUnit(double siemens, const Bases& b) {
  return siemens * b.impedance_base();
}
double PerUnitToSiemens(double pu, const Bases& b) {
  const double zb = b.impedance_base();
  return ExactProductPreimage(pu, zb, pu / zb);
}
double WattsToPerUnit(double watts, const Bases& b) { return watts / b.s_base_va; }
double PerUnitToWatts(double pu, const Bases& b) {
  return ExactDivisionPreimage(pu, b.s_base_va, pu * b.s_base_va);
}
double AmpsToPerUnit(double amps, const Bases& b) { return amps / b.current_base(); }
double PerUnitToAmps(double pu, const Bases& b) {
  const double ib = b.current_base();
  return ExactDivisionPreimage(pu, ib, pu * ib);
}

double ExactDivisionPreimage(double target, double base, double guess) {
  if (guess / base == target) return guess;
  double up = guess, down = guess;
  for (int k = 0; k < 8; ++k) {
    up = std::nextafter(up, INFINITY);
    down = std::nextafter(down, -INFINITY);
    if (up / base == target) return up;
    if (down / base == target) return down;
  }
  return guess;
}

double ExactProductPreimage(double target, double base, double guess) {
  if (guess * base == target) return guess;
  double up = guess, down = guess;
  for (int k = 0; k < 8; ++k) {
    up = std::nextafter(up, INFINITY);
    down = std::nextafter(down, -INFINITY);
    if (up * base == target) return up;
    if (down * base == target) return down;
  }
  return guess;
}

}  // namespace gridhorizon

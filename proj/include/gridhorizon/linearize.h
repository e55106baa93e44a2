#pragma once

#include <optional>
#include <vector>

namespace gridhorizon::linearize {

// Expansion point. p and q are only used for DER expansions.
struct TaylorPoint {
  double v_re = 1.0;
  double v_im = 0.0;
  double p = 0.0;
  double q = 0.0;
};

// First-order model value = c0 + d_vre*dVre + d_vim*dVim + d_p*dP + d_q*dQ,
// with the deltas taken from the expansion point.
struct CurrentCoeffs {
  double c0 = 0.0;
  double d_vre = 0.0;
  double d_vim = 0.0;
  double d_p = 0.0;
  double d_q = 0.0;
};

struct CurrentPair {
  double g = 0.0;  // real current
  double h = 0.0;  // imaginary current
};

struct CoeffPair {
  CurrentCoeffs re;
  CurrentCoeffs im;
};

// Current drawn by a constant-power element, conj(S / V).
// Throws std::domain_error at the origin.
CurrentPair CurrentFromPower(double p, double q, double v_re, double v_im);

// Partials of (g, h) with respect to (v_re, v_im) at fixed (p, q):
// {dg/dVre, dg/dVim, dh/dVre, dh/dVim}.
struct VoltageJacobian {
  double g_re, g_im, h_re, h_im;
};
VoltageJacobian CurrentVoltagePartials(double p, double q, double v_re, double v_im);

CoeffPair LoadCurrentCoeffs(double p, double q, const TaylorPoint& point);
CoeffPair DerCurrentCoeffs(const TaylorPoint& point);

enum class Side { kLessEqual, kGreaterEqual };

// a_re*x + a_im*y (sense) rhs with a unit normal.
struct HalfPlane {
  double a_re = 1.0;
  double a_im = 0.0;
  double rhs = 0.0;
  Side sense = Side::kLessEqual;

  double Slack(double x, double y) const;  // >= 0 when satisfied
  bool Contains(double x, double y, double tol = 0.0) const { return Slack(x, y) >= -tol; }
};

struct Arc {
  double start;
  double end;
};

// Chords of a polygon inscribed in the circle of radius `radius`. A full
// circle uses vertices at pi/4 + 2*pi*k/n, so chord sets nest when n doubles.
// With `arc`, n chords split [start, end] evenly.
std::vector<HalfPlane> CirclePolygon(double radius, int n_sides,
                                     std::optional<Arc> arc = std::nullopt);

// Convex inner region of the voltage annulus around angle theta: one lower
// chord, 2*l upper chords of radius v_max over [theta-phi, theta+phi] and two
// angle bounds.
std::vector<HalfPlane> VoltageWedge(double v_min, double v_max, double theta, double phi,
                                    int l);

}  // namespace gridhorizon::linearize

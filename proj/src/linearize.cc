#include "gridhorizon/linearize.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gridhorizon::linearize {
namespace {

double Norm2(double v_re, double v_im) {
  const double r2 = v_re * v_re + v_im * v_im;
  if (!(r2 > 0.0)) throw std::domain_error("voltage expansion point at the origin");
  return r2;
}

HalfPlane Chord(double angle, double rhs, Side sense) {
  return {std::cos(angle), std::sin(angle), rhs, sense};
}

}  // namespace

CurrentPair CurrentFromPower(double p, double q, double v_re, double v_im) {
  const double r2 = Norm2(v_re, v_im);
  return {(p * v_re + q * v_im) / r2, (p * v_im - q * v_re) / r2};
}

VoltageJacobian CurrentVoltagePartials(double p, double q, double x, double y) {
  const double r2 = Norm2(x, y);
  const double r4 = r2 * r2;
  const double xx = x * x, yy = y * y, xy = x * y;
  return {
      (p * (yy - xx) - 2.0 * q * xy) / r4,
      (q * (xx - yy) - 2.0 * p * xy) / r4,
      (q * (xx - yy) - 2.0 * p * xy) / r4,
      (p * (xx - yy) + 2.0 * q * xy) / r4,
  };
}

CoeffPair LoadCurrentCoeffs(double p, double q, const TaylorPoint& pt) {
  CurrentPair c = CurrentFromPower(p, q, pt.v_re, pt.v_im);
  VoltageJacobian j = CurrentVoltagePartials(p, q, pt.v_re, pt.v_im);
  CoeffPair out;
  out.re = {c.g, j.g_re, j.g_im, 0.0, 0.0};
  out.im = {c.h, j.h_re, j.h_im, 0.0, 0.0};
  return out;
}

CoeffPair DerCurrentCoeffs(const TaylorPoint& pt) {
  CoeffPair out = LoadCurrentCoeffs(pt.p, pt.q, pt);
  const double r2 = Norm2(pt.v_re, pt.v_im);
  out.re.d_p = pt.v_re / r2;
  out.re.d_q = pt.v_im / r2;
  out.im.d_p = pt.v_im / r2;
  out.im.d_q = -pt.v_re / r2;
  return out;
}

double HalfPlane::Slack(double x, double y) const {
  const double lhs = a_re * x + a_im * y;
  return sense == Side::kLessEqual ? rhs - lhs : lhs - rhs;
}

std::vector<HalfPlane> CirclePolygon(double radius, int n_sides, std::optional<Arc> arc) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("circle radius must be positive");
  }
  std::vector<HalfPlane> out;
  if (!arc) {
    if (n_sides < 3) throw std::invalid_argument("a full polygon needs at least 3 sides");
    const double step = 2.0 * std::numbers::pi / n_sides;
    const double rhs = radius * std::cos(step / 2.0);
    for (int k = 0; k < n_sides; ++k) {
      out.push_back(Chord(std::numbers::pi / 4.0 + (k + 0.5) * step, rhs, Side::kLessEqual));
    }
    return out;
  }
  const double span = arc->end - arc->start;
  if (!(span > 0.0) || n_sides < 1) throw std::invalid_argument("empty arc");
  if (span / n_sides >= std::numbers::pi) {
    throw std::invalid_argument("arc segments must each be shorter than a half turn");
  }
  const double step = span / n_sides;
  const double rhs = radius * std::cos(step / 2.0);
  for (int k = 0; k < n_sides; ++k) {
    out.push_back(Chord(arc->start + (k + 0.5) * step, rhs, Side::kLessEqual));
  }
  return out;
}

std::vector<HalfPlane> VoltageWedge(double v_min, double v_max, double theta, double phi,
                                    int l) {
  if (!(v_min > 0.0 && v_min < v_max) || !(phi > 0.0 && phi < std::numbers::pi / 2.0) ||
      l < 1 || !std::isfinite(theta) || !std::isfinite(v_max)) {
    throw std::invalid_argument("degenerate voltage wedge arguments");
  }
  std::vector<HalfPlane> out;
  out.push_back(Chord(theta, v_min * std::cos(phi), Side::kGreaterEqual));
  std::vector<HalfPlane> upper =
      CirclePolygon(v_max, 2 * l, Arc{theta - phi, theta + phi});
  out.insert(out.end(), upper.begin(), upper.end());
  // Angle bounds: left of the ray at theta - phi, right of the ray at theta + phi.
  const double lo = theta - phi, hi = theta + phi;
  out.push_back({-std::sin(lo), std::cos(lo), 0.0, Side::kGreaterEqual});
  out.push_back({std::sin(hi), -std::cos(hi), 0.0, Side::kGreaterEqual});
  return out;
}

}  // namespace gridhorizon::linearize

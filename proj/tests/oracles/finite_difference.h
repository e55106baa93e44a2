#pragma once

#include <complex>

namespace gridhorizon::testing {

// Independent reference for the constant-power current: I = conj(S / V).
inline std::complex<double> PhasorCurrent(double p, double q, double v_re, double v_im) {
  return std::conj(std::complex<double>(p, q) / std::complex<double>(v_re, v_im));
}

// Central differences of the phasor current in each argument.
struct CurrentDifferences {
  std::complex<double> d_vre, d_vim, d_p, d_q;
};

inline CurrentDifferences CentralDifferences(double p, double q, double v_re, double v_im,
                                             double step = 1e-6) {
  auto f = [](double p, double q, double x, double y) { return PhasorCurrent(p, q, x, y); };
  const double h2 = 2.0 * step;
  return {
      (f(p, q, v_re + step, v_im) - f(p, q, v_re - step, v_im)) / h2,
      (f(p, q, v_re, v_im + step) - f(p, q, v_re, v_im - step)) / h2,
      (f(p + step, q, v_re, v_im) - f(p - step, q, v_re, v_im)) / h2,
      (f(p, q + step, v_re, v_im) - f(p, q - step, v_re, v_im)) / h2,
  };
}

}  // namespace gridhorizon::testing

#ifndef STARKWG_SMOOTHSTEP_HPP
#define STARKWG_SMOOTHSTEP_HPP

#include <cmath>

// One C-infinity transition family shared by the three places that need a
// smooth compactly supported shape: the curvature bump, the spectral cutoff
// phi, and the Weyl window xi. Everything is closed-form so that second and
// third derivatives carry no finite-difference noise into V0 and R_theta.

namespace starkwg {

struct Jet2 {
  double f = 0.0, d1 = 0.0, d2 = 0.0;
};

struct Jet3 {
  double f = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

// Descending step: 1 for x <= 0, 0 for x >= 1, value 1/2 at x = 1/2,
// symmetric under x -> 1-x. Built as the logistic of rho(x) = 1/(1-x) - 1/x,
// which is odd about x = 1/2, so p(x) + p(1-x) = 1 exactly.
inline Jet3 smooth_step_down(double x) {
  // Outside [0.005, 0.995] the plateau is reached to ~1e-86; clip to make the
  // plateaus and their derivatives exact.
  if (x <= 0.005) return {1.0, 0.0, 0.0, 0.0};
  if (x >= 0.995) return {0.0, 0.0, 0.0, 0.0};

  const double om = 1.0 - x;
  const double rho = 1.0 / om - 1.0 / x;
  const double r1 = 1.0 / (om * om) + 1.0 / (x * x);
  const double r2 = 2.0 / (om * om * om) - 2.0 / (x * x * x);
  const double r3 = 6.0 / (om * om * om * om) + 6.0 / (x * x * x * x);

  const double p = 1.0 / (1.0 + std::exp(rho));
  const double q = p * (1.0 - p);
  const double p1 = -q * r1;
  const double p2 = -p1 * (1.0 - 2.0 * p) * r1 - q * r2;
  const double p3 = -p2 * (1.0 - 2.0 * p) * r1 + 2.0 * p1 * p1 * r1 -
                    2.0 * p1 * (1.0 - 2.0 * p) * r2 - q * r3;
  return {p, p1, p2, p3};
}

// C-infinity bump on (0,1): 0 outside, peak value exactly 1 at x = 1/2.
// B = exp(1 - 1/(4x(1-x)));  B' = -r'B,  B'' = (r'^2 - r'')B.
inline Jet2 smooth_bump(double x) {
  if (x <= 0.0 || x >= 1.0) return {0.0, 0.0, 0.0};
  const double v = x * (1.0 - x);
  const double r = 0.25 / v;
  if (r > 701.0) return {0.0, 0.0, 0.0};  // exp underflow region

  const double vp = 1.0 - 2.0 * x;
  const double iv = 1.0 / v;
  const double r1 = -0.25 * iv * iv * vp;
  const double r2 = 0.5 * iv * iv * iv * vp * vp + 0.5 * iv * iv;
  const double b = std::exp(1.0 - r);
  return {b, -r1 * b, (r1 * r1 - r2) * b};
}

// C-infinity characteristic function of (-1,1): identically 1 on [-1/2,1/2],
// 0 outside (-1,1), transitions on [-1,-1/2] and [1/2,1].
inline Jet2 smooth_window(double y) {
  // rising edges at both ends, each a reflected smooth_step_down
  const Jet3 l = smooth_step_down(2.0 * (y + 1.0));  // descending in y+1
  const Jet3 r = smooth_step_down(2.0 * (1.0 - y));
  const double a = 1.0 - l.f, a1 = -2.0 * l.d1, a2 = -4.0 * l.d2;
  const double b = 1.0 - r.f, b1 = 2.0 * r.d1, b2 = -4.0 * r.d2;
  return {a * b, a1 * b + a * b1, a2 * b + 2.0 * a1 * b1 + a * b2};
}

}  // namespace starkwg

#endif

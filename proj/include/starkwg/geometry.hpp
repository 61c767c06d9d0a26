#ifndef STARKWG_GEOMETRY_HPP
#define STARKWG_GEOMETRY_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "starkwg/errors.hpp"
#include "starkwg/smoothstep.hpp"

namespace starkwg {

// Signed curvature gamma(s) of the guide's reference curve, compactly
// supported on [0, s0], with two analytically coded derivatives. The only
// concrete family is the C-infinity bump scaled to amplitude gamma_max;
// gamma_max = 0 gives the straight guide.
struct CurvatureProfile {
  double gamma_max = 0.0;  // sup-norm of gamma, 1/length
  double s0 = 1.0;         // right endpoint of the support
  int smoothness_order = 2;

  double gamma(double s) const {
    if (s <= 0.0 || s >= s0) return 0.0;
    return gamma_max * smooth_bump(s / s0).f;
  }
  double gamma_d1(double s) const {
    if (s <= 0.0 || s >= s0) return 0.0;
    return gamma_max * smooth_bump(s / s0).d1 / s0;
  }
  double gamma_d2(double s) const {
    if (s <= 0.0 || s >= s0) return 0.0;
    return gamma_max * smooth_bump(s / s0).d2 / (s0 * s0);
  }
};

CurvatureProfile make_bump_profile(double gamma_max, double s0,
                                   int smoothness_order = 2);

// Electric field of intensity F in direction eta (angle against the straight
// arm of the guide). F = 0 is the degenerate no-field case used by a few
// diagnostics; everything resonance-related requires F > 0.
struct FieldConfig {
  double F = 0.0;    // energy / length
  double eta = 0.0;  // radians
};

// alpha(s) = -int_0^s gamma, the tangent rotation angle: 0 for s <= 0 and
// constant alpha0 past the support. Composite Simpson on a uniform grid of
// quad_points panels over [0, s0].
double tangent_angle(const CurvatureProfile& profile, double s,
                     int quad_points = 4096);

// Reference curve (a(s), b(s)) = (int_0^s cos alpha, int_0^s sin alpha).
std::pair<double, double> reference_curve(const CurvatureProfile& profile,
                                          double s, int quad_points = 4096);

// Strip of width d around the reference curve, with the angle table and the
// per-direction Stark constants cached at construction. Immutable afterwards.
class GuideGeometry {
 public:
  GuideGeometry(double d, const CurvatureProfile& profile,
                int quad_points = 4096);

  double d() const { return d_; }
  const CurvatureProfile& profile() const { return profile_; }
  double alpha0() const { return alpha0_; }
  int quad_points() const { return quad_points_; }

  // alpha(s) from the cached prefix table, O(1) per call.
  double alpha(double s) const;

  // A(eta) = int_0^{s0} cos(eta - alpha(t)) dt.
  double A(double eta) const;

  double metric(double s, double u) const;               // (1 + u gamma)^-2
  double effective_potential(double s, double u) const;  // V0(s, u)

 private:
  friend class FieldFrame;
  double d_;
  CurvatureProfile profile_;
  int quad_points_;
  double alpha0_;
  double hq_;                         // table step = s0 / quad_points
  std::vector<double> alpha_table_;   // alpha at k*hq_, k = 0..quad_points
};

// Per-direction Stark data: the cached alpha0, A, and the prefix integrals
// I2(s) = int_0^s cos(eta - alpha(t)) dt needed by the middle branch of W.
// Built once per (geometry, eta) and reused across every W evaluation of an
// assembly.
class FieldFrame {
 public:
  FieldFrame(const GuideGeometry& geom, double eta);

  double eta() const { return eta_; }
  double A() const { return A_; }

  // Stark potential W(F, s, u) in the straightened coordinates.
  double stark(double F, double s, double u) const;

 private:
  const GuideGeometry* geom_;
  double eta_;
  double A_;
  double hq_;
  std::vector<double> I2_table_;  // I2 at k*hq_, k = 0..quad_points
};

// Convenience single-point form (builds a FieldFrame internally; use a
// FieldFrame directly when evaluating many points).
double stark_potential(const GuideGeometry& geom, const FieldConfig& field,
                       double s, double u);

// Free-function forms of the metric factor and effective potential.
double metric(const CurvatureProfile& profile, double s, double u);
double effective_potential(const CurvatureProfile& profile, double s, double u);

// Hypothesis report: (h1) regularity of gamma, (h2) d*max|gamma| < 1,
// (h3) |eta| < pi/2 and |eta - alpha0| < pi/2.
struct HypothesisReport {
  bool h1_ok = false;
  bool h2_ok = false;
  bool h3_ok = false;
  double d_gamma_max = 0.0;  // measured d * sup|gamma|
  double abs_eta = 0.0;
  double abs_eta_minus_alpha0 = 0.0;
  bool all_ok() const { return h1_ok && h2_ok && h3_ok; }
  std::string describe() const;
};

HypothesisReport validate_hypotheses(const GuideGeometry& geom,
                                     const FieldConfig& field);

}  // namespace starkwg

#endif

#ifndef STARKWG_DISTORTION_HPP
#define STARKWG_DISTORTION_HPP

#include <complex>
#include <utility>

#include "starkwg/geometry.hpp"
#include "starkwg/grid.hpp"
#include "starkwg/hamiltonian.hpp"
#include "starkwg/operator_matrix.hpp"

namespace starkwg {

// Smooth monotone cutoff phi: identically 1 below E, identically 0 above
// E + deltaE, with closed-form derivatives up to third order. E is negative;
// the transition window sits strictly below the energy origin so that the
// distortion generated from phi never touches the curved part of the guide.
struct CutoffFunction {
  double E;
  double deltaE;

  // Shape constants of the fixed mollifier profile: sup |phi^(k)| equals
  // C_k / deltaE^k. Measured once on a 2^21-point grid of the unit-interval
  // profile; tests re-measure and compare.
  static constexpr double kC1 = 2.0;
  static constexpr double kC2 = 9.85;
  static constexpr double kC3 = 110.6;

  double phi(double t) const;
  double phi_d1(double t) const;
  double phi_d2(double t) const;
  double phi_d3(double t) const;

  // C_k / deltaE^k for k = 1, 2, 3.
  double derivative_bound(int k) const;
};

// Validates E < 0 and 0 < deltaE <= min{1, |E|}/2 and returns the cutoff.
CutoffFunction build_cutoff(double E, double deltaE);

// Picks (E, deltaE) from the bound-state energy E0 and the threshold
// lambda0: the window obeys E - deltaE = E0 - lambda0 with deltaE = |E|/2,
// so E = (2/3)(E0 - lambda0). Requires E0 < lambda0.
std::pair<double, double> reference_energy(double E0, double lambda0);

// Longitudinal vector field f generating the exterior distortion
// s -> s + theta f(s):
//   f(s) = -phi(w s)/w,  w = F cos(eta) > 0,
// so f == -1/w on the far left, f == 0 to the right of
// support_right = (E+deltaE)/w < 0, and f^(k)(s) = -w^(k-1) phi^(k)(w s).
// F = 0 degenerates to f == 0 (phi(0) = 0 because the window lies below 0),
// leaving every distorted operator equal to its undistorted counterpart.
class DistortionField {
 public:
  DistortionField(const FieldConfig& field, const CutoffFunction& cutoff,
                  double alpha);

  double f(double s) const;
  double f_d1(double s) const;
  double f_d2(double s) const;
  double f_d3(double s) const;

  // Critical distortion strength theta0 = alpha * deltaE.
  double theta0() const { return theta0_; }
  double support_right() const { return support_right_; }
  const CutoffFunction& cutoff() const { return cutoff_; }
  // F cos(eta); zero exactly when F = 0.
  double w() const { return w_; }

 private:
  CutoffFunction cutoff_;
  double w_;
  double theta0_;
  double support_right_;
};

// Default alpha in theta0 = alpha * deltaE. The admissible range is
// (0, 1/2); 1/4 keeps |theta f'| <= 1/2 with a factor-two margin.
constexpr double kDefaultAlpha = 0.25;

DistortionField distortion_field(const FieldConfig& field,
                                 const CutoffFunction& cutoff,
                                 double alpha = kDefaultAlpha);

// Distortion parameter theta. The exercised mode is theta = i beta with
// 0 < beta < theta0; general complex theta is accepted.
struct DistortedParams {
  std::complex<double> theta;
  double beta;

  static DistortedParams from_beta(double b) {
    return DistortedParams{std::complex<double>(0.0, b), b};
  }
  static DistortedParams from_theta(std::complex<double> t) {
    return DistortedParams{t, t.imag()};
  }
};

// Longitudinal kinetic part after distortion,
//   T_{s,theta} = -d/ds (1+theta f')^{-2} g d/ds + R_theta,
//   R_theta = (g/2) theta f''' /(1+theta f')^3
//           - (5g/4) theta^2 f''^2 /(1+theta f')^4,
// assembled alone (no transverse Laplacian), complex symmetric.
ComplexOperator assemble_T_s_theta(const GuideGeometry& geom,
                                   const GridSpec& grid,
                                   const DistortionField& df,
                                   const DistortedParams& p);

// Stark potential along the distorted contour. Because supp f lies in the
// straight left arm, only the affine branch of W is ever composed with the
// distortion: W_theta = W + w theta f(s).
std::complex<double> distorted_stark(const GuideGeometry& geom,
                                     const FieldConfig& field,
                                     const DistortionField& df,
                                     const DistortedParams& p, double s,
                                     double u);

// Same, reusing a prebuilt frame (cheaper inside grid sweeps).
std::complex<double> distorted_stark(const FieldFrame& frame,
                                     const FieldConfig& field,
                                     const DistortionField& df,
                                     const DistortedParams& p, double s,
                                     double u);

// Full distorted Hamiltonian T_{s,theta} + T_u + V0 + W_theta as one
// complex-symmetric matrix. V0 enters undistorted: the curvature support
// and the distortion support are disjoint.
ComplexOperator assemble_H_theta(const GuideGeometry& geom,
                                 const FieldConfig& field,
                                 const GridSpec& grid,
                                 const DistortionField& df,
                                 const DistortedParams& p);

// Same operator for real theta, assembled in real arithmetic. For real
// theta the substitution s -> s + theta f(s) is a genuine change of
// variables and H_theta stays self-adjoint.
RealOperator assemble_H_theta_real(const GuideGeometry& geom,
                                   const FieldConfig& field,
                                   const GridSpec& grid,
                                   const DistortionField& df,
                                   double theta);

// Guidance ceiling F0 = alpha_prime * deltaE^2 * min{1, 1/d} for the field
// intensity; exceeding it only triggers a warning, not an error.
double max_field(double deltaE, double d, double alpha_prime = 0.1);

}  // namespace starkwg

#endif

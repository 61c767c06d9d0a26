#include "starkwg/distortion.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "starkwg/errors.hpp"
#include "starkwg/smoothstep.hpp"

namespace starkwg {

double CutoffFunction::phi(double t) const {
  return smooth_step_down((t - E) / deltaE).f;
}

double CutoffFunction::phi_d1(double t) const {
  return smooth_step_down((t - E) / deltaE).d1 / deltaE;
}

double CutoffFunction::phi_d2(double t) const {
  return smooth_step_down((t - E) / deltaE).d2 / (deltaE * deltaE);
}

double CutoffFunction::phi_d3(double t) const {
  return smooth_step_down((t - E) / deltaE).d3 / (deltaE * deltaE * deltaE);
}

double CutoffFunction::derivative_bound(int k) const {
  switch (k) {
    case 1:
      return kC1 / deltaE;
    case 2:
      return kC2 / (deltaE * deltaE);
    case 3:
      return kC3 / (deltaE * deltaE * deltaE);
    default:
      throw Error("CutoffFunction::derivative_bound: k must be 1, 2 or 3");
  }
}

CutoffFunction build_cutoff(double E, double deltaE) {
  if (!(E < 0.0))
    throw ConfigError("build_cutoff: reference energy must be negative, got " +
                      std::to_string(E));
  if (!(deltaE > 0.0))
    throw ConfigError("build_cutoff: window width must be positive, got " +
                      std::to_string(deltaE));
  // The canonical choice deltaE = |E|/2 sits exactly on the admissibility
  // edge, so the bound is enforced with a hair of slack.
  const double cap = 0.5 * std::min(1.0, -E);
  if (deltaE > cap * (1.0 + 1e-12))
    throw ConfigError(
        "build_cutoff: window width " + std::to_string(deltaE) +
        " exceeds min{1,|E|}/2 = " + std::to_string(cap) +
        " (transition band would cross the energy origin or grow too wide)");
  return CutoffFunction{E, deltaE};
}

std::pair<double, double> reference_energy(double E0, double lambda0) {
  if (!(E0 < lambda0))
    throw HypothesisError(
        "reference_energy: reference state does not lie below the transverse "
        "threshold (E0 = " +
        std::to_string(E0) + ", lambda0 = " + std::to_string(lambda0) + ")");
  const double E = (2.0 / 3.0) * (E0 - lambda0);
  return {E, -0.5 * E};
}

DistortionField::DistortionField(const FieldConfig& field,
                                 const CutoffFunction& cutoff, double alpha)
    : cutoff_(cutoff) {
  if (!(std::abs(field.eta) < 1.5707963267948966))
    throw HypothesisError(
        "distortion_field: field direction has no positive longitudinal "
        "component on the straight arm");
  if (field.F < 0.0)
    throw ConfigError("distortion_field: field intensity must be >= 0");
  if (!(alpha > 0.0 && alpha < 0.5))
    throw ConfigError(
        "distortion_field: distortion ratio alpha must lie in (0, 1/2), got " +
        std::to_string(alpha));
  w_ = field.F * std::cos(field.eta);
  theta0_ = alpha * cutoff_.deltaE;
  if (w_ > 0.0) {
    support_right_ = (cutoff_.E + cutoff_.deltaE) / w_;
    if (!(support_right_ < 0.0))
      throw Error("distortion_field: support reaches the curved region");
  } else {
    // F = 0: phi(0) = 0 because the window lies strictly below zero, so the
    // field degenerates to f == 0 with empty support.
    support_right_ = -std::numeric_limits<double>::infinity();
  }
}

double DistortionField::f(double s) const {
  if (w_ == 0.0) return 0.0;
  return -cutoff_.phi(w_ * s) / w_;
}

double DistortionField::f_d1(double s) const {
  if (w_ == 0.0) return 0.0;
  return -cutoff_.phi_d1(w_ * s);
}

double DistortionField::f_d2(double s) const {
  if (w_ == 0.0) return 0.0;
  return -w_ * cutoff_.phi_d2(w_ * s);
}

double DistortionField::f_d3(double s) const {
  if (w_ == 0.0) return 0.0;
  return -w_ * w_ * cutoff_.phi_d3(w_ * s);
}

DistortionField distortion_field(const FieldConfig& field,
                                 const CutoffFunction& cutoff, double alpha) {
  return DistortionField(field, cutoff, alpha);
}

namespace {

// min |1 + theta f'| over grid nodes and half-points; the divergence
// coefficient and the lower-order terms both blow up when this degenerates.
double coefficient_floor(const GridSpec& grid, const DistortionField& df,
                         std::complex<double> theta) {
  double lo = std::numeric_limits<double>::infinity();
  const double hs = grid.h_s();
  for (int i = 0; i <= 2 * grid.N_s + 1; ++i) {
    const double s = grid.L_minus + 0.5 * i * hs;
    lo = std::min(lo, std::abs(1.0 + theta * df.f_d1(s)));
  }
  return lo;
}

void require_safe_coefficient(const GridSpec& grid, const DistortionField& df,
                              const DistortedParams& p) {
  if (std::abs(p.theta) >= df.theta0() && std::abs(p.theta) > 0.0)
    throw HypothesisError(
        "distortion strength |theta| = " + std::to_string(std::abs(p.theta)) +
        " is not below theta0 = " + std::to_string(df.theta0()));
  if (coefficient_floor(grid, df, p.theta) < 0.5)
    throw HypothesisError(
        "distortion too strong: |1 + theta f'| drops below 1/2 on the grid");
}

}  // namespace

ComplexOperator assemble_T_s_theta(const GuideGeometry& geom,
                                   const GridSpec& grid,
                                   const DistortionField& df,
                                   const DistortedParams& p) {
  require_safe_coefficient(grid, df, p);
  const std::complex<double> th = p.theta;
  auto coeff = [&](double s, double u) {
    const std::complex<double> m = 1.0 + th * df.f_d1(s);
    return geom.metric(s, u) / (m * m);
  };
  auto diag = [&](double s, double u) {
    const std::complex<double> m = 1.0 + th * df.f_d1(s);
    const double g = geom.metric(s, u);
    const std::complex<double> m2 = m * m;
    return 0.5 * g * th * df.f_d3(s) / (m2 * m) -
           1.25 * g * (th * df.f_d2(s)) * (th * df.f_d2(s)) / (m2 * m2);
  };
  return assemble_divergence_form<std::complex<double>>(
      geom, grid, coeff, diag, MatrixStructure::complex_symmetric,
      /*include_transverse=*/false);
}

std::complex<double> distorted_stark(const FieldFrame& frame,
                                     const FieldConfig& field,
                                     const DistortionField& df,
                                     const DistortedParams& p, double s,
                                     double u) {
  if (df.support_right() >= 0.0)
    throw Error("distorted_stark: distortion support reaches the bend");
  // Only the affine left branch of W is ever composed with the shift, so
  // W_theta = W + w theta f pointwise (f vanishes wherever W is nonlinear).
  return frame.stark(field.F, s, u) + df.w() * p.theta * df.f(s);
}

std::complex<double> distorted_stark(const GuideGeometry& geom,
                                     const FieldConfig& field,
                                     const DistortionField& df,
                                     const DistortedParams& p, double s,
                                     double u) {
  const FieldFrame frame(geom, field.eta);
  return distorted_stark(frame, field, df, p, s, u);
}

ComplexOperator assemble_H_theta(const GuideGeometry& geom,
                                 const FieldConfig& field,
                                 const GridSpec& grid,
                                 const DistortionField& df,
                                 const DistortedParams& p) {
  HypothesisReport rep = validate_hypotheses(geom, field);
  if (!rep.all_ok()) throw HypothesisError("assemble_H_theta: " + rep.describe());
  if (field.F < 0.0)
    throw Error("assemble_H_theta: field intensity must be >= 0");
  if (std::abs(df.w() - field.F * std::cos(field.eta)) >
      1e-14 * (1.0 + df.w()))
    throw Error(
        "assemble_H_theta: distortion field was built for a different field "
        "configuration");
  require_safe_coefficient(grid, df, p);

  const FieldFrame frame(geom, field.eta);
  const std::complex<double> th = p.theta;
  auto coeff = [&](double s, double u) {
    const std::complex<double> m = 1.0 + th * df.f_d1(s);
    return geom.metric(s, u) / (m * m);
  };
  auto diag = [&](double s, double u) {
    // Undistorted part first, in the same order as the real assembly, so
    // theta = 0 reproduces it bit for bit.
    const double base =
        geom.effective_potential(s, u) + frame.stark(field.F, s, u);
    const std::complex<double> m = 1.0 + th * df.f_d1(s);
    const std::complex<double> m2 = m * m;
    const double g = geom.metric(s, u);
    const std::complex<double> r =
        0.5 * g * th * df.f_d3(s) / (m2 * m) -
        1.25 * g * (th * df.f_d2(s)) * (th * df.f_d2(s)) / (m2 * m2);
    return std::complex<double>(base) + r + df.w() * th * df.f(s);
  };
  return assemble_divergence_form<std::complex<double>>(
      geom, grid, coeff, diag, MatrixStructure::complex_symmetric);
}

RealOperator assemble_H_theta_real(const GuideGeometry& geom,
                                   const FieldConfig& field,
                                   const GridSpec& grid,
                                   const DistortionField& df, double theta) {
  HypothesisReport rep = validate_hypotheses(geom, field);
  if (!rep.all_ok())
    throw HypothesisError("assemble_H_theta_real: " + rep.describe());
  if (field.F < 0.0)
    throw Error("assemble_H_theta_real: field intensity must be >= 0");
  if (std::abs(df.w() - field.F * std::cos(field.eta)) >
      1e-14 * (1.0 + df.w()))
    throw Error(
        "assemble_H_theta_real: distortion field was built for a different "
        "field configuration");
  require_safe_coefficient(grid, df, DistortedParams::from_theta(theta));

  const FieldFrame frame(geom, field.eta);
  auto coeff = [&](double s, double u) {
    const double m = 1.0 + theta * df.f_d1(s);
    return geom.metric(s, u) / (m * m);
  };
  auto diag = [&](double s, double u) {
    const double base =
        geom.effective_potential(s, u) + frame.stark(field.F, s, u);
    const double m = 1.0 + theta * df.f_d1(s);
    const double m2 = m * m;
    const double g = geom.metric(s, u);
    const double r = 0.5 * g * theta * df.f_d3(s) / (m2 * m) -
                     1.25 * g * (theta * df.f_d2(s)) * (theta * df.f_d2(s)) /
                         (m2 * m2);
    return base + r + df.w() * theta * df.f(s);
  };
  return assemble_divergence_form<double>(geom, grid, coeff, diag,
                                          MatrixStructure::real_symmetric);
}

double max_field(double deltaE, double d, double alpha_prime) {
  if (!(deltaE > 0.0)) throw Error("max_field: window width must be positive");
  if (!(d > 0.0)) throw Error("max_field: guide width must be positive");
  return alpha_prime * deltaE * deltaE * std::min(1.0, 1.0 / d);
}

}  // namespace starkwg

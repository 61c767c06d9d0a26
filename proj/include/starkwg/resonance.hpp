#ifndef STARKWG_RESONANCE_HPP
#define STARKWG_RESONANCE_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "starkwg/distortion.hpp"
#include "starkwg/eigensolve.hpp"
#include "starkwg/geometry.hpp"
#include "starkwg/grid.hpp"

namespace starkwg {

struct BoundState {
  double E0 = 0.0;
  Eigen::VectorXcd phi0;
  int multiplicity = 0;
  double residual = 0.0;
  double lambda0_fd = 0.0;  // discrete transverse threshold on this grid

  double gap() const { return lambda0_fd - E0; }
};

// Lowest eigenpair(s) of the zero-field Hamiltonian, classified against the
// discrete transverse threshold. The continuum threshold (pi/d)^2 must not
// be used here: the finite-difference band starts below it, and a straight
// guide would spuriously pass an existence test against the continuum value.
BoundState bound_state_reference(const GuideGeometry& geom,
                                 const GridSpec& grid,
                                 const SolverOptions& opts);

// Resonance tracking asks for a few continuum neighbors on top of the
// tracked eigenvalue, so its solver default requests more pairs.
inline SolverOptions default_resonance_solver() {
  SolverOptions o;
  o.k = 6;
  return o;
}

struct ResonanceOptions {
  double alpha = kDefaultAlpha;  // theta0 = alpha * deltaE
  double alpha_prime = 0.1;      // field ceiling constant in F0
  double trust_fraction = 0.5;   // trust radius = fraction * (lambda0 - E0)
  // Accepted sign slack: Im Z <= tol_imag_abs + tol_imag_res_factor * residual.
  double tol_imag_abs = 1e-10;
  double tol_imag_res_factor = 10.0;
  // Plateau warning when plateau_score > factor * (lambda0 - E0).
  double plateau_threshold_factor = 1e-3;
  // Default beta grid: n_beta log-spaced points in
  // (beta_lo_frac * theta0, beta_hi_frac * theta0).
  int n_beta = 9;
  double beta_lo_frac = 0.05;
  double beta_hi_frac = 0.95;
  // Optional overrides for the cutoff window, NaN = derive from E0.
  double E_override = std::numeric_limits<double>::quiet_NaN();
  double deltaE_override = std::numeric_limits<double>::quiet_NaN();
  SolverOptions solver = default_resonance_solver();
};

struct ResonanceEstimate {
  std::complex<double> Z;
  double F = 0.0;
  double beta_used = 0.0;
  // |Z(beta_hi) - Z(beta_lo)| across the accepted window: how far the
  // estimate moves there. Selection minimizes this per unit beta, so a
  // coarse window is not penalized against a tight one.
  double plateau_score = 0.0;
  double residual = 0.0;
  std::uint64_t grid_fingerprint = 0;
  // Accepted window (the centered triple around beta_used) and the maximal
  // pairwise |Z_i - Z_j| over it.
  double beta_window_lo = 0.0;
  double beta_window_hi = 0.0;
  double spread = 0.0;
  double E0 = 0.0;
  double theta0 = 0.0;
  bool plateau_warning = false;
  bool over_field_ceiling = false;
};

// Log-spaced grid in (beta_lo_frac * theta0, beta_hi_frac * theta0).
std::vector<double> default_beta_grid(double theta0,
                                      const ResonanceOptions& ropts);

// Track the eigenvalue of H_theta continuing E0 across the beta grid and
// return it at the flattest (most theta-independent) point. Throws
// ResonanceNotFoundError when no beta yields an eigenvalue inside the trust
// radius with an admissible imaginary part.
ResonanceEstimate locate_resonance(const GuideGeometry& geom,
                                   const FieldConfig& field,
                                   const GridSpec& grid, double E0,
                                   const std::vector<double>& beta_grid,
                                   const ResonanceOptions& ropts);

// One locate_resonance per field value; not-found points become gaps in the
// returned list, never failures. `sink` (optional) receives each estimate
// as soon as it exists, for incremental persistence. Output is sorted by F.
std::vector<ResonanceEstimate> field_sweep(
    const GuideGeometry& geom, const GridSpec& grid, double eta, double E0,
    const std::vector<double>& F_list, const std::vector<double>& beta_grid,
    const ResonanceOptions& ropts,
    const std::function<void(const ResonanceEstimate&)>& sink = {});

struct WidthFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double r_squared = 0.0;
  double F_min = 0.0;
  double F_max = 0.0;
  int n_used = 0;
  int n_censored = 0;
  std::string status;  // "ok", "too_few_points" or "poor_fit"

  bool ok() const { return status == "ok"; }
};

// Least-squares line through (1/F, ln|Im Z|): widths follow
// |Im Z| = c1 exp(-c2/F). Widths under noise_floor_factor times the solver
// residual are censored. Never throws; rejection states are carried in
// `status`.
WidthFit fit_width_law(const std::vector<ResonanceEstimate>& records,
                       double noise_floor_factor = 100.0,
                       double r2_threshold = 0.99);

struct DecayEstimate {
  double a = 0.0;  // min of the two tail rates
  double a_left = 0.0, a_right = 0.0;
  double r2_left = 0.0, r2_right = 0.0;
  int n_left = 0, n_right = 0;
};

// Exponential decay rate of a bound state: fit of ln(integrated transverse
// density) against |s| on each tail, excluding the bend core
// [core_lo, core_hi], a wall margin, and the roundoff floor. Throws
// ConfigError when a tail has too few usable points (domain too small).
DecayEstimate decay_rate(const Eigen::VectorXcd& phi0, const GridSpec& grid,
                         double d, double core_lo, double core_hi);

// Core window derived from the curvature support: [-2, s0 + 2].
DecayEstimate decay_rate(const GuideGeometry& geom, const GridSpec& grid,
                         const Eigen::VectorXcd& phi0);

}  // namespace starkwg

#endif

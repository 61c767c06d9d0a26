#ifndef STARKWG_VALIDATION_HPP
#define STARKWG_VALIDATION_HPP

#include <vector>

#include "starkwg/distortion.hpp"
#include "starkwg/eigensolve.hpp"
#include "starkwg/geometry.hpp"
#include "starkwg/grid.hpp"
#include "starkwg/operator_matrix.hpp"

namespace starkwg {

// Ground mode of the tilted transverse operator -d^2/du^2 + F sin(eta) u on
// (0, d) with Dirichlet ends, discretized by the same three-point scheme as
// the full Hamiltonian so that Weyl states built from it carry no transverse
// discretization residual. chi1 is the interior-node eigenvector, unit
// Euclidean norm, sign fixed so its largest component is positive.
struct TiltedMode {
  double E1;
  Eigen::VectorXd chi1;
  double residual;
};

TiltedMode tilted_transverse_mode(double d, double F, double eta, int N_u);

// Outgoing longitudinal scattering state phi of -phi'' + F cos(eta) s phi =
// lambda phi, the combination that carries the asymptotic amplitude law
// |phi| ~ (lambda - F cos(eta) s)^{-1/4} on the classically allowed side.
// Values and first derivatives on s_grid (strictly increasing).
struct AiryState {
  Eigen::VectorXcd phi;
  Eigen::VectorXcd dphi;
};

AiryState airy_scattering_state(double F, double eta, double lambda,
                                const std::vector<double>& s_grid);

// Same solution propagated through the three-point recurrence
//   phi_{i+1} = (2 + h^2 (F cos(eta) s_i - lambda)) phi_i - phi_{i-1}
// on the interior s-nodes of the grid, so it solves the discrete equation
// exactly away from the two seed nodes near the classical turning point.
// Returned in s-major order, index i-1 for node i = 1..N_s.
Eigen::VectorXcd discrete_airy_state(double F, double eta, double lambda,
                                     const GridSpec& grid);

// Window placement for the Weyl sequence psi_n = chi1(u) phi(s) xi_n(s).
// The window is the fixed C^inf bump supported on (-1, 1), rescaled to
// half-width n^alpha_exp around a center drifting leftward with n:
//   linear: center -n          (xi((s + n) / n^alpha_exp))
//   power:  center -n^(1+alpha_exp)  (xi(s / n^alpha_exp + n))
// Half-width growth with 1/2 < alpha_exp < 1 makes the commutator residual
// decay like n^{-alpha_exp} while the centers keep the windows disjoint
// from the curved region.
enum class WeylWindowLaw { linear, power };

struct WeylParams {
  double E = 0.0;
  int n = 1;
  double alpha_exp = 0.6;
  WeylWindowLaw law = WeylWindowLaw::linear;

  double center() const;
  double half_width() const;
  // Window value at s.
  double xi(double s) const;
};

// Residual ||(H(F) - E) psi_n|| / ||psi_n|| of the normalized Weyl state
// psi_n = chi1_tilde(u) phi(s) xi_n(s) against the assembled discrete
// Hamiltonian. The transverse factor and the longitudinal phase both solve
// their discrete equations exactly, so the residual isolates the window
// commutator that the spectral-inclusion argument estimates.
double weyl_residual(const GuideGeometry& geom, const FieldConfig& field,
                     const GridSpec& grid, const WeylParams& wp);

// Real-theta consistency check. For real theta the distorted operator is
// unitarily equivalent to the undistorted one on the image interval
// [L_minus + theta f(L_minus), L_plus + theta f(L_plus)], so the low-lying
// eigenvalues of the two discretizations agree up to O(h^2). Comparing on
// the same interval instead would measure the wall displacement theta/w,
// which does not shrink under refinement.
struct EquivalenceReport {
  double theta = 0.0;
  std::vector<double> ev_distorted;
  std::vector<double> ev_reference;
  double max_deviation = 0.0;
};

EquivalenceReport unitary_equivalence_check(
    const GuideGeometry& geom, const FieldConfig& field, const GridSpec& grid,
    const DistortionField& df, double theta_real, int k = 3,
    const SolverOptions& opts = SolverOptions{});

}  // namespace starkwg

#endif

#ifndef STARKWG_EIGENSOLVE_HPP
#define STARKWG_EIGENSOLVE_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "starkwg/grid.hpp"
#include "starkwg/operator_matrix.hpp"

namespace starkwg {

struct SolverOptions {
  int k = 4;                // eigenpairs to return
  double tol = 1e-10;       // residual tolerance ||Mv - lambda v|| / ||v||
  int max_iter = 40;        // Arnoldi restarts
  int krylov_dim = 60;      // subspace size per restart
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;  // start-vector seed

  void validate() const;
};

struct EigenPair {
  std::complex<double> value;
  Eigen::VectorXcd vector;
  double residual = 0.0;
};

// k smallest eigenvalues of a real-symmetric operator, ascending, by
// shift-invert Arnoldi. Deterministic for a fixed seed. The shift defaults
// to a Gershgorin bound under the spectrum; when the low eigenvalues
// cluster far above that bound, shift-invert cannot separate them, so a
// caller holding a tighter lower bound on the spectrum should pass it as
// shift_hint (contract: shift_hint < smallest eigenvalue).
std::vector<EigenPair> lowest_symmetric(
    const RealOperator& M, const SolverOptions& opts,
    std::optional<double> shift_hint = std::nullopt);

// Number of eigenvalues of a real-symmetric operator strictly below t, via
// the inertia of an LDLT factorization of M - t I (Sylvester's law). Exact
// for any eigenvalue distribution, so it is the reliable way to count
// states under a threshold that a dense cluster sits on top of.
int count_below(const RealOperator& M, double t);

// k eigenvalues closest to sigma, by Arnoldi on the directly factorized
// (M - sigma I)^{-1}. Works for complex-symmetric and general matrices;
// results ordered by |lambda - sigma|.
std::vector<EigenPair> nearest_to_shift(const ComplexOperator& M,
                                        std::complex<double> sigma,
                                        const SolverOptions& opts);

std::vector<EigenPair> nearest_to_shift(const RealOperator& M,
                                        std::complex<double> sigma,
                                        const SolverOptions& opts);

// Direct sparse solve of (M - sigma I) x = rhs with iterative refinement;
// the relative residual is brought below 1e-10 or the call throws.
Eigen::VectorXcd solve_shifted(const ComplexOperator& M,
                               std::complex<double> sigma,
                               const Eigen::VectorXcd& rhs);

// One or two inverse-iteration steps at the pair's own eigenvalue, with a
// transpose Rayleigh quotient update (the natural quotient for
// complex-symmetric matrices). Returns the improved pair, or the input if
// refinement does not lower the residual.
EigenPair refine_eigenpair(const ComplexOperator& M, const EigenPair& pair,
                           int steps = 2);

// Deterministic start vector: raw mt19937_64 draws mapped into [-1, 1),
// avoiding std distributions whose output is implementation-defined.
Eigen::VectorXd deterministic_start_real(int n, std::uint64_t seed);
Eigen::VectorXcd deterministic_start_complex(int n, std::uint64_t seed);

}  // namespace starkwg

#endif

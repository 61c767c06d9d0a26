#ifndef STARKWG_GRID_HPP
#define STARKWG_GRID_HPP

#include <Eigen/Core>
#include <complex>

#include "starkwg/errors.hpp"

namespace starkwg {

// Tensor grid on the truncated strip [L_minus, L_plus] x (0, d). Only
// interior points are unknowns (plain Dirichlet truncation), so matrices have
// dimension exactly N_s * N_u. Index layout is u-fastest:
//   idx(i, j) = (i-1)*N_u + (j-1),  i = 1..N_s, j = 1..N_u,
// which keeps the transverse couplings inside a bandwidth-N_u block.
struct GridSpec {
  double L_minus = -20.0;
  double L_plus = 10.0;
  int N_s = 1200;
  int N_u = 24;

  double h_s() const { return (L_plus - L_minus) / (N_s + 1); }
  double h_u(double d) const { return d / (N_u + 1); }
  double s_at(int i) const { return L_minus + i * h_s(); }
  double u_at(int j, double d) const { return j * h_u(d); }
  int index(int i, int j) const { return (i - 1) * N_u + (j - 1); }
  int dimension() const { return N_s * N_u; }

  void validate(double s0) const {
    if (!(L_minus < 0.0)) throw ConfigError("grid: L_minus must be < 0");
    if (!(L_plus > s0))
      throw ConfigError("grid: L_plus must exceed the curvature support s0");
    if (N_s < 4 || N_u < 4) throw ConfigError("grid: N_s, N_u must be >= 4");
  }
};

// Wavefunction samples over the interior grid points, u-fastest ordering.
// Discrete L2 norm carries the cell weight h_s * h_u.
using Wavefunction = Eigen::VectorXcd;

inline double grid_norm(const Wavefunction& v, const GridSpec& grid,
                        double d) {
  return std::sqrt(grid.h_s() * grid.h_u(d)) * v.norm();
}

}  // namespace starkwg

#endif

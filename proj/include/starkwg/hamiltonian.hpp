#ifndef STARKWG_HAMILTONIAN_HPP
#define STARKWG_HAMILTONIAN_HPP

#include <Eigen/SparseCore>
#include <complex>
#include <vector>

#include "starkwg/geometry.hpp"
#include "starkwg/grid.hpp"
#include "starkwg/operator_matrix.hpp"

namespace starkwg {

// n-th transverse Dirichlet mode (n*pi/d)^2; n = 1 is the essential-spectrum
// threshold lambda0 of the zero-field guide.
double transverse_eigenvalue(double d, int n);

// Discrete counterpart of the same mode for the 3-point Laplacian with N_u
// interior points: (4/h^2) sin^2(n*pi*h/(2d)), h = d/(N_u+1). The FD value
// sits strictly below the continuum one, so existence tests against the
// threshold must use this value on the matching grid.
double transverse_eigenvalue_fd(double d, int n, int N_u);

// Divergence-form assembly shared by every Hamiltonian variant:
//   (T psi)_(i,j) = -[c_{i+1/2,j}(psi_{i+1,j}-psi_{i,j})
//                    - c_{i-1/2,j}(psi_{i,j}-psi_{i-1,j})]/h_s^2
//                   + (2 psi_{i,j} - psi_{i,j+1} - psi_{i,j-1})/h_u^2
//                   + diag(s_i, u_j) psi_{i,j}.
// The longitudinal coefficient is sampled at half-points, which makes the
// matrix equal to its transpose entry for entry, in exact arithmetic of the
// assembly. `coeff(s, u)` supplies c at half-points, `diag(s, u)` the local
// potential. With include_transverse = false the u-Laplacian terms are left
// out and only the longitudinal block plus the diagonal is assembled.
template <class Scalar, class Coeff, class Diag>
OperatorMatrix<Scalar> assemble_divergence_form(const GuideGeometry& geom,
                                                const GridSpec& grid,
                                                Coeff&& coeff, Diag&& diag,
                                                MatrixStructure tag,
                                                bool include_transverse = true) {
  grid.validate(geom.profile().s0);
  const int Ns = grid.N_s, Nu = grid.N_u;
  const double hs = grid.h_s(), hu = grid.h_u(geom.d());
  const double ihs2 = 1.0 / (hs * hs), ihu2 = 1.0 / (hu * hu);

  // c at the N_s+1 half-points per u-line, reused by both adjacent rows
  std::vector<Scalar> c(static_cast<size_t>(Ns + 1) * Nu);
  for (int i = 0; i <= Ns; ++i) {
    const double sh = grid.L_minus + (i + 0.5) * hs;
    for (int j = 1; j <= Nu; ++j)
      c[static_cast<size_t>(i) * Nu + (j - 1)] =
          coeff(sh, grid.u_at(j, geom.d()));
  }

  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(static_cast<size_t>(Ns) * Nu * 5);
  for (int i = 1; i <= Ns; ++i) {
    const double s = grid.s_at(i);
    for (int j = 1; j <= Nu; ++j) {
      const int row = grid.index(i, j);
      const Scalar cl = c[static_cast<size_t>(i - 1) * Nu + (j - 1)];
      const Scalar cr = c[static_cast<size_t>(i) * Nu + (j - 1)];
      Scalar dg = Scalar((cl + cr) * ihs2) +
                  Scalar(diag(s, grid.u_at(j, geom.d())));
      if (include_transverse) dg += Scalar(2.0 * ihu2);
      trip.emplace_back(row, row, dg);
      if (i < Ns) {
        trip.emplace_back(row, grid.index(i + 1, j), Scalar(-cr * ihs2));
        trip.emplace_back(grid.index(i + 1, j), row, Scalar(-cr * ihs2));
      }
      if (include_transverse && j < Nu) {
        trip.emplace_back(row, grid.index(i, j + 1), Scalar(-ihu2));
        trip.emplace_back(grid.index(i, j + 1), row, Scalar(-ihu2));
      }
    }
  }
  OperatorMatrix<Scalar> out;
  out.M.resize(grid.dimension(), grid.dimension());
  out.M.setFromTriplets(trip.begin(), trip.end());
  out.M.makeCompressed();
  out.structure = tag;
  return out;
}

// H0 = T_s + T_u: kinetic part only, metric g at half-points.
RealOperator assemble_H0(const GuideGeometry& geom, const GridSpec& grid);

// H = H0 + V0.
RealOperator assemble_H(const GuideGeometry& geom, const GridSpec& grid);

// H(F) = H + W(F); requires (h3) on top of (h1), (h2).
RealOperator assemble_HF(const GuideGeometry& geom, const FieldConfig& field,
                         const GridSpec& grid);

}  // namespace starkwg

#endif

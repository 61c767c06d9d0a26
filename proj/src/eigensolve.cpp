#include "starkwg/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

#include "starkwg/errors.hpp"

namespace starkwg {

void SolverOptions::validate() const {
  if (k < 1) throw ConfigError("solver: k must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("solver: tol must be positive");
  if (max_iter < 1) throw ConfigError("solver: max_iter must be >= 1");
  if (krylov_dim <= k)
    throw ConfigError("solver: krylov_dim must exceed k");
}

// Raw generator words mapped to [-1, 1). std::uniform_real_distribution is
// implementation-defined, which would break bitwise reproducibility of
// recorded results across standard libraries.
Eigen::VectorXd deterministic_start_real(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v[i] = 2.0 * u - 1.0;
  }
  return v;
}

Eigen::VectorXcd deterministic_start_complex(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
    const double b = 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
    v[i] = std::complex<double>(a, b);
  }
  return v;
}

namespace {

template <class Scalar>
using DenseMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using DenseVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Arnoldi factorization  Op V_m = V_{m+1} H_m  with twice-applied classical
// Gram-Schmidt. Returns the number of completed steps; stops early on an
// invariant subspace (happy breakdown).
template <class Scalar, class Op>
int arnoldi(const Op& apply_op, const DenseVec<Scalar>& v0, int m,
            DenseMat<Scalar>& V, DenseMat<Scalar>& H) {
  const int n = static_cast<int>(v0.size());
  V.resize(n, m + 1);
  H.setZero(m + 1, m);
  V.col(0) = v0 / v0.norm();
  DenseVec<Scalar> w(n);
  for (int j = 0; j < m; ++j) {
    apply_op(V.col(j), w);
    DenseVec<Scalar> h = V.leftCols(j + 1).adjoint() * w;
    w.noalias() -= V.leftCols(j + 1) * h;
    DenseVec<Scalar> h2 = V.leftCols(j + 1).adjoint() * w;
    w.noalias() -= V.leftCols(j + 1) * h2;
    h += h2;
    H.col(j).head(j + 1) = h;
    const double beta = w.norm();
    H(j + 1, j) = Scalar(beta);
    if (beta < 1e-13) return j + 1;
    V.col(j + 1) = w / beta;
  }
  return m;
}

std::string residual_note(double r) {
  char buf[48];
  std::snprintf(buf, sizeof buf, " (best residual %.3e)", r);
  return buf;
}

template <class Scalar>
double matrix_inf_norm(const Eigen::SparseMatrix<Scalar>& A) {
  std::vector<double> row_sum(A.rows(), 0.0);
  for (int c = 0; c < A.outerSize(); ++c)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(A, c); it;
         ++it)
      row_sum[it.row()] += std::abs(it.value());
  double m = 0.0;
  for (double r : row_sum) m = std::max(m, r);
  return m;
}

// Residuals of a normalized eigenpair cannot drop below roundoff on the
// matrix-vector product, so an absolute tolerance is floored at a modest
// multiple of ||M|| * eps; otherwise stiff operators (a 1-D Laplacian with
// h ~ 5e-4 has norm ~ 1e7) would be asked for the impossible.
double effective_tol(double tol, double inf_norm) {
  return std::max(tol, 100.0 * std::numeric_limits<double>::epsilon() *
                           inf_norm);
}

}  // namespace

std::vector<EigenPair> lowest_symmetric(const RealOperator& M,
                                        const SolverOptions& opts,
                                        std::optional<double> shift_hint) {
  opts.validate();
  if (M.structure != MatrixStructure::real_symmetric)
    throw Error("lowest_symmetric: operator is not tagged real-symmetric");
  const int n = M.dimension();
  if (opts.k > n)
    throw Error("lowest_symmetric: more eigenpairs requested than dimension");

  // Gershgorin lower bound puts the shift strictly under the spectrum, so
  // (M - sigma I) is positive definite and the inverse maps the low end of
  // the spectrum to the dominant end. The bound is often far below the
  // actual spectrum; a shift placed 10 units under eigenvalues spaced 1e-4
  // apart leaves the transformed spectrum unresolvable, so a caller-supplied
  // hint takes precedence.
  double sigma;
  if (shift_hint) {
    sigma = *shift_hint;
  } else {
    double lo = std::numeric_limits<double>::infinity();
    for (int c = 0; c < M.M.outerSize(); ++c) {
      double diag = 0.0, off = 0.0;
      for (Eigen::SparseMatrix<double>::InnerIterator it(M.M, c); it; ++it) {
        if (it.row() == c)
          diag = it.value();
        else
          off += std::abs(it.value());
      }
      lo = std::min(lo, diag - off);
    }
    sigma = lo - 0.01 * (1.0 + std::abs(lo));
  }

  Eigen::SparseMatrix<double> A = M.M;
  {
    Eigen::SparseMatrix<double> I(n, n);
    I.setIdentity();
    A -= sigma * I;
  }
  A.makeCompressed();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("lowest_symmetric: factorization of the shifted matrix "
                      "failed");

  const double tol = effective_tol(opts.tol, matrix_inf_norm(M.M));

  auto op = [&](const Eigen::Ref<const Eigen::VectorXd>& x,
                Eigen::VectorXd& y) { y = ldlt.solve(x); };

  const int m = std::min(opts.krylov_dim, n);
  Eigen::VectorXd v0 = deterministic_start_real(n, opts.seed);
  DenseMat<double> V, H;

  std::vector<EigenPair> out;
  double best = std::numeric_limits<double>::infinity();
  int stagnant = 0;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const int steps = arnoldi<double>(op, v0, m, V, H);
    DenseMat<double> Hm = H.topLeftCorner(steps, steps);
    Hm = 0.5 * (Hm + Hm.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<DenseMat<double>> es(Hm);
    if (es.info() != Eigen::Success)
      throw SolverError("lowest_symmetric: dense Hessenberg solve failed");

    const int kk = std::min(opts.k, steps);
    // Largest nu of the inverse operator = smallest lambda of M.
    out.clear();
    double worst = 0.0;
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < kk; ++i) {
      const int idx = steps - 1 - i;
      const double nu = es.eigenvalues()[idx];
      Eigen::VectorXd y = V.leftCols(steps) * es.eigenvectors().col(idx);
      y /= y.norm();
      const double lambda =
          nu != 0.0 ? sigma + 1.0 / nu
                    : std::numeric_limits<double>::infinity();
      const double res = (M.M * y - lambda * y).norm();
      EigenPair p;
      p.value = lambda;
      p.vector = y.cast<std::complex<double>>();
      p.residual = res;
      out.push_back(std::move(p));
      worst = std::max(worst, res);
      next += y;
    }
    if (kk == opts.k && worst <= tol) break;
    if (worst < 0.9 * best)
      stagnant = 0;
    else
      ++stagnant;
    best = std::min(best, worst);

    // Single-vector restarts resolve clusters slowly; once progress stalls,
    // polish each pair by inverse iteration at its own Ritz value.
    if ((stagnant >= 3 || iter == opts.max_iter - 1) && kk == opts.k) {
      bool all_ok = true;
      for (auto& p : out) {
        if (p.residual <= tol) continue;
        Eigen::SparseMatrix<double> B = M.M;
        Eigen::SparseMatrix<double> I(n, n);
        I.setIdentity();
        B -= p.value.real() * I;
        B.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(B);
        if (lu.info() == Eigen::Success) {
          for (int it2 = 0; it2 < 2 && p.residual > tol; ++it2) {
            Eigen::VectorXd y = p.vector.real();
            Eigen::VectorXd z = lu.solve(y);
            z /= z.norm();
            const double lam = z.dot(M.M * z);
            const double res = (M.M * z - lam * z).norm();
            if (res < p.residual) {
              p.value = lam;
              p.vector = z.cast<std::complex<double>>();
              p.residual = res;
            } else {
              break;
            }
          }
        }
        all_ok = all_ok && p.residual <= tol;
      }
      if (all_ok) break;
      if (iter == opts.max_iter - 1) {
        double b = 0.0;
        for (auto& p : out) b = std::max(b, p.residual);
        throw SolverError(
            "lowest_symmetric: no convergence within max_iter" +
                residual_note(b),
            b);
      }
    }
    if (steps < m && kk == opts.k) {
      // Invariant subspace smaller than requested accuracy allows; accept
      // what the exact subspace gives.
      break;
    }
    v0 = next;
  }

  std::sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) {
    return a.value.real() < b.value.real();
  });
  double worst = 0.0;
  for (auto& p : out) worst = std::max(worst, p.residual);
  if (worst > tol)
    throw SolverError(
        "lowest_symmetric: no convergence within max_iter" +
            residual_note(worst),
        worst);
  return out;
}

int count_below(const RealOperator& M, double t) {
  if (M.structure != MatrixStructure::real_symmetric)
    throw Error("count_below: operator is not tagged real-symmetric");
  const int n = M.dimension();
  double cursor = t;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Eigen::SparseMatrix<double> A = M.M;
    {
      Eigen::SparseMatrix<double> I(n, n);
      I.setIdentity();
      A -= cursor * I;
    }
    A.makeCompressed();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() == Eigen::Success) {
      const Eigen::VectorXd d = ldlt.vectorD();
      const double scale = d.cwiseAbs().maxCoeff();
      if ((d.cwiseAbs().array() > 1e-14 * scale).all()) {
        int below = 0;
        for (int i = 0; i < n; ++i)
          if (d[i] < 0.0) ++below;
        return below;
      }
    }
    // A pivot collapsed: t sits on (or numerically at) an eigenvalue, so
    // nudge the slicing point down and refactor.
    cursor -= 1e-10 * (1.0 + std::abs(cursor));
  }
  throw SolverError(
      "count_below: LDLT inertia could not be stabilized near the requested "
      "threshold");
}

namespace {

Eigen::SparseMatrix<std::complex<double>> shifted_matrix(
    const ComplexOperator& M, std::complex<double> sigma) {
  const int n = M.dimension();
  Eigen::SparseMatrix<std::complex<double>> A = M.M;
  Eigen::SparseMatrix<std::complex<double>> I(n, n);
  I.setIdentity();
  A -= sigma * I;
  A.makeCompressed();
  return A;
}

}  // namespace

std::vector<EigenPair> nearest_to_shift(const ComplexOperator& M,
                                        std::complex<double> sigma,
                                        const SolverOptions& opts) {
  opts.validate();
  const int n = M.dimension();
  if (opts.k > n)
    throw Error("nearest_to_shift: more eigenpairs requested than dimension");

  Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>> lu(
      shifted_matrix(M, sigma));
  if (lu.info() != Eigen::Success)
    throw SolverError(
        "nearest_to_shift: factorization of (M - sigma I) failed; the shift "
        "may coincide with an eigenvalue, adjust sigma");

  const double tol = effective_tol(opts.tol, matrix_inf_norm(M.M));

  auto op = [&](const Eigen::Ref<const Eigen::VectorXcd>& x,
                Eigen::VectorXcd& y) { y = lu.solve(x); };

  const int m = std::min(opts.krylov_dim, n);
  Eigen::VectorXcd v0 = deterministic_start_complex(n, opts.seed);
  DenseMat<std::complex<double>> V, H;

  std::vector<EigenPair> out;
  double best = std::numeric_limits<double>::infinity();
  int stagnant = 0;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const int steps = arnoldi<std::complex<double>>(op, v0, m, V, H);
    DenseMat<std::complex<double>> Hm = H.topLeftCorner(steps, steps);
    Eigen::ComplexEigenSolver<DenseMat<std::complex<double>>> es(Hm);
    if (es.info() != Eigen::Success)
      throw SolverError("nearest_to_shift: dense Hessenberg solve failed");

    // Rank Ritz values of the inverse by magnitude: large |nu| means close
    // to the shift.
    std::vector<int> order(steps);
    for (int i = 0; i < steps; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double ma = std::abs(es.eigenvalues()[a]);
      const double mb = std::abs(es.eigenvalues()[b]);
      if (ma != mb) return ma > mb;
      return a < b;
    });

    const int kk = std::min(opts.k, steps);
    out.clear();
    double worst = 0.0;
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < kk; ++i) {
      const std::complex<double> nu = es.eigenvalues()[order[i]];
      Eigen::VectorXcd y = V.leftCols(steps) * es.eigenvectors().col(order[i]);
      y /= y.norm();
      const std::complex<double> lambda =
          nu != std::complex<double>(0.0) ? sigma + 1.0 / nu : sigma;
      const double res = (M.M * y - lambda * y).norm();
      EigenPair p;
      p.value = lambda;
      p.vector = std::move(y);
      p.residual = res;
      out.push_back(std::move(p));
      worst = std::max(worst, res);
      next += out.back().vector;
    }
    if (kk == opts.k && worst <= tol) break;
    if (worst < 0.9 * best)
      stagnant = 0;
    else
      ++stagnant;
    best = std::min(best, worst);

    if ((stagnant >= 3 || iter == opts.max_iter - 1) && kk == opts.k) {
      bool all_ok = true;
      for (auto& p : out) {
        if (p.residual > tol) {
          EigenPair r = refine_eigenpair(M, p, 2);
          if (r.residual < p.residual) p = std::move(r);
        }
        all_ok = all_ok && p.residual <= tol;
      }
      if (all_ok) break;
      if (iter == opts.max_iter - 1) {
        double b = 0.0;
        for (auto& p : out) b = std::max(b, p.residual);
        throw SolverError(
            "nearest_to_shift: no convergence within max_iter" +
                residual_note(b),
            b);
      }
    }
    if (steps < m && kk == opts.k) break;
    v0 = next;
  }

  std::sort(out.begin(), out.end(), [&](const EigenPair& a, const EigenPair& b) {
    return std::abs(a.value - sigma) < std::abs(b.value - sigma);
  });
  double worst = 0.0;
  for (auto& p : out) worst = std::max(worst, p.residual);
  if (worst > tol)
    throw SolverError(
        "nearest_to_shift: no convergence within max_iter" +
            residual_note(worst),
        worst);
  return out;
}

std::vector<EigenPair> nearest_to_shift(const RealOperator& M,
                                        std::complex<double> sigma,
                                        const SolverOptions& opts) {
  return nearest_to_shift(to_complex(M), sigma, opts);
}

Eigen::VectorXcd solve_shifted(const ComplexOperator& M,
                               std::complex<double> sigma,
                               const Eigen::VectorXcd& rhs) {
  if (rhs.size() != M.dimension())
    throw Error("solve_shifted: rhs dimension mismatch");
  Eigen::SparseMatrix<std::complex<double>> A = shifted_matrix(M, sigma);
  Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>> lu(A);
  if (lu.info() != Eigen::Success)
    throw SolverError("solve_shifted: factorization failed (singular shift?)");
  Eigen::VectorXcd x = lu.solve(rhs);
  const double scale = rhs.norm();
  if (scale == 0.0) return x;
  // One or two rounds of iterative refinement push the direct solve to the
  // contract residual.
  for (int it = 0; it < 2; ++it) {
    Eigen::VectorXcd r = rhs - A * x;
    if (r.norm() <= 1e-10 * scale) return x;
    x += lu.solve(r).eval();
  }
  if ((rhs - A * x).norm() > 1e-10 * scale)
    throw SolverError("solve_shifted: refinement failed to reach the residual "
                      "contract");
  return x;
}

EigenPair refine_eigenpair(const ComplexOperator& M, const EigenPair& pair,
                           int steps) {
  EigenPair bestp = pair;
  for (int it = 0; it < steps; ++it) {
    Eigen::SparseLU<Eigen::SparseMatrix<std::complex<double>>> lu(
        shifted_matrix(M, bestp.value));
    if (lu.info() != Eigen::Success) break;  // sitting on the eigenvalue
    Eigen::VectorXcd y = lu.solve(bestp.vector);
    const double ny = y.norm();
    if (!(ny > 0.0) || !std::isfinite(ny)) break;
    y /= ny;
    // Transpose quotient: for complex-symmetric M the left eigenvector is
    // the plain transpose of the right one, so y^T M y / y^T y converges
    // quadratically.
    const std::complex<double> denom = (y.transpose() * y).value();
    if (std::abs(denom) < 1e-12) break;  // near-self-orthogonal, quotient untrustworthy
    const std::complex<double> lambda =
        (y.transpose() * (M.M * y)).value() / denom;
    const double res = (M.M * y - lambda * y).norm();
    if (res < bestp.residual) {
      bestp.value = lambda;
      bestp.vector = std::move(y);
      bestp.residual = res;
    } else {
      break;
    }
  }
  return bestp;
}

}  // namespace starkwg

#ifndef STARKWG_OPERATOR_MATRIX_HPP
#define STARKWG_OPERATOR_MATRIX_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <complex>
#include <string>

#include "starkwg/errors.hpp"

namespace starkwg {

enum class MatrixStructure { real_symmetric, complex_symmetric, general };

// Sparse operator over the tensor grid with a structure tag. The tag is a
// promise made by the assembly: real_symmetric entries are real and M = M^T
// exactly; complex_symmetric means M = M^T exactly with no conjugation.
template <class Scalar>
struct OperatorMatrix {
  Eigen::SparseMatrix<Scalar> M;
  MatrixStructure structure = MatrixStructure::general;

  Eigen::Index dimension() const { return M.rows(); }
};

using RealOperator = OperatorMatrix<double>;
using ComplexOperator = OperatorMatrix<std::complex<double>>;

namespace detail {
inline void check_apply_dim(Eigen::Index n, Eigen::Index dim) {
  if (n != dim)
    throw Error("apply: vector length " + std::to_string(n) +
                " does not match operator dimension " + std::to_string(dim));
}
}  // namespace detail

// Sparse matrix-vector products with a dimension guard.
inline Eigen::VectorXd apply(const RealOperator& op, const Eigen::VectorXd& v) {
  detail::check_apply_dim(v.size(), op.dimension());
  return op.M * v;
}

inline Eigen::VectorXcd apply(const RealOperator& op,
                              const Eigen::VectorXcd& v) {
  detail::check_apply_dim(v.size(), op.dimension());
  Eigen::VectorXd re = op.M * v.real().matrix().eval();
  Eigen::VectorXd im = op.M * v.imag().matrix().eval();
  return re + std::complex<double>(0.0, 1.0) * im;
}

inline Eigen::VectorXcd apply(const ComplexOperator& op,
                              const Eigen::VectorXcd& v) {
  detail::check_apply_dim(v.size(), op.dimension());
  return op.M * v;
}

// Widen a real assembly to complex storage (used when comparing a real-theta
// distorted operator against the undistorted one).
inline ComplexOperator to_complex(const RealOperator& op) {
  ComplexOperator out;
  out.M = op.M.cast<std::complex<double>>();
  out.structure = op.structure == MatrixStructure::real_symmetric
                      ? MatrixStructure::complex_symmetric
                      : MatrixStructure::general;
  return out;
}

}  // namespace starkwg

#endif

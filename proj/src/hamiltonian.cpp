#include "starkwg/hamiltonian.hpp"

#include <cmath>

namespace starkwg {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double transverse_eigenvalue(double d, int n) {
  if (n < 1) throw Error("transverse_eigenvalue: mode index must be >= 1");
  if (!(d > 0.0)) throw Error("transverse_eigenvalue: width must be positive");
  const double k = n * kPi / d;
  return k * k;
}

double transverse_eigenvalue_fd(double d, int n, int N_u) {
  if (n < 1 || n > N_u)
    throw Error("transverse_eigenvalue_fd: need 1 <= n <= N_u");
  const double h = d / (N_u + 1);
  const double s = std::sin(n * kPi * h / (2.0 * d));
  return 4.0 / (h * h) * s * s;
}

RealOperator assemble_H0(const GuideGeometry& geom, const GridSpec& grid) {
  HypothesisReport rep = validate_hypotheses(geom, FieldConfig{0.0, 0.0});
  if (!rep.h1_ok || !rep.h2_ok)
    throw HypothesisError("assemble_H0: " + rep.describe());
  return assemble_divergence_form<double>(
      geom, grid, [&](double s, double u) { return geom.metric(s, u); },
      [](double, double) { return 0.0; }, MatrixStructure::real_symmetric);
}

RealOperator assemble_H(const GuideGeometry& geom, const GridSpec& grid) {
  HypothesisReport rep = validate_hypotheses(geom, FieldConfig{0.0, 0.0});
  if (!rep.h1_ok || !rep.h2_ok)
    throw HypothesisError("assemble_H: " + rep.describe());
  return assemble_divergence_form<double>(
      geom, grid, [&](double s, double u) { return geom.metric(s, u); },
      [&](double s, double u) { return geom.effective_potential(s, u); },
      MatrixStructure::real_symmetric);
}

RealOperator assemble_HF(const GuideGeometry& geom, const FieldConfig& field,
                         const GridSpec& grid) {
  HypothesisReport rep = validate_hypotheses(geom, field);
  if (!rep.all_ok()) throw HypothesisError("assemble_HF: " + rep.describe());
  if (field.F < 0.0) throw Error("assemble_HF: field intensity must be >= 0");
  const FieldFrame frame(geom, field.eta);
  return assemble_divergence_form<double>(
      geom, grid, [&](double s, double u) { return geom.metric(s, u); },
      [&](double s, double u) {
        return geom.effective_potential(s, u) + frame.stark(field.F, s, u);
      },
      MatrixStructure::real_symmetric);
}

}  // namespace starkwg

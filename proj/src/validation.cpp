#include "starkwg/validation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "starkwg/errors.hpp"
#include "starkwg/hamiltonian.hpp"
#include "starkwg/smoothstep.hpp"

namespace starkwg {

TiltedMode tilted_transverse_mode(double d, double F, double eta, int N_u) {
  if (!(d > 0.0))
    throw ConfigError("tilted_transverse_mode: guide width must be positive");
  if (N_u < 3)
    throw ConfigError(
        "tilted_transverse_mode: need at least 3 interior nodes");

  const double h = d / (N_u + 1);
  const double ih2 = 1.0 / (h * h);
  const double tilt = F * std::sin(eta);

  RealOperator op;
  op.structure = MatrixStructure::real_symmetric;
  op.M.resize(N_u, N_u);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(3 * static_cast<std::size_t>(N_u));
  for (int j = 1; j <= N_u; ++j) {
    const int row = j - 1;
    trips.emplace_back(row, row, 2.0 * ih2 + tilt * j * h);
    if (j < N_u) {
      trips.emplace_back(row, row + 1, -ih2);
      trips.emplace_back(row + 1, row, -ih2);
    }
  }
  op.M.setFromTriplets(trips.begin(), trips.end());
  op.M.makeCompressed();

  SolverOptions so;
  so.k = 1;
  std::vector<EigenPair> pairs = lowest_symmetric(op, so);

  TiltedMode tm;
  tm.E1 = pairs[0].value.real();
  tm.chi1 = pairs[0].vector.real();
  tm.residual = pairs[0].residual;
  Eigen::Index imax = 0;
  tm.chi1.cwiseAbs().maxCoeff(&imax);
  if (tm.chi1[imax] < 0.0) tm.chi1 = -tm.chi1;
  tm.chi1.normalize();
  return tm;
}

namespace {

struct AiryPoint {
  double Ai, Aip, Bi, Bip;
};

// Maclaurin evaluation of both Airy functions. The series are entire, so at
// the fixed seed point tau = 4 this gives both branches to near machine
// precision (the recessive one loses ~5 digits to cancellation, which the
// e^{-2 zeta} smallness of its admixture more than absorbs).
AiryPoint airy_reference(double x) {
  const double c1 = 0.35502805388781724;  // Ai(0)
  const double c2 = 0.25881940379280680;  // -Ai'(0)
  const double r3 = 1.7320508075688772;
  if (x == 0.0) return {c1, -c2, r3 * c1, r3 * c2};

  double f = 1.0, fp = 0.0, g = x, gp = 1.0;
  double Tf = 1.0, Tg = x;
  const double x3 = x * x * x;
  for (int k = 0; k < 400; ++k) {
    Tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
    Tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
    f += Tf;
    fp += Tf * (3.0 * k + 3.0) / x;
    g += Tg;
    gp += Tg * (3.0 * k + 4.0) / x;
    if (std::abs(Tf) + std::abs(Tg) <
        1e-18 * (std::abs(f) + std::abs(g)))
      break;
  }
  return {c1 * f - c2 * g, c1 * fp - c2 * gp, r3 * (c1 * f + c2 * g),
          r3 * (c1 * fp + c2 * gp)};
}

struct Osc {
  std::complex<double> y, p;
};

// One classical RK4 step for y'' = (w s - lambda) y.
void rk4_step(Osc& st, double s, double h, double w, double lambda) {
  auto acc = [&](double ss, std::complex<double> yy) {
    return (w * ss - lambda) * yy;
  };
  const std::complex<double> k1y = st.p;
  const std::complex<double> k1p = acc(s, st.y);
  const std::complex<double> k2y = st.p + 0.5 * h * k1p;
  const std::complex<double> k2p = acc(s + 0.5 * h, st.y + 0.5 * h * k1y);
  const std::complex<double> k3y = st.p + 0.5 * h * k2p;
  const std::complex<double> k3p = acc(s + 0.5 * h, st.y + 0.5 * h * k2y);
  const std::complex<double> k4y = st.p + h * k3p;
  const std::complex<double> k4p = acc(s + h, st.y + h * k3y);
  st.y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
  st.p += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
}

// Integrate from one abscissa to another with a step chosen so that the
// accumulated phase error over an O(10) length stays below ~1e-8.
void propagate(Osc& st, double from, double to, double w, double lambda) {
  const double len = to - from;
  if (len == 0.0) return;
  const double qmax = std::max(
      {std::abs(w * from - lambda), std::abs(w * to - lambda), 1.0});
  const double htarget = std::min(0.02, 0.012 / std::pow(qmax, 0.625));
  const int n = static_cast<int>(std::ceil(std::abs(len) / htarget));
  const double h = len / n;
  for (int i = 0; i < n; ++i) rk4_step(st, from + i * h, h, w, lambda);
}

// Outgoing seed Bi - i Ai at tau = kSeedTau, where the Maclaurin values are
// still well conditioned and the recessive branch is suppressed by e^{-2
// zeta} ~ 2e-5, enough to pin its coefficient despite roundoff.
constexpr double kSeedTau = 4.0;

Osc outgoing_seed(double w, double lambda, double* s_seed) {
  const double wc = std::cbrt(w);
  *s_seed = lambda / w + kSeedTau / wc;
  const AiryPoint ap = airy_reference(kSeedTau);
  Osc st;
  st.y = std::complex<double>(ap.Bi, -ap.Ai);
  st.p = wc * std::complex<double>(ap.Bip, -ap.Aip);
  return st;
}

}  // namespace

AiryState airy_scattering_state(double F, double eta, double lambda,
                                const std::vector<double>& s_grid) {
  const double w = F * std::cos(eta);
  if (!(w > 0.0))
    throw HypothesisError(
        "airy_scattering_state: requires F cos(eta) > 0; the field must pull "
        "along the straight arm");
  const int n = static_cast<int>(s_grid.size());
  if (n < 2)
    throw Error("airy_scattering_state: need at least two grid points");
  for (int i = 1; i < n; ++i)
    if (!(s_grid[i] > s_grid[i - 1]))
      throw Error("airy_scattering_state: grid must be strictly increasing");

  double s_seed = 0.0;
  const Osc seed = outgoing_seed(w, lambda, &s_seed);

  // last index at or left of the seed
  int iL = -1;
  while (iL + 1 < n && s_grid[iL + 1] <= s_seed) ++iL;

  AiryState out;
  out.phi.resize(n);
  out.dphi.resize(n);

  Osc st = seed;
  double cur = s_seed;
  for (int i = iL; i >= 0; --i) {
    propagate(st, cur, s_grid[i], w, lambda);
    cur = s_grid[i];
    out.phi[i] = st.y;
    out.dphi[i] = st.p;
  }
  st = seed;
  cur = s_seed;
  for (int i = iL + 1; i < n; ++i) {
    propagate(st, cur, s_grid[i], w, lambda);
    cur = s_grid[i];
    out.phi[i] = st.y;
    out.dphi[i] = st.p;
  }
  return out;
}

Eigen::VectorXcd discrete_airy_state(double F, double eta, double lambda,
                                     const GridSpec& grid) {
  const double w = F * std::cos(eta);
  if (!(w > 0.0))
    throw HypothesisError(
        "discrete_airy_state: requires F cos(eta) > 0; the field must pull "
        "along the straight arm");
  const int N = grid.N_s;
  if (N < 4) throw ConfigError("discrete_airy_state: grid too coarse");
  const double h = grid.h_s();

  double s_seed = 0.0;
  const Osc seed = outgoing_seed(w, lambda, &s_seed);

  // Two adjacent seed nodes near the continuum seed point; the recurrence
  // fans out from them in both directions.
  int ia = static_cast<int>(std::floor((s_seed - grid.L_minus) / h));
  ia = std::max(1, std::min(ia, N - 1));
  const int ib = ia + 1;

  Eigen::VectorXcd phi(N);
  {
    Osc st = seed;
    propagate(st, s_seed, grid.s_at(ia), w, lambda);
    phi[ia - 1] = st.y;
  }
  {
    Osc st = seed;
    propagate(st, s_seed, grid.s_at(ib), w, lambda);
    phi[ib - 1] = st.y;
  }
  const double h2 = h * h;
  for (int i = ia - 1; i >= 1; --i) {
    const double q = w * grid.s_at(i + 1) - lambda;
    phi[i - 1] = (2.0 + h2 * q) * phi[i] - phi[i + 1];
  }
  for (int i = ib + 1; i <= N; ++i) {
    const double q = w * grid.s_at(i - 1) - lambda;
    phi[i - 1] = (2.0 + h2 * q) * phi[i - 2] - phi[i - 3];
  }
  return phi;
}

double WeylParams::center() const {
  return law == WeylWindowLaw::linear
             ? -static_cast<double>(n)
             : -std::pow(static_cast<double>(n), 1.0 + alpha_exp);
}

double WeylParams::half_width() const {
  return std::pow(static_cast<double>(n), alpha_exp);
}

double WeylParams::xi(double s) const {
  return smooth_window((s - center()) / half_width()).f;
}

double weyl_residual(const GuideGeometry& geom, const FieldConfig& field,
                     const GridSpec& grid, const WeylParams& wp) {
  if (wp.n < 1) throw ConfigError("weyl_residual: window index must be >= 1");
  if (!(wp.alpha_exp > 0.5 && wp.alpha_exp < 1.0))
    throw ConfigError(
        "weyl_residual: window growth exponent must lie in (1/2, 1)");
  const double w = field.F * std::cos(field.eta);
  if (!(w > 0.0))
    throw HypothesisError(
        "weyl_residual: field must have a positive longitudinal component");

  const double c = wp.center();
  const double hw = wp.half_width();
  const double h = grid.h_s();
  const double right_limit = std::min(0.0, grid.L_plus);
  if (c - hw < grid.L_minus + 2.0 * h || c + hw > right_limit - 2.0 * h)
    throw ConfigError(
        "weyl_residual: window [" + std::to_string(c - hw) + ", " +
        std::to_string(c + hw) +
        "] exits the straight truncated region; enlarge the domain");

  const TiltedMode tm =
      tilted_transverse_mode(geom.d(), field.F, field.eta, grid.N_u);
  const double lambda = wp.E - tm.E1;
  const Eigen::VectorXcd phi =
      discrete_airy_state(field.F, field.eta, lambda, grid);

  Eigen::VectorXcd psi(grid.dimension());
  for (int i = 1; i <= grid.N_s; ++i) {
    const std::complex<double> fs = phi[i - 1] * wp.xi(grid.s_at(i));
    for (int j = 1; j <= grid.N_u; ++j)
      psi[grid.index(i, j)] = fs * tm.chi1[j - 1];
  }
  const double nrm = psi.norm();
  if (!(nrm > 0.0))
    throw Error("weyl_residual: window does not overlap the grid");

  const RealOperator H = assemble_HF(geom, field, grid);
  // qualified: ADL would otherwise drag std::apply into the overload set
  // through the std::complex template argument
  Eigen::VectorXcd r = starkwg::apply(H, psi);
  r -= wp.E * psi;
  return r.norm() / nrm;
}

EquivalenceReport unitary_equivalence_check(
    const GuideGeometry& geom, const FieldConfig& field, const GridSpec& grid,
    const DistortionField& df, double theta_real, int k,
    const SolverOptions& opts) {
  if (k < 1)
    throw ConfigError("unitary_equivalence_check: need at least one pair");
  SolverOptions so = opts;
  so.k = k;

  const RealOperator A =
      assemble_H_theta_real(geom, field, grid, df, theta_real);

  // The change of variables s -> s + theta f(s) maps the truncated interval
  // onto a slightly longer one; the reference operator lives there.
  GridSpec image = grid;
  image.L_minus = grid.L_minus + theta_real * df.f(grid.L_minus);
  image.L_plus = grid.L_plus + theta_real * df.f(grid.L_plus);
  const RealOperator B = assemble_HF(geom, field, image);

  const std::vector<EigenPair> pa = lowest_symmetric(A, so);
  const std::vector<EigenPair> pb = lowest_symmetric(B, so);

  EquivalenceReport rep;
  rep.theta = theta_real;
  for (int i = 0; i < k; ++i) {
    rep.ev_distorted.push_back(pa[i].value.real());
    rep.ev_reference.push_back(pb[i].value.real());
    rep.max_deviation = std::max(
        rep.max_deviation, std::abs(rep.ev_distorted[i] - rep.ev_reference[i]));
  }
  return rep;
}

}  // namespace starkwg

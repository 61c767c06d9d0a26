#include "starkwg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace starkwg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// One Simpson panel of width h for f, with endpoints already evaluated.
template <class F>
double simpson_panel(F&& f, double a, double h, double fa, double fb) {
  return h / 6.0 * (fa + 4.0 * f(a + 0.5 * h) + fb);
}

}  // namespace

CurvatureProfile make_bump_profile(double gamma_max, double s0,
                                   int smoothness_order) {
  if (!(s0 > 0.0)) throw Error("make_bump_profile: s0 must be positive");
  if (gamma_max < 0.0)
    throw Error("make_bump_profile: gamma_max must be nonnegative");
  if (smoothness_order < 2)
    throw Error("make_bump_profile: smoothness_order must be >= 2");
  // The mollifier bump is C-infinity, so any requested order is satisfied.
  return CurvatureProfile{gamma_max, s0, smoothness_order};
}

double tangent_angle(const CurvatureProfile& profile, double s,
                     int quad_points) {
  if (s <= 0.0) return 0.0;
  const double upper = std::min(s, profile.s0);
  const int n = std::max(1, static_cast<int>(std::ceil(
                                quad_points * upper / profile.s0)));
  const double h = upper / n;
  auto g = [&](double t) { return profile.gamma(t); };
  double acc = 0.0;
  double fa = g(0.0);
  for (int k = 0; k < n; ++k) {
    const double a = k * h;
    const double fb = g(a + h);
    acc += simpson_panel(g, a, h, fa, fb);
    fa = fb;
  }
  return -acc;
}

std::pair<double, double> reference_curve(const CurvatureProfile& profile,
                                          double s, int quad_points) {
  if (s == 0.0) return {0.0, 0.0};
  // alpha is cheap on the left of the support and constant on the right;
  // build a dedicated angle accumulator so the double integral stays O(n).
  const double sign = (s > 0.0) ? 1.0 : -1.0;
  const double len = std::abs(s);
  const int n = std::max(
      32, static_cast<int>(std::ceil(quad_points * len / profile.s0)));
  const double h = sign * len / n;

  // prefix alpha at panel nodes and midpoints via per-panel Simpson on gamma
  std::vector<double> al(n + 1), alm(n);
  al[0] = 0.0;
  auto g = [&](double t) { return profile.gamma(t); };
  double fa = g(0.0);
  for (int k = 0; k < n; ++k) {
    const double a = k * h;
    const double fm = g(a + 0.5 * h);
    const double fb = g(a + h);
    // Simpson on the half panel gives alpha at the midpoint too.
    alm[k] = al[k] - h / 12.0 * (fa + 4.0 * g(a + 0.25 * h) + fm);
    al[k + 1] = al[k] - h / 6.0 * (fa + 4.0 * fm + fb);
    fa = fb;
  }
  double ax = 0.0, bx = 0.0;
  for (int k = 0; k < n; ++k) {
    ax += h / 6.0 * (std::cos(al[k]) + 4.0 * std::cos(alm[k]) +
                     std::cos(al[k + 1]));
    bx += h / 6.0 * (std::sin(al[k]) + 4.0 * std::sin(alm[k]) +
                     std::sin(al[k + 1]));
  }
  return {ax, bx};
}

GuideGeometry::GuideGeometry(double d, const CurvatureProfile& profile,
                             int quad_points)
    : d_(d), profile_(profile), quad_points_(quad_points) {
  if (!(d > 0.0)) throw Error("GuideGeometry: width d must be positive");
  if (quad_points < 16) throw Error("GuideGeometry: quad_points too small");
  hq_ = profile_.s0 / quad_points;
  alpha_table_.resize(quad_points + 1);
  alpha_table_[0] = 0.0;
  auto g = [&](double t) { return profile_.gamma(t); };
  double fa = g(0.0);
  for (int k = 0; k < quad_points; ++k) {
    const double a = k * hq_;
    const double fb = g(a + hq_);
    alpha_table_[k + 1] = alpha_table_[k] - simpson_panel(g, a, hq_, fa, fb);
    fa = fb;
  }
  alpha0_ = alpha_table_.back();
}

double GuideGeometry::alpha(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= profile_.s0) return alpha0_;
  const int k = std::min(static_cast<int>(s / hq_), quad_points_ - 1);
  const double a = k * hq_;
  auto g = [&](double t) { return profile_.gamma(t); };
  const double h = s - a;
  if (h == 0.0) return alpha_table_[k];
  return alpha_table_[k] - simpson_panel(g, a, h, g(a), g(s));
}

double GuideGeometry::A(double eta) const {
  auto f = [&](double t) { return std::cos(eta - alpha(t)); };
  double acc = 0.0;
  double fa = f(0.0);
  for (int k = 0; k < quad_points_; ++k) {
    const double a = k * hq_;
    const double fb = f(a + hq_);
    acc += simpson_panel(f, a, hq_, fa, fb);
    fa = fb;
  }
  return acc;
}

double GuideGeometry::metric(double s, double u) const {
  const double w = 1.0 + u * profile_.gamma(s);
  if (w <= 0.0)
    throw HypothesisError(
        "metric factor degenerates: 1 + u*gamma <= 0 (h2 violated)");
  return 1.0 / (w * w);
}

double GuideGeometry::effective_potential(double s, double u) const {
  const double g0 = profile_.gamma(s);
  const double g1 = profile_.gamma_d1(s);
  const double g2 = profile_.gamma_d2(s);
  const double w = 1.0 + u * g0;
  if (w <= 0.0)
    throw HypothesisError(
        "effective potential degenerates: 1 + u*gamma <= 0 (h2 violated)");
  const double w2 = w * w;
  return -g0 * g0 / (4.0 * w2) + u * g2 / (2.0 * w2 * w) -
         1.25 * u * u * g1 * g1 / (w2 * w2);
}

double metric(const CurvatureProfile& profile, double s, double u) {
  const double w = 1.0 + u * profile.gamma(s);
  if (w <= 0.0)
    throw HypothesisError(
        "metric factor degenerates: 1 + u*gamma <= 0 (h2 violated)");
  return 1.0 / (w * w);
}

double effective_potential(const CurvatureProfile& profile, double s,
                           double u) {
  const double g0 = profile.gamma(s);
  const double g1 = profile.gamma_d1(s);
  const double g2 = profile.gamma_d2(s);
  const double w = 1.0 + u * g0;
  if (w <= 0.0)
    throw HypothesisError(
        "effective potential degenerates: 1 + u*gamma <= 0 (h2 violated)");
  const double w2 = w * w;
  return -g0 * g0 / (4.0 * w2) + u * g2 / (2.0 * w2 * w) -
         1.25 * u * u * g1 * g1 / (w2 * w2);
}

FieldFrame::FieldFrame(const GuideGeometry& geom, double eta)
    : geom_(&geom), eta_(eta) {
  const int n = geom.quad_points();
  hq_ = geom.profile().s0 / n;
  I2_table_.resize(n + 1);
  I2_table_[0] = 0.0;
  auto f = [&](double t) { return std::cos(eta_ - geom.alpha(t)); };
  double fa = f(0.0);
  for (int k = 0; k < n; ++k) {
    const double a = k * hq_;
    const double fb = f(a + hq_);
    I2_table_[k + 1] = I2_table_[k] + simpson_panel(f, a, hq_, fa, fb);
    fa = fb;
  }
  A_ = I2_table_.back();
}

double FieldFrame::stark(double F, double s, double u) const {
  const double s0 = geom_->profile().s0;
  if (s < 0.0) {
    return F * (std::cos(eta_) * s + std::sin(eta_) * u);
  }
  if (s > s0) {
    const double a0 = geom_->alpha0();
    return F * (std::cos(eta_ - a0) * (s - s0) + A_ + std::sin(eta_ - a0) * u);
  }
  // middle branch: I2(s) from the prefix table plus a partial panel
  const int n = static_cast<int>(I2_table_.size()) - 1;
  const int k = std::min(static_cast<int>(s / hq_), n - 1);
  const double a = k * hq_;
  auto f = [&](double t) { return std::cos(eta_ - geom_->alpha(t)); };
  double i2 = I2_table_[k];
  const double h = s - a;
  if (h > 0.0) i2 += simpson_panel(f, a, h, f(a), f(s));
  return F * (i2 + std::sin(eta_ - geom_->alpha(s)) * u);
}

double stark_potential(const GuideGeometry& geom, const FieldConfig& field,
                       double s, double u) {
  return FieldFrame(geom, field.eta).stark(field.F, s, u);
}

std::string HypothesisReport::describe() const {
  std::ostringstream os;
  os << "(h1) curvature regular: " << (h1_ok ? "pass" : "FAIL")
     << "; (h2) d*max|gamma| = " << d_gamma_max << " < 1: "
     << (h2_ok ? "pass" : "FAIL") << "; (h3) |eta| = " << abs_eta
     << ", |eta - alpha0| = " << abs_eta_minus_alpha0 << " < pi/2: "
     << (h3_ok ? "pass" : "FAIL");
  return os.str();
}

HypothesisReport validate_hypotheses(const GuideGeometry& geom,
                                     const FieldConfig& field) {
  HypothesisReport rep;
  const CurvatureProfile& p = geom.profile();

  // (h1): the profile family is smooth by construction; check that sampled
  // values and derivatives are finite and that the sampled sup matches the
  // declared amplitude.
  bool finite = true;
  double sup = 0.0;
  const int n = 2048;
  for (int i = 0; i <= n; ++i) {
    const double s = p.s0 * i / n;
    const double g0 = p.gamma(s), g1 = p.gamma_d1(s), g2 = p.gamma_d2(s);
    if (!std::isfinite(g0) || !std::isfinite(g1) || !std::isfinite(g2))
      finite = false;
    sup = std::max(sup, std::abs(g0));
  }
  rep.h1_ok = finite && sup <= p.gamma_max * (1.0 + 1e-12);

  rep.d_gamma_max = geom.d() * p.gamma_max;
  rep.h2_ok = rep.d_gamma_max < 1.0;

  rep.abs_eta = std::abs(field.eta);
  rep.abs_eta_minus_alpha0 = std::abs(field.eta - geom.alpha0());
  rep.h3_ok = rep.abs_eta < kPi / 2.0 && rep.abs_eta_minus_alpha0 < kPi / 2.0;
  return rep;
}

}  // namespace starkwg

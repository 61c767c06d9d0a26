#include "starkwg/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "starkwg/errors.hpp"
#include "starkwg/hamiltonian.hpp"
#include "starkwg/hash.hpp"
#include "starkwg/linefit.hpp"

namespace starkwg {

namespace {

std::uint64_t grid_fingerprint(const GridSpec& grid, double d) {
  std::uint64_t h = fnv1a64("grid");
  h = fnv1a64_append(h, grid.L_minus);
  h = fnv1a64_append(h, grid.L_plus);
  h = fnv1a64_append(h, static_cast<std::int64_t>(grid.N_s));
  h = fnv1a64_append(h, static_cast<std::int64_t>(grid.N_u));
  h = fnv1a64_append(h, d);
  return h;
}

}  // namespace

BoundState bound_state_reference(const GuideGeometry& geom,
                                 const GridSpec& grid,
                                 const SolverOptions& opts) {
  const RealOperator H = assemble_H(geom, grid);
  const double lam0 = transverse_eigenvalue_fd(geom.d(), 1, grid.N_u);
  const double margin = 1e-6 * lam0;

  // H = -d/ds g d/ds + (transverse part) + V0 with g > 0, so the spectrum
  // lies above lam0 + min V0. A shift just under that bound keeps the
  // shift-invert spectrum well separated even when the domain is long and
  // the low eigenvalues cluster within the box spacing.
  double v_min = 0.0;
  for (int i = 1; i <= grid.N_s; ++i)
    for (int j = 1; j <= grid.N_u; ++j)
      v_min = std::min(v_min, geom.effective_potential(
                                  grid.s_at(i), grid.u_at(j, geom.d())));
  const double floor = lam0 + v_min;
  const double shift = floor - 1e-3 * (1.0 + std::abs(floor));

  // The number of eigenvalues below the threshold is an inertia count: by
  // Sylvester's law it equals the number of negative pivots in an LDLT
  // factorization of H - (lam0 - margin) I. This stays exact even when the
  // truncated continuum packs thousands of box states just above the
  // threshold, where resolving individual eigenvalues is hopeless.
  const int below = count_below(H, lam0 - margin);
  if (below == 0)
    throw NoBoundStateError(
        "no eigenvalue below the transverse threshold: this guide binds no "
        "state on the given grid");

  // The ground state is isolated under the box-state cluster, so a k = 1
  // extremal solve converges in a couple of restarts regardless of how
  // dense the cluster is.
  SolverOptions o = opts;
  o.k = 1;
  if (o.krylov_dim <= o.k) o.krylov_dim = o.k + 20;
  const std::vector<EigenPair> pairs = lowest_symmetric(H, o, shift);

  if (!(pairs[0].value.real() < lam0 - margin))
    throw SolverError(
        "bound_state_reference: extremal solve landed above the transverse "
        "threshold although the inertia count found " +
        std::to_string(below) + " state(s) below it");

  BoundState b;
  b.E0 = pairs[0].value.real();
  b.phi0 = pairs[0].vector;
  b.multiplicity = below;
  b.residual = pairs[0].residual;
  b.lambda0_fd = lam0;
  return b;
}

std::vector<double> default_beta_grid(double theta0,
                                      const ResonanceOptions& ropts) {
  if (!(theta0 > 0.0))
    throw ConfigError("default_beta_grid: theta0 must be positive");
  if (ropts.n_beta < 3)
    throw ConfigError("default_beta_grid: need at least 3 beta points");
  if (!(ropts.beta_lo_frac > 0.0 && ropts.beta_lo_frac < ropts.beta_hi_frac &&
        ropts.beta_hi_frac < 1.0))
    throw ConfigError("default_beta_grid: need 0 < lo < hi < 1 fractions");
  const double lo = ropts.beta_lo_frac * theta0;
  const double hi = ropts.beta_hi_frac * theta0;
  std::vector<double> betas(ropts.n_beta);
  for (int i = 0; i < ropts.n_beta; ++i)
    betas[i] = lo * std::pow(hi / lo, double(i) / (ropts.n_beta - 1));
  return betas;
}

ResonanceEstimate locate_resonance(const GuideGeometry& geom,
                                   const FieldConfig& field,
                                   const GridSpec& grid, double E0,
                                   const std::vector<double>& beta_grid,
                                   const ResonanceOptions& ropts) {
  HypothesisReport rep = validate_hypotheses(geom, field);
  if (!rep.all_ok())
    throw HypothesisError("locate_resonance: " + rep.describe());
  if (field.F < 0.0)
    throw ConfigError("locate_resonance: field intensity must be >= 0");

  const double lam0 = transverse_eigenvalue_fd(geom.d(), 1, grid.N_u);
  if (!(E0 < lam0))
    throw HypothesisError(
        "locate_resonance: reference energy does not lie below the "
        "transverse threshold");
  const double gap = lam0 - E0;

  double E, dE;
  if (std::isnan(ropts.E_override) != std::isnan(ropts.deltaE_override))
    throw ConfigError(
        "locate_resonance: E and deltaE overrides come as a pair");
  if (!std::isnan(ropts.E_override)) {
    E = ropts.E_override;
    dE = ropts.deltaE_override;
  } else {
    std::tie(E, dE) = reference_energy(E0, lam0);
  }
  const CutoffFunction cutoff = build_cutoff(E, dE);
  const DistortionField df = distortion_field(field, cutoff, ropts.alpha);
  const double theta0 = df.theta0();

  std::vector<double> betas =
      beta_grid.empty() ? default_beta_grid(theta0, ropts) : beta_grid;
  std::sort(betas.begin(), betas.end());
  if (betas.size() < 3)
    throw ConfigError(
        "locate_resonance: plateau selection needs at least 3 beta points");
  for (double b : betas)
    if (!(b > 0.0 && b < theta0))
      throw ConfigError("locate_resonance: beta = " + std::to_string(b) +
                        " falls outside (0, theta0)");

  const double trust = ropts.trust_fraction * gap;
  const int n = static_cast<int>(betas.size());

  struct Node {
    bool ok = false;
    std::complex<double> Z;
    double residual = 0.0;
  };
  std::vector<Node> nodes(n);

  auto admissible = [&](const EigenPair& p) {
    if (std::abs(p.value - E0) > trust) return false;
    return p.value.imag() <=
           ropts.tol_imag_abs + ropts.tol_imag_res_factor * p.residual;
  };

  // Walk beta downward: at the top of the grid the tracked eigenvalue is
  // the admissible candidate closest to the real axis (the exposed
  // continuum sits near Im = -beta, well below); after that, follow by
  // nearest-neighbor continuation.
  std::optional<std::complex<double>> prev;
  double best_seen_residual = -1.0;
  for (int i = n - 1; i >= 0; --i) {
    const DistortedParams p = DistortedParams::from_beta(betas[i]);
    const ComplexOperator Hth = assemble_H_theta(geom, field, grid, df, p);
    std::vector<EigenPair> pairs;
    try {
      pairs = nearest_to_shift(Hth, std::complex<double>(E0, 0.0),
                               ropts.solver);
    } catch (const SolverError& e) {
      best_seen_residual = std::max(best_seen_residual, e.best_residual);
      continue;  // this beta contributes a gap
    }
    const EigenPair* chosen = nullptr;
    double best_metric = std::numeric_limits<double>::infinity();
    for (const auto& q : pairs) {
      if (!admissible(q)) continue;
      const double metric =
          prev ? std::abs(q.value - *prev) : -q.value.imag();
      if (metric < best_metric) {
        best_metric = metric;
        chosen = &q;
      }
    }
    if (!chosen) continue;
    EigenPair sel = *chosen;
    nodes[i].ok = true;
    nodes[i].Z = sel.value;
    nodes[i].residual = sel.residual;
    prev = sel.value;
    best_seen_residual = std::max(best_seen_residual, sel.residual);

    // Keep the matrix alive only long enough to polish the accepted pair.
    EigenPair ref = refine_eigenpair(Hth, sel, 1);
    if (ref.residual < sel.residual && admissible(ref)) {
      nodes[i].Z = ref.value;
      nodes[i].residual = ref.residual;
      prev = ref.value;
    }
  }

  // Plateau selection over consecutive usable triples, scored by the
  // centered-difference |dZ/dbeta|. Raw |Z_{i+1} - Z_{i-1}| would favor the
  // tight spacing at the bottom of a log grid, where the distortion barely
  // absorbs anything, over a genuinely stationary stretch higher up. The
  // reported plateau_score is the centered difference itself, an energy:
  // how far Z moves across the accepted window.
  int best_i = -1;
  double best_slope = std::numeric_limits<double>::infinity();
  double best_score = std::numeric_limits<double>::infinity();
  for (int i = 1; i + 1 < n; ++i) {
    if (!(nodes[i - 1].ok && nodes[i].ok && nodes[i + 1].ok)) continue;
    const double dz = std::abs(nodes[i + 1].Z - nodes[i - 1].Z);
    const double slope = dz / (betas[i + 1] - betas[i - 1]);
    if (slope < best_slope) {
      best_slope = slope;
      best_score = dz;
      best_i = i;
    }
  }
  if (best_i < 0) {
    bool any = false;
    for (const auto& nd : nodes) any = any || nd.ok;
    throw ResonanceNotFoundError(
        any ? "locate_resonance: too few adjacent usable beta points to "
              "score a plateau"
            : "locate_resonance: no eigenvalue stayed within the trust "
              "radius of E0 for any beta");
  }

  ResonanceEstimate est;
  est.Z = nodes[best_i].Z;
  est.F = field.F;
  est.beta_used = betas[best_i];
  est.plateau_score = best_score;
  est.residual = nodes[best_i].residual;
  est.grid_fingerprint = grid_fingerprint(grid, geom.d());
  est.beta_window_lo = betas[best_i - 1];
  est.beta_window_hi = betas[best_i + 1];
  double spread = 0.0;
  for (int a = best_i - 1; a <= best_i + 1; ++a)
    for (int b = a + 1; b <= best_i + 1; ++b)
      spread = std::max(spread, std::abs(nodes[a].Z - nodes[b].Z));
  est.spread = spread;
  est.E0 = E0;
  est.theta0 = theta0;
  est.plateau_warning = best_score > ropts.plateau_threshold_factor * gap;
  est.over_field_ceiling =
      field.F > max_field(dE, geom.d(), ropts.alpha_prime);
  return est;
}

std::vector<ResonanceEstimate> field_sweep(
    const GuideGeometry& geom, const GridSpec& grid, double eta, double E0,
    const std::vector<double>& F_list, const std::vector<double>& beta_grid,
    const ResonanceOptions& ropts,
    const std::function<void(const ResonanceEstimate&)>& sink) {
  std::vector<ResonanceEstimate> out;
  for (double F : F_list) {
    if (!(F > 0.0))
      throw ConfigError("field_sweep: field values must be positive");
    try {
      ResonanceEstimate est =
          locate_resonance(geom, FieldConfig{F, eta}, grid, E0, beta_grid,
                           ropts);
      if (sink) sink(est);
      out.push_back(std::move(est));
    } catch (const ResonanceNotFoundError&) {
      // A gap in the sweep, by contract not a failure.
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ResonanceEstimate& a, const ResonanceEstimate& b) {
              return a.F < b.F;
            });
  return out;
}

WidthFit fit_width_law(const std::vector<ResonanceEstimate>& records,
                       double noise_floor_factor, double r2_threshold) {
  WidthFit fit;
  std::vector<double> x, y;
  double fmin = std::numeric_limits<double>::infinity(), fmax = 0.0;
  for (const auto& r : records) {
    if (!(r.F > 0.0)) {
      ++fit.n_censored;
      continue;
    }
    const double w = -r.Z.imag();
    if (!(w > noise_floor_factor * r.residual)) {
      ++fit.n_censored;
      continue;
    }
    x.push_back(1.0 / r.F);
    y.push_back(std::log(w));
    fmin = std::min(fmin, r.F);
    fmax = std::max(fmax, r.F);
  }
  fit.n_used = static_cast<int>(x.size());
  if (fit.n_used < 4) {
    fit.status = "too_few_points";
    return fit;
  }
  fit.F_min = fmin;
  fit.F_max = fmax;
  const LineFit line = fit_line(x, y);
  fit.c2 = -line.slope;
  fit.c1 = std::exp(line.intercept);
  fit.r_squared = line.r_squared;
  fit.status =
      (fit.r_squared >= r2_threshold && fit.c2 > 0.0) ? "ok" : "poor_fit";
  return fit;
}

namespace {

struct TailFit {
  double a = 0.0;
  double r2 = 0.0;
  int n = 0;
};

TailFit fit_tail(const std::vector<double>& s, const std::vector<double>& rho,
                 const char* side) {
  if (s.size() < 8)
    throw ConfigError(std::string("decay_rate: only ") +
                      std::to_string(s.size()) + " usable points on the " +
                      side + " tail; widen the domain");
  std::vector<double> x(s.size()), y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    x[i] = std::abs(s[i]);
    y[i] = std::log(rho[i]);
  }
  const LineFit line = fit_line(x, y);
  // Density falls like exp(-2a|s|).
  TailFit t{-0.5 * line.slope, line.r_squared, line.n};
  if (!(t.a > 0.0) || t.r2 < 0.9)
    throw ConfigError(std::string("decay_rate: ") + side +
                      " tail is not cleanly exponential (truncation "
                      "artifacts?); widen the domain");
  return t;
}

}  // namespace

DecayEstimate decay_rate(const Eigen::VectorXcd& phi0, const GridSpec& grid,
                         double d, double core_lo, double core_hi) {
  if (phi0.size() != grid.dimension())
    throw Error("decay_rate: state does not match the grid");
  const double hu = grid.h_u(d);

  // u-integrated density per s-node.
  std::vector<double> rho(grid.N_s), s(grid.N_s);
  double rho_max = 0.0;
  for (int i = 1; i <= grid.N_s; ++i) {
    double acc = 0.0;
    for (int j = 1; j <= grid.N_u; ++j)
      acc += std::norm(phi0[grid.index(i, j)]);
    rho[i - 1] = hu * acc;
    s[i - 1] = grid.s_at(i);
    rho_max = std::max(rho_max, rho[i - 1]);
  }
  if (!(rho_max > 0.0)) throw Error("decay_rate: state is identically zero");

  // Wall margin, cut per side relative to that arm's length so a domain
  // with one long arm keeps a usable window on the short one; below the
  // roundoff floor the logarithm carries no signal either.
  const double wall_left = 0.2 * std::max(0.0, core_lo - grid.L_minus);
  const double wall_right = 0.2 * std::max(0.0, grid.L_plus - core_hi);
  const double floor = 1e-12 * rho_max;

  std::vector<double> sl, rl, sr, rr;
  for (int i = 0; i < grid.N_s; ++i) {
    if (s[i] < grid.L_minus + wall_left || s[i] > grid.L_plus - wall_right)
      continue;
    if (rho[i] < floor) continue;
    if (s[i] < core_lo) {
      sl.push_back(s[i]);
      rl.push_back(rho[i]);
    } else if (s[i] > core_hi) {
      sr.push_back(s[i]);
      rr.push_back(rho[i]);
    }
  }
  const TailFit left = fit_tail(sl, rl, "left");
  const TailFit right = fit_tail(sr, rr, "right");

  DecayEstimate e;
  e.a_left = left.a;
  e.a_right = right.a;
  e.r2_left = left.r2;
  e.r2_right = right.r2;
  e.n_left = left.n;
  e.n_right = right.n;
  e.a = std::min(left.a, right.a);
  return e;
}

DecayEstimate decay_rate(const GuideGeometry& geom, const GridSpec& grid,
                         const Eigen::VectorXcd& phi0) {
  return decay_rate(phi0, grid, geom.d(), -2.0, geom.profile().s0 + 2.0);
}

}  // namespace starkwg

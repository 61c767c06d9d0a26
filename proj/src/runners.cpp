#include "starkwg/runners.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "starkwg/distortion.hpp"
#include "starkwg/errors.hpp"
#include "starkwg/hamiltonian.hpp"
#include "starkwg/records.hpp"
#include "starkwg/resonance.hpp"
#include "starkwg/validation.hpp"

namespace starkwg {

namespace {

using nlohmann::json;

ResultRecord base_record(const RunConfig& cfg, const std::string& subcommand) {
  ResultRecord rec;
  rec.config_hash = cfg.hash_hex;
  rec.timestamp = iso8601_utc_now();
  rec.subcommand = subcommand;
  rec.parameters = {{"d", cfg.d},
                    {"profile", cfg.profile_kind},
                    {"gamma_max", cfg.gamma_max},
                    {"s0", cfg.s0},
                    {"eta", cfg.eta},
                    {"grid",
                     {{"L_minus", cfg.grid.L_minus},
                      {"L_plus", cfg.grid.L_plus},
                      {"N_s", cfg.grid.N_s},
                      {"N_u", cfg.grid.N_u}}}};
  return rec;
}

json solver_meta(const SolverOptions& so) {
  return json{{"seed", so.seed}, {"k", so.k}, {"tol", so.tol}};
}

}  // namespace

int run_geometry_check(const RunConfig& cfg) {
  const GuideGeometry geom = cfg.build_geometry();
  const std::vector<double> Fs =
      cfg.F_list.empty() ? std::vector<double>{0.0} : cfg.F_list;

  json checks = json::array();
  bool all_ok = true;
  HypothesisReport first_bad;
  for (double F : Fs) {
    const FieldConfig field{F, cfg.eta};
    const HypothesisReport rep = validate_hypotheses(geom, field);
    checks.push_back({{"F", F},
                      {"h1_ok", rep.h1_ok},
                      {"h2_ok", rep.h2_ok},
                      {"h3_ok", rep.h3_ok},
                      {"d_gamma_max", rep.d_gamma_max},
                      {"abs_eta", rep.abs_eta},
                      {"abs_eta_minus_alpha0", rep.abs_eta_minus_alpha0},
                      {"summary", rep.describe()}});
    if (!rep.all_ok() && all_ok) {
      all_ok = false;
      first_bad = rep;
    }
  }

  ResultRecord rec = base_record(cfg, "geometry-check");
  rec.outputs = {{"alpha0", geom.alpha0()},
                 {"A", geom.A(cfg.eta)},
                 {"all_ok", all_ok},
                 {"checks", checks}};
  RecordWriter writer(cfg.output.records_path);
  writer.append(rec);

  if (!all_ok) {
    std::string msg = first_bad.describe();
    if (!first_bad.h3_ok && first_bad.abs_eta >= 1.5707963267948966)
      msg =
          "field points across the guide (|eta| >= pi/2), a regime with no "
          "Stark resonance; " +
          msg;
    throw HypothesisError(msg);
  }
  return 0;
}

int run_bound_states(const RunConfig& cfg) {
  const GuideGeometry geom = cfg.build_geometry();
  ResultRecord rec = base_record(cfg, "bound-states");
  rec.solver = solver_meta(cfg.solver);

  try {
    const BoundState bs = bound_state_reference(geom, cfg.grid, cfg.solver);
    const DecayEstimate de = decay_rate(geom, cfg.grid, bs.phi0);
    rec.outputs = {{"status", "ok"},
                   {"eigenvalues", json::array({complex_pair(bs.E0)})},
                   {"E0", bs.E0},
                   {"lambda0_fd", bs.lambda0_fd},
                   {"gap", bs.gap()},
                   {"multiplicity", bs.multiplicity},
                   {"decay",
                    {{"a", de.a},
                     {"a_left", de.a_left},
                     {"a_right", de.a_right},
                     {"r2_left", de.r2_left},
                     {"r2_right", de.r2_right}}}};
    rec.solver["residual"] = bs.residual;
  } catch (const NoBoundStateError& e) {
    rec.outputs = {{"status", "no-bound-state"},
                   {"eigenvalues", json::array()},
                   {"message", e.what()}};
  }

  RecordWriter writer(cfg.output.records_path);
  writer.append(rec);
  return 0;
}

int run_resonance(const RunConfig& cfg) {
  const double F = cfg.single_F("resonance");
  if (!(F > 0.0))
    throw ConfigError("resonance: field.F must be positive");
  const GuideGeometry geom = cfg.build_geometry();
  const FieldConfig field{F, cfg.eta};
  const ResonanceOptions ropts = cfg.resonance_options();

  const BoundState bs = bound_state_reference(geom, cfg.grid, ropts.solver);
  const ResonanceEstimate est =
      locate_resonance(geom, field, cfg.grid, bs.E0, cfg.beta_grid, ropts);

  ResultRecord rec = base_record(cfg, "resonance");
  rec.parameters["F"] = F;
  rec.outputs = estimate_json(est);
  rec.outputs["gap"] = bs.gap();
  rec.solver = solver_meta(ropts.solver);
  rec.solver["residual"] = est.residual;
  rec.solver["bound_residual"] = bs.residual;

  RecordWriter writer(cfg.output.records_path);
  writer.append(rec);
  if (!cfg.output.csv_path.empty())
    write_sweep_csv(cfg.output.csv_path, {est});
  return 0;
}

int run_sweep(const RunConfig& cfg) {
  if (cfg.F_list.empty())
    throw ConfigError("sweep: field.F_list must not be empty");
  std::vector<double> Fs = cfg.F_list;
  std::sort(Fs.begin(), Fs.end());

  const GuideGeometry geom = cfg.build_geometry();
  const ResonanceOptions ropts = cfg.resonance_options();
  const BoundState bs = bound_state_reference(geom, cfg.grid, ropts.solver);

  RecordWriter writer(cfg.output.records_path);
  auto sink = [&](const ResonanceEstimate& est) {
    ResultRecord rec = base_record(cfg, "sweep");
    rec.parameters["F"] = est.F;
    rec.outputs = estimate_json(est);
    rec.solver = solver_meta(ropts.solver);
    rec.solver["residual"] = est.residual;
    writer.append(rec);
  };

  const std::vector<ResonanceEstimate> results =
      field_sweep(geom, cfg.grid, cfg.eta, bs.E0, Fs, cfg.beta_grid, ropts,
                  sink);

  const WidthFit fit = fit_width_law(results);
  ResultRecord frec = base_record(cfg, "sweep");
  frec.outputs = {{"fit",
                   {{"c1", fit.c1},
                    {"c2", fit.c2},
                    {"r_squared", fit.r_squared},
                    {"F_min", fit.F_min},
                    {"F_max", fit.F_max},
                    {"n_used", fit.n_used},
                    {"n_censored", fit.n_censored},
                    {"status", fit.status}}},
                  {"gap", bs.gap()},
                  {"n_points", static_cast<int>(results.size())},
                  {"n_requested", static_cast<int>(Fs.size())}};
  frec.solver = solver_meta(ropts.solver);
  writer.append(frec);

  if (!cfg.output.csv_path.empty())
    write_sweep_csv(cfg.output.csv_path, results);

  if (results.empty())
    throw SolverError("sweep: no field point produced a resonance estimate");
  return 0;
}

int run_validate(const RunConfig& cfg, const std::vector<std::string>& checks) {
  static const std::vector<std::string> kAll{"tilted", "airy", "weyl",
                                             "equivalence"};
  std::vector<std::string> todo = checks.empty() ? kAll : checks;
  for (const std::string& c : todo)
    if (std::find(kAll.begin(), kAll.end(), c) == kAll.end())
      throw ConfigError(
          "validate: unknown check '" + c +
          "' (expected tilted, airy, weyl, or equivalence)");

  const ValidationConfig& vc = cfg.validation;
  RecordWriter writer(cfg.output.records_path);

  for (const std::string& check : todo) {
    ResultRecord rec = base_record(cfg, "validate");
    rec.outputs["check"] = check;

    if (check == "tilted") {
      if (vc.tilted_F.empty())
        throw ConfigError("validate: validation.tilted_F must not be empty");
      json rows = json::array();
      double Cmin = std::numeric_limits<double>::infinity(), Cmax = 0.0;
      for (double F : vc.tilted_F) {
        if (!(F > 0.0))
          throw ConfigError("validate: validation.tilted_F entries must be > 0");
        const TiltedMode tm =
            tilted_transverse_mode(cfg.d, F, vc.tilted_eta, vc.tilted_N_u);
        const double lam0 = transverse_eigenvalue(cfg.d, 1);
        const double dev =
            std::abs(tm.E1 - lam0 -
                     F * std::sin(vc.tilted_eta) * cfg.d / 2.0);
        const double C = dev / (F * F);
        rows.push_back({{"F", F},
                        {"E1", tm.E1},
                        {"deviation", dev},
                        {"C", C},
                        {"residual", tm.residual}});
        Cmin = std::min(Cmin, C);
        Cmax = std::max(Cmax, C);
      }
      rec.outputs["tilted"] = {{"rows", rows},
                               {"C_ratio", Cmax / Cmin},
                               {"eta", vc.tilted_eta},
                               {"N_u", vc.tilted_N_u}};
    } else if (check == "airy") {
      if (vc.airy_n < 16 || !(vc.airy_s_lo < vc.airy_s_hi))
        throw ConfigError("validate: bad airy window configuration");
      std::vector<double> sg(vc.airy_n);
      const double h =
          (vc.airy_s_hi - vc.airy_s_lo) / (vc.airy_n - 1);
      for (int i = 0; i < vc.airy_n; ++i) sg[i] = vc.airy_s_lo + i * h;
      const AiryState st = airy_scattering_state(vc.airy_F, vc.airy_eta,
                                                 vc.airy_lambda, sg);
      const double w = vc.airy_F * std::cos(vc.airy_eta);
      double maxphi = 0.0;
      for (int i = 0; i < vc.airy_n; ++i)
        maxphi = std::max(maxphi, std::abs(st.phi[i]));
      double maxres = 0.0;
      for (int i = 1; i + 1 < vc.airy_n; ++i) {
        const std::complex<double> lap =
            (st.phi[i + 1] - 2.0 * st.phi[i] + st.phi[i - 1]) / (h * h);
        maxres = std::max(
            maxres, std::abs(-lap + (w * sg[i] - vc.airy_lambda) * st.phi[i]));
      }
      maxres /= maxphi;
      // amplitude law over the deep-left third of the window
      const int third = vc.airy_n / 3;
      double amax = 0.0, amin = std::numeric_limits<double>::infinity();
      for (int i = 0; i < third; ++i) {
        const double q = vc.airy_lambda - w * sg[i];
        const double amp = std::abs(st.phi[i]) * std::pow(q, 0.25);
        amax = std::max(amax, amp);
        amin = std::min(amin, amp);
      }
      const double constancy = (amax - amin) / (0.5 * (amax + amin));
      rec.outputs["airy"] = {{"residual_max", maxres},
                             {"amplitude_constancy", constancy},
                             {"F", vc.airy_F},
                             {"eta", vc.airy_eta},
                             {"lambda", vc.airy_lambda},
                             {"window", {vc.airy_s_lo, vc.airy_s_hi}},
                             {"n", vc.airy_n}};
    } else if (check == "weyl") {
      const double F = cfg.single_F("validate (weyl)");
      const GuideGeometry geom = cfg.build_geometry();
      const FieldConfig field{F, cfg.eta};
      const WeylWindowLaw law = vc.weyl_window_law == "power"
                                    ? WeylWindowLaw::power
                                    : WeylWindowLaw::linear;
      json rows = json::array();
      bool all_monotone = true;
      for (double E : vc.weyl_E) {
        json rs = json::array();
        bool monotone = true;
        double prev = std::numeric_limits<double>::infinity();
        for (int n : vc.weyl_n) {
          WeylParams wp;
          wp.E = E;
          wp.n = n;
          wp.alpha_exp = vc.weyl_alpha_exp;
          wp.law = law;
          const double r = weyl_residual(geom, field, cfg.grid, wp);
          if (!(r < prev)) monotone = false;
          prev = r;
          rs.push_back({{"n", n}, {"residual", r}});
        }
        rows.push_back(
            {{"E", E}, {"rows", rs}, {"monotone_decreasing", monotone}});
        all_monotone = all_monotone && monotone;
      }
      rec.outputs["weyl"] = {{"rows", rows},
                             {"all_monotone", all_monotone},
                             {"F", F},
                             {"eta", cfg.eta},
                             {"alpha_exp", vc.weyl_alpha_exp},
                             {"window_law", vc.weyl_window_law}};
    } else {  // equivalence
      if (std::isnan(cfg.E_override) || std::isnan(cfg.deltaE_override))
        throw ConfigError(
            "validate: the equivalence check needs distortion.E and "
            "distortion.deltaE in the config");
      const double F = cfg.single_F("validate (equivalence)");
      const GuideGeometry geom = cfg.build_geometry();
      const FieldConfig field{F, cfg.eta};
      const CutoffFunction cutoff =
          build_cutoff(cfg.E_override, cfg.deltaE_override);
      const DistortionField df = distortion_field(field, cutoff, cfg.alpha);
      const double theta = vc.equivalence_theta_fraction * df.theta0();

      const EquivalenceReport coarse = unitary_equivalence_check(
          geom, field, cfg.grid, df, theta, vc.equivalence_k, cfg.solver);
      GridSpec fine = cfg.grid;
      fine.N_s = 2 * cfg.grid.N_s + 1;
      fine.N_u = 2 * cfg.grid.N_u + 1;
      const EquivalenceReport refined = unitary_equivalence_check(
          geom, field, fine, df, theta, vc.equivalence_k, cfg.solver);
      const double ratio = refined.max_deviation > 0.0
                               ? coarse.max_deviation / refined.max_deviation
                               : 0.0;
      rec.outputs["equivalence"] = {
          {"theta", theta},
          {"dev_coarse", coarse.max_deviation},
          {"dev_fine", refined.max_deviation},
          {"ratio", ratio},
          {"ev_distorted", coarse.ev_distorted},
          {"ev_reference", coarse.ev_reference}};
    }

    rec.solver = solver_meta(cfg.solver);
    writer.append(rec);
  }
  return 0;
}

}  // namespace starkwg

#ifndef STARKWG_CONFIG_HPP
#define STARKWG_CONFIG_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "starkwg/eigensolve.hpp"
#include "starkwg/geometry.hpp"
#include "starkwg/grid.hpp"
#include "starkwg/resonance.hpp"

namespace starkwg {

// Where records and tables go. Empty records_path means stdout; empty
// csv_path disables the CSV table.
struct OutputConfig {
  std::string records_path;
  std::string csv_path;
};

// Parameters of the validate subcommand's checks. Everything has a default
// so a bare config runs all checks at desk scale.
struct ValidationConfig {
  std::vector<double> tilted_F{0.2, 0.4, 0.8};
  double tilted_eta = 0.9;
  int tilted_N_u = 2000;

  double airy_F = 0.5;
  double airy_eta = 0.0;
  double airy_lambda = 1.0;
  double airy_s_lo = -20.0;
  double airy_s_hi = 4.0;
  int airy_n = 80001;

  std::vector<double> weyl_E{-1.0, 5.0};
  std::vector<int> weyl_n{4, 6, 8};
  double weyl_alpha_exp = 0.75;
  std::string weyl_window_law = "linear";

  double equivalence_theta_fraction = 0.5;
  int equivalence_k = 3;
};

// Fully parsed run configuration. Parsing rejects unknown keys with a
// line-anchored message and records an FNV-1a hash of the canonicalized
// (key-sorted, override-applied) content so every result links back to its
// exact inputs.
struct RunConfig {
  double d = 1.0;
  std::string profile_kind = "bump";
  double gamma_max = 0.5;
  double s0 = 4.0;

  std::vector<double> F_list;
  double eta = 0.0;

  GridSpec grid;

  double alpha = kDefaultAlpha;
  double alpha_prime = 0.1;
  std::vector<double> beta_grid;
  double E_override = std::numeric_limits<double>::quiet_NaN();
  double deltaE_override = std::numeric_limits<double>::quiet_NaN();

  SolverOptions solver;
  // Whether the config named solver.k explicitly; resonance runs otherwise
  // widen the default subspace.
  bool solver_k_set = false;

  OutputConfig output;
  ValidationConfig validation;

  std::uint64_t hash = 0;
  std::string hash_hex;

  GuideGeometry build_geometry() const;
  ResonanceOptions resonance_options() const;
  // The single configured field intensity; errors when F_list has several.
  double single_F(const std::string& subcommand) const;
};

// Parse config text (JSON), apply dotted-path overrides ("field.F=0.01"),
// reject unknown keys, and return the typed configuration.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides = {});

// Same from a file path.
RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});

}  // namespace starkwg

#endif

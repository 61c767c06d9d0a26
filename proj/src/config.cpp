#include "starkwg/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "starkwg/errors.hpp"
#include "starkwg/hash.hpp"

namespace starkwg {

namespace {

using nlohmann::json;

// 1-based line of the first occurrence of "key" in the raw text, 0 when the
// key only exists because an override introduced it.
int line_of_key(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(
                 std::count(text.begin(), text.begin() + pos, '\n'));
}

[[noreturn]] void key_error(const std::string& raw, const std::string& block,
                            const std::string& key, const std::string& what) {
  const std::string full = block.empty() ? key : block + "." + key;
  const int line = line_of_key(raw, key);
  const std::string at = line > 0 ? " (line " + std::to_string(line) + ")"
                                  : " (introduced by an override)";
  throw ConfigError("config: " + what + " '" + full + "'" + at);
}

void check_keys(const json& obj, const std::string& raw,
                const std::string& block,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) key_error(raw, block, it.key(), "unknown key");
  }
}

const json& block_at(const json& j, const std::string& raw,
                     const std::string& name) {
  const json& b = j.at(name);
  if (!b.is_object())
    key_error(raw, "", name, "expected an object block at");
  return b;
}

double num_at(const json& obj, const std::string& raw,
              const std::string& block, const std::string& key, double dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number()) key_error(raw, block, key, "expected a number at");
  return obj[key].get<double>();
}

int int_at(const json& obj, const std::string& raw, const std::string& block,
           const std::string& key, int dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number_integer())
    key_error(raw, block, key, "expected an integer at");
  return obj[key].get<int>();
}

std::string str_at(const json& obj, const std::string& raw,
                   const std::string& block, const std::string& key,
                   const std::string& dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_string()) key_error(raw, block, key, "expected a string at");
  return obj[key].get<std::string>();
}

std::vector<double> numlist_at(const json& obj, const std::string& raw,
                               const std::string& block,
                               const std::string& key,
                               const std::vector<double>& dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_array())
    key_error(raw, block, key, "expected an array of numbers at");
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number())
      key_error(raw, block, key, "expected an array of numbers at");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<int> intlist_at(const json& obj, const std::string& raw,
                            const std::string& block, const std::string& key,
                            const std::vector<int>& dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_array())
    key_error(raw, block, key, "expected an array of integers at");
  std::vector<int> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number_integer())
      key_error(raw, block, key, "expected an array of integers at");
    out.push_back(v.get<int>());
  }
  return out;
}

void apply_override(json& j, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like block.key=value, got '" + spec +
                      "'");
  const std::string path = spec.substr(0, eq);
  const std::string val = spec.substr(eq + 1);
  json v = json::parse(val, nullptr, /*allow_exceptions=*/false);
  if (v.is_discarded()) v = val;  // bare words are strings

  json* cur = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string seg =
        path.substr(start, dot == std::string::npos ? std::string::npos
                                                    : dot - start);
    if (seg.empty())
      throw ConfigError("override path has an empty segment: '" + spec + "'");
    if (!cur->is_object() && !cur->is_null())
      throw ConfigError("override path '" + path +
                        "' descends into a non-object value");
    if (dot == std::string::npos) {
      (*cur)[seg] = v;
      break;
    }
    cur = &((*cur)[seg]);
    start = dot + 1;
  }
}

}  // namespace

RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(
                             text.begin(), text.begin() + byte, '\n'));
    throw ConfigError("config: parse error at line " + std::to_string(line) +
                      ": " + e.what());
  }
  if (!j.is_object())
    throw ConfigError("config: top level must be a JSON object");
  for (const auto& o : overrides) apply_override(j, o);

  check_keys(j, text, "",
             {"geometry", "field", "grid", "distortion", "solver", "output",
              "validation"});

  RunConfig cfg;

  if (j.contains("geometry")) {
    const json& g = block_at(j, text, "geometry");
    check_keys(g, text, "geometry", {"d", "profile", "gamma_max", "s0"});
    cfg.d = num_at(g, text, "geometry", "d", cfg.d);
    cfg.profile_kind = str_at(g, text, "geometry", "profile", cfg.profile_kind);
    cfg.gamma_max = num_at(g, text, "geometry", "gamma_max", cfg.gamma_max);
    cfg.s0 = num_at(g, text, "geometry", "s0", cfg.s0);
  }
  if (cfg.profile_kind == "straight") {
    cfg.gamma_max = 0.0;
  } else if (cfg.profile_kind != "bump") {
    key_error(text, "geometry", "profile",
              "expected \"bump\" or \"straight\" at");
  }
  if (!(cfg.d > 0.0)) key_error(text, "geometry", "d", "expected d > 0 at");
  if (!(cfg.s0 > 0.0)) key_error(text, "geometry", "s0", "expected s0 > 0 at");
  if (!(cfg.gamma_max >= 0.0))
    key_error(text, "geometry", "gamma_max", "expected gamma_max >= 0 at");

  if (j.contains("field")) {
    const json& f = block_at(j, text, "field");
    check_keys(f, text, "field", {"F", "F_list", "eta"});
    if (f.contains("F") && f.contains("F_list"))
      key_error(text, "field", "F_list",
                "give either field.F or field.F_list, not both, at");
    if (f.contains("F")) cfg.F_list = {num_at(f, text, "field", "F", 0.0)};
    if (f.contains("F_list"))
      cfg.F_list = numlist_at(f, text, "field", "F_list", {});
    cfg.eta = num_at(f, text, "field", "eta", cfg.eta);
  }
  for (double F : cfg.F_list)
    if (!std::isfinite(F) || F < 0.0)
      key_error(text, "field", "F", "expected finite F >= 0 at");
  if (!std::isfinite(cfg.eta))
    key_error(text, "field", "eta", "expected a finite angle at");

  if (j.contains("grid")) {
    const json& g = block_at(j, text, "grid");
    check_keys(g, text, "grid", {"L_minus", "L_plus", "N_s", "N_u"});
    cfg.grid.L_minus = num_at(g, text, "grid", "L_minus", cfg.grid.L_minus);
    cfg.grid.L_plus = num_at(g, text, "grid", "L_plus", cfg.grid.L_plus);
    cfg.grid.N_s = int_at(g, text, "grid", "N_s", cfg.grid.N_s);
    cfg.grid.N_u = int_at(g, text, "grid", "N_u", cfg.grid.N_u);
  }
  if (!(cfg.grid.L_minus < cfg.grid.L_plus))
    key_error(text, "grid", "L_minus", "expected L_minus < L_plus at");

  if (j.contains("distortion")) {
    const json& d = block_at(j, text, "distortion");
    check_keys(d, text, "distortion",
               {"alpha", "alpha_prime", "beta_grid", "E", "deltaE"});
    cfg.alpha = num_at(d, text, "distortion", "alpha", cfg.alpha);
    cfg.alpha_prime =
        num_at(d, text, "distortion", "alpha_prime", cfg.alpha_prime);
    cfg.beta_grid = numlist_at(d, text, "distortion", "beta_grid", {});
    cfg.E_override = num_at(d, text, "distortion", "E", cfg.E_override);
    cfg.deltaE_override =
        num_at(d, text, "distortion", "deltaE", cfg.deltaE_override);
  }
  if (std::isnan(cfg.E_override) != std::isnan(cfg.deltaE_override))
    key_error(text, "distortion", "E",
              "distortion.E and distortion.deltaE must be given together; "
              "check");

  if (j.contains("solver")) {
    const json& s = block_at(j, text, "solver");
    check_keys(s, text, "solver",
               {"k", "tol", "seed", "max_iter", "krylov_dim"});
    if (s.contains("k")) {
      cfg.solver.k = int_at(s, text, "solver", "k", cfg.solver.k);
      cfg.solver_k_set = true;
    }
    cfg.solver.tol = num_at(s, text, "solver", "tol", cfg.solver.tol);
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned())
        key_error(text, "solver", "seed",
                  "expected a nonnegative integer at");
      cfg.solver.seed = s["seed"].get<std::uint64_t>();
    }
    cfg.solver.max_iter =
        int_at(s, text, "solver", "max_iter", cfg.solver.max_iter);
    cfg.solver.krylov_dim =
        int_at(s, text, "solver", "krylov_dim", cfg.solver.krylov_dim);
  }
  cfg.solver.validate();

  if (j.contains("output")) {
    const json& o = block_at(j, text, "output");
    check_keys(o, text, "output", {"records", "csv"});
    cfg.output.records_path = str_at(o, text, "output", "records", "");
    cfg.output.csv_path = str_at(o, text, "output", "csv", "");
  }

  if (j.contains("validation")) {
    const json& v = block_at(j, text, "validation");
    check_keys(v, text, "validation",
               {"tilted_F", "tilted_eta", "tilted_N_u", "airy_F", "airy_eta",
                "airy_lambda", "airy_s_lo", "airy_s_hi", "airy_n", "weyl_E",
                "weyl_n", "weyl_alpha_exp", "weyl_window_law",
                "equivalence_theta_fraction", "equivalence_k"});
    ValidationConfig& vc = cfg.validation;
    vc.tilted_F = numlist_at(v, text, "validation", "tilted_F", vc.tilted_F);
    vc.tilted_eta = num_at(v, text, "validation", "tilted_eta", vc.tilted_eta);
    vc.tilted_N_u = int_at(v, text, "validation", "tilted_N_u", vc.tilted_N_u);
    vc.airy_F = num_at(v, text, "validation", "airy_F", vc.airy_F);
    vc.airy_eta = num_at(v, text, "validation", "airy_eta", vc.airy_eta);
    vc.airy_lambda =
        num_at(v, text, "validation", "airy_lambda", vc.airy_lambda);
    vc.airy_s_lo = num_at(v, text, "validation", "airy_s_lo", vc.airy_s_lo);
    vc.airy_s_hi = num_at(v, text, "validation", "airy_s_hi", vc.airy_s_hi);
    vc.airy_n = int_at(v, text, "validation", "airy_n", vc.airy_n);
    vc.weyl_E = numlist_at(v, text, "validation", "weyl_E", vc.weyl_E);
    vc.weyl_n = intlist_at(v, text, "validation", "weyl_n", vc.weyl_n);
    vc.weyl_alpha_exp =
        num_at(v, text, "validation", "weyl_alpha_exp", vc.weyl_alpha_exp);
    vc.weyl_window_law = str_at(v, text, "validation", "weyl_window_law",
                                vc.weyl_window_law);
    vc.equivalence_theta_fraction =
        num_at(v, text, "validation", "equivalence_theta_fraction",
               vc.equivalence_theta_fraction);
    vc.equivalence_k =
        int_at(v, text, "validation", "equivalence_k", vc.equivalence_k);
    if (vc.weyl_window_law != "linear" && vc.weyl_window_law != "power")
      key_error(text, "validation", "weyl_window_law",
                "expected \"linear\" or \"power\" at");
  }

  const std::string canonical = j.dump();
  cfg.hash = fnv1a64(canonical);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(cfg.hash));
  cfg.hash_hex = buf;
  return cfg;
}

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

GuideGeometry RunConfig::build_geometry() const {
  return GuideGeometry(d, make_bump_profile(gamma_max, s0));
}

ResonanceOptions RunConfig::resonance_options() const {
  ResonanceOptions r;
  r.alpha = alpha;
  r.alpha_prime = alpha_prime;
  r.solver = solver;
  if (!solver_k_set) r.solver.k = default_resonance_solver().k;
  r.E_override = E_override;
  r.deltaE_override = deltaE_override;
  return r;
}

double RunConfig::single_F(const std::string& subcommand) const {
  if (F_list.size() != 1)
    throw ConfigError("config: the " + subcommand +
                      " subcommand needs exactly one field.F (got " +
                      std::to_string(F_list.size()) + " values)");
  return F_list[0];
}

}  // namespace starkwg

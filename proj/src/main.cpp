#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "starkwg/config.hpp"
#include "starkwg/errors.hpp"
#include "starkwg/runners.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Bound states and Stark resonances of curved planar quantum "
      "waveguides"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::vector<std::string> checks;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--override", overrides,
                    "Override a scalar config key, e.g. field.F=0.01");
  };

  CLI::App* geometry = app.add_subcommand(
      "geometry-check", "Validate the geometry and field hypotheses");
  add_common(geometry);
  CLI::App* bound = app.add_subcommand(
      "bound-states", "Compute the bound state of the zero-field guide");
  add_common(bound);
  CLI::App* resonance = app.add_subcommand(
      "resonance", "Locate the Stark resonance at one field intensity");
  add_common(resonance);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Sweep the field intensity and fit the width law");
  add_common(sweep);
  CLI::App* validate = app.add_subcommand(
      "validate", "Run the independent cross-checks");
  add_common(validate);
  validate->add_option(
      "--check", checks,
      "Run only the named checks: tilted, airy, weyl, equivalence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    const starkwg::RunConfig cfg =
        starkwg::load_config(config_path, overrides);
    if (geometry->parsed()) return starkwg::run_geometry_check(cfg);
    if (bound->parsed()) return starkwg::run_bound_states(cfg);
    if (resonance->parsed()) return starkwg::run_resonance(cfg);
    if (sweep->parsed()) return starkwg::run_sweep(cfg);
    return starkwg::run_validate(cfg, checks);
  } catch (const starkwg::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 4;
  } catch (const starkwg::HypothesisError& e) {
    std::fprintf(stderr, "hypothesis failure: %s\n", e.what());
    return 2;
  } catch (const starkwg::NoBoundStateError& e) {
    std::fprintf(stderr, "hypothesis failure: %s\n", e.what());
    return 2;
  } catch (const starkwg::SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const starkwg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

#ifndef STARKWG_RUNNERS_HPP
#define STARKWG_RUNNERS_HPP

#include <string>
#include <vector>

#include "starkwg/config.hpp"

namespace starkwg {

// One function per subcommand. Each builds its objects from the parsed
// config, runs, and appends records through the configured sink. Returns 0
// on success; failures propagate as exceptions and the CLI maps them to
// exit codes (2 hypothesis, 3 solver, 4 config).
int run_geometry_check(const RunConfig& cfg);
int run_bound_states(const RunConfig& cfg);
int run_resonance(const RunConfig& cfg);
int run_sweep(const RunConfig& cfg);
// checks: subset of {"tilted", "airy", "weyl", "equivalence"}; empty = all.
int run_validate(const RunConfig& cfg, const std::vector<std::string>& checks);

}  // namespace starkwg

#endif

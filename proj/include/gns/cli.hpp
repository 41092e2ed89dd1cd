#pragma once

#include "gns/evolve.hpp"

#include <string>

namespace gns {

/// Parses the flat `key = value` run configuration. Keys mirror the SimConfig
/// field names exactly; unknown keys are hard errors.
SimConfig parse_sim_config(const std::string& path);
SimConfig parse_sim_config_text(const std::string& text, const std::string& origin);

/// Experiment runner. Subcommands: simulate, picard, verify, lemma4-const,
/// decay. Exit 0 on success with all monitors passing, 2 on monitor failure,
/// 1 on usage or configuration errors.
int run_cli(int argc, const char* const* argv);

}  // namespace gns

#pragma once

#include <string>
#include <vector>

#include "lgas/config.hpp"

namespace lgas {

// Runs the configured experiment and writes its outputs (summary CSV,
// JSON-lines replica records where applicable, manifest) into
// config.out_dir. Returns the list of files written (relative names).
// Throws Error on validation or runtime failure.
std::vector<std::string> run_experiment(const RunConfig& config);

}  // namespace lgas

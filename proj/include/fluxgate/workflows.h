#pragma once

#include <string>

#include "fluxgate/config.h"
#include "fluxgate/csv.h"

namespace fluxgate {

// One line per workflow, in a fixed order, naming the figure or table it reproduces.
std::string list_workflows();

Table run_workflow(const RunConfig& config, unsigned threads);

} // namespace fluxgate

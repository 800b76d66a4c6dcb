#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "percept/intervention.hpp"

namespace percept::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitInternal = 70;

/// Runs one command. `args` excludes the program name. Reports go to
/// `out` (or the --output file), diagnostics to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses an intervention-grid document:
///   {"grids": {"Z": [0, 1]}, "max_order": 1}
/// Throws SchemaError.
InterventionSet parse_grid(std::string_view document);

/// Parses "X=1,Y=-0.5". Throws ValidationError.
InterventionSpec parse_do(std::string_view text);

}  // namespace percept::cli

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "idsm/levy.hpp"
#include "idsm/simulation.hpp"

namespace idsm {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

/// Header `t,X,M,A` plus `,G` when the bundle has a Gaussian part.
void write_paths_csv(std::ostream& out, const PathBundle& path);

/// Header `time,size,v`; v is the mixing-point label.
void write_jumps_csv(std::ostream& out, const std::vector<Jump>& jumps, const ModelSpec& model);

}  // namespace idsm

#pragma once

#include <iosfwd>
#include <string>

#include "eddy/dynamics.hpp"

namespace eddy {

// Plain-text trajectory files: a header of "# key = value" lines describing the
// flow and simulation, a "t,x,y" column line, then one row per stored sample
// with 17 significant digits, so a write/read round trip is exact.

void write_trajectory(std::ostream& out, const Trajectory& traj);
void write_trajectory(const std::string& path, const Trajectory& traj);

/// Throws ConfigError on malformed input. Header keys that are absent keep
/// their SimConfig/FlowSpec defaults; dt_stored is taken from the header when
/// present and otherwise from the spacing of the time column.
Trajectory read_trajectory(std::istream& in);
Trajectory read_trajectory(const std::string& path);

}  // namespace eddy

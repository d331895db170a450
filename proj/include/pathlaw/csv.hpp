#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pathlaw/grid.hpp"

namespace pathlaw {

/// Path CSV: header "s,phi", one row per node, s ascending with uniform
/// spacing (validated on load, 1e-9 relative tolerance).
Path read_path_csv(std::istream& in);
Path read_path_csv_file(const std::string& filename);

void write_path_csv(std::ostream& out, const Path& path);
void write_path_csv_file(const std::string& filename, const Path& path);

/// Long format "ordinal,s,phi" for concatenated multi-path output.
void write_paths_long_csv(std::ostream& out, const std::vector<Path>& paths);

}  // namespace pathlaw

#pragma once

#include <string>
#include <vector>

#include "modgrav/exclusion.hpp"

namespace modgrav {

// Shortest round-trip decimal form, locale-independent ('.' decimal point).
std::string format_double(double value);

// Grid CSV: header "x,y,ratio,excluded", one row per cell, y-major order,
// Unix newlines. Identical inputs produce byte-identical output.
std::string grid_to_csv(const ExclusionGrid& grid);

// Same grid as a JSON document (axes plus row-major value/excluded arrays).
std::string grid_to_json(const ExclusionGrid& grid);

// Boundary lines, screening-onset loci and the convex hull of the excluded
// cells, as a JSON document.
std::string scan_report_json(const ExclusionGrid& grid,
                             const std::vector<BoundaryLine>& boundaries,
                             const BoundaryLine* source_onset,
                             const BoundaryLine* probe_onset,
                             const std::vector<Point>& hull);

// Convex hull of the excluded cells in data coordinates (empty when nothing
// is excluded or the metric has no exclusion semantics).
std::vector<Point> excluded_hull(const ExclusionGrid& grid);

void write_file(const std::string& path, const std::string& contents);

}  // namespace modgrav

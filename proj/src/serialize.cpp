#include "modgrav/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "modgrav/errors.hpp"

namespace modgrav {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string grid_to_csv(const ExclusionGrid& grid) {
    std::string out = "x,y,ratio,excluded\n";
    const bool exclusion = metric_is_exclusion(grid.metric);
    for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            const double v = grid.at(ix, iy);
            const bool excluded = exclusion && std::isfinite(v) && v < 1.0;
            out += format_double(grid.x_axis[size_t(ix)]);
            out += ',';
            out += format_double(grid.y_axis[size_t(iy)]);
            out += ',';
            out += format_double(v);
            out += ',';
            out += excluded ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

std::string grid_to_json(const ExclusionGrid& grid) {
    nlohmann::json doc;
    doc["metric"] = metric_name(grid.metric);
    doc["x"] = grid.x_axis;
    doc["y"] = grid.y_axis;
    const bool exclusion = metric_is_exclusion(grid.metric);
    nlohmann::json rows = nlohmann::json::array();
    nlohmann::json excluded = nlohmann::json::array();
    for (int iy = 0; iy < grid.ny(); ++iy) {
        nlohmann::json row = nlohmann::json::array();
        nlohmann::json erow = nlohmann::json::array();
        for (int ix = 0; ix < grid.nx(); ++ix) {
            const double v = grid.at(ix, iy);
            // NaN has no JSON literal; emit it as a string marker.
            if (std::isfinite(v))
                row.push_back(v);
            else
                row.push_back(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
            erow.push_back(exclusion && std::isfinite(v) && v < 1.0);
        }
        rows.push_back(row);
        excluded.push_back(erow);
    }
    doc["ratio"] = rows;
    doc["excluded"] = excluded;
    return doc.dump(2) + "\n";
}

std::vector<Point> excluded_hull(const ExclusionGrid& grid) {
    if (!metric_is_exclusion(grid.metric)) return {};
    std::vector<Point> excluded;
    for (int iy = 0; iy < grid.ny(); ++iy)
        for (int ix = 0; ix < grid.nx(); ++ix) {
            const double v = grid.at(ix, iy);
            if (std::isfinite(v) && v < 1.0)
                excluded.push_back(Point{grid.x_axis[size_t(ix)], grid.y_axis[size_t(iy)]});
        }
    if (excluded.empty()) return {};
    return convex_hull(excluded);
}

namespace {

nlohmann::json points_json(const std::vector<Point>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Point& p : pts) arr.push_back({p.x, p.y});
    return arr;
}

nlohmann::json line_json(const BoundaryLine& line) {
    return nlohmann::json{{"level", line.level}, {"vertices", points_json(line.vertices)}};
}

}  // namespace

std::string scan_report_json(const ExclusionGrid& grid,
                             const std::vector<BoundaryLine>& boundaries,
                             const BoundaryLine* source_onset,
                             const BoundaryLine* probe_onset,
                             const std::vector<Point>& hull) {
    nlohmann::json doc;
    doc["metric"] = metric_name(grid.metric);
    doc["probe_screening"] = grid.probe_screening;
    doc["nx"] = grid.nx();
    doc["ny"] = grid.ny();
    doc["annotated_cells"] = nlohmann::json::array();
    for (const CellNote& note : grid.notes)
        doc["annotated_cells"].push_back(
            {{"ix", note.ix}, {"iy", note.iy}, {"message", note.message}});
    doc["boundaries"] = nlohmann::json::array();
    for (const BoundaryLine& line : boundaries) doc["boundaries"].push_back(line_json(line));
    if (source_onset) doc["screening_onset_source"] = line_json(*source_onset);
    if (probe_onset) doc["screening_onset_probe"] = line_json(*probe_onset);
    doc["hull"] = points_json(hull);
    return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot open output file '" + path + "'");
    out << contents;
    if (!out) throw validation_error("failed writing output file '" + path + "'");
}

}  // namespace modgrav

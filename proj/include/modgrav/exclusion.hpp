#pragma once

#include <string>
#include <vector>

#include "modgrav/chameleon.hpp"
#include "modgrav/forces.hpp"
#include "modgrav/optomech.hpp"

namespace modgrav {

enum class ScanMetric {
    sigma_const,  // ds / sigma
    sigma_mod,    // ds_mod / sigma
    kappa_const,  // dk / kappa
    kappa_mod,    // dk_mod / kappa
    force_ratio,  // epsilon * sigma  (modification / Newtonian force)
};

bool metric_is_exclusion(ScanMetric metric);
const char* metric_name(ScanMetric metric);
ScanMetric metric_from_name(const std::string& name);

// Log-spaced grid over [x_min, x_max] x [y_min, y_max], endpoints included.
struct GridSpec {
    double x_min, x_max;
    double y_min, y_max;
    int nx = 200;
    int ny = 200;

    void validate() const;
};

struct CellNote {
    int ix, iy;
    std::string message;
};

// Result of a parameter-space scan. values is row-major (iy * nx + ix);
// cells whose evaluation failed hold NaN and carry a note.
struct ExclusionGrid {
    std::vector<double> x_axis;  // lambda in m, or M / M_P
    std::vector<double> y_axis;  // alpha, or Lambda in eV
    std::vector<double> values;
    ScanMetric metric = ScanMetric::sigma_mod;
    bool probe_screening = false;
    std::vector<CellNote> notes;

    int nx() const { return int(x_axis.size()); }
    int ny() const { return int(y_axis.size()); }
    double at(int ix, int iy) const { return values[size_t(iy) * x_axis.size() + ix]; }
};

struct Point {
    double x, y;
};

// Polyline in data coordinates; level 1 marks the exclusion contour, level 0
// the screening-onset loci.
struct BoundaryLine {
    std::vector<Point> vertices;
    double level = 1.0;
};

// Value of one (alpha, lambda) cell; the scan is a pure map of this.
double yukawa_cell_value(const ExperimentSetup& setup, const SensitivitySet& sens,
                         ScanMetric metric, double alpha, double lambda_m);

// Value of one (M, Lambda) cell, optionally with probe screening.
double chameleon_cell_value(const ExperimentSetup& setup, const SensitivitySet& sens,
                            ScanMetric metric, const ChameleonModel& model,
                            bool probe_screening);

// workers = 0 resolves MODGRAV_THREADS, then hardware concurrency. Results
// are identical for any worker count.
ExclusionGrid scan_yukawa(const ExperimentSetup& setup, const OptomechConfig& cfg,
                          const GridSpec& spec, ScanMetric metric, int workers = 0);

struct ChameleonScan {
    ExclusionGrid grid;
    BoundaryLine source_onset;  // S_S = 0 locus
    BoundaryLine probe_onset;   // S_P = 0 locus
};

ChameleonScan scan_chameleon(const ExperimentSetup& setup, const OptomechConfig& cfg,
                             const GridSpec& spec, ScanMetric metric, bool probe_screening,
                             int workers = 0);

// Marching-squares level set. Positions and crossings are interpolated in
// log10 coordinates; non-finite cells count as above-level.
std::vector<BoundaryLine> extract_boundary(const ExclusionGrid& grid, double level);

// Counter-clockwise convex hull, computed in log10 coordinates; collinear
// vertices are dropped.
std::vector<Point> convex_hull(const std::vector<Point>& points);

int resolve_workers(int requested);

}  // namespace modgrav

#include "modgrav/exclusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <thread>

#include "modgrav/errors.hpp"
#include "modgrav/units.hpp"

namespace modgrav {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(static_cast<size_t>(n));
    const double llo = std::log10(lo);
    const double lhi = std::log10(hi);
    for (int i = 0; i < n; ++i)
        out[size_t(i)] = std::pow(10.0, llo + (lhi - llo) * double(i) / double(n - 1));
    return out;
}

double ratio_for_metric(const SensitivitySet& sens, ScanMetric metric,
                        const LinearizedCoefficients& lin, double epsilon) {
    switch (metric) {
        case ScanMetric::sigma_const: return sens.ds_const / lin.sigma;
        case ScanMetric::sigma_mod: return sens.ds_mod / lin.sigma;
        case ScanMetric::kappa_const: return sens.dk_const / lin.kappa;
        case ScanMetric::kappa_mod: return sens.dk_mod / lin.kappa;
        case ScanMetric::force_ratio: return epsilon * lin.sigma;
    }
    throw validation_error("unknown scan metric");
}

// Row-parallel map over the grid; every cell is written exactly once, so the
// result is independent of the worker count.
template <typename CellFn>
ExclusionGrid run_scan(const GridSpec& spec, ScanMetric metric, bool probe_screening,
                       int workers, CellFn&& cell) {
    spec.validate();
    ExclusionGrid grid;
    grid.metric = metric;
    grid.probe_screening = probe_screening;
    grid.x_axis = log_spaced(spec.x_min, spec.x_max, spec.nx);
    grid.y_axis = log_spaced(spec.y_min, spec.y_max, spec.ny);
    grid.values.assign(size_t(spec.nx) * size_t(spec.ny), kNaN);

    const int n_workers = std::min(resolve_workers(workers), spec.ny);
    std::vector<std::vector<CellNote>> notes(static_cast<size_t>(n_workers));

    auto worker = [&](int w) {
        for (int iy = w; iy < spec.ny; iy += n_workers) {
            for (int ix = 0; ix < spec.nx; ++ix) {
                try {
                    grid.values[size_t(iy) * size_t(spec.nx) + ix] =
                        cell(grid.x_axis[size_t(ix)], grid.y_axis[size_t(iy)]);
                } catch (const std::exception& e) {
                    notes[size_t(w)].push_back(CellNote{ix, iy, e.what()});
                }
            }
        }
    };

    if (n_workers <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(size_t(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }

    for (auto& list : notes)
        grid.notes.insert(grid.notes.end(), list.begin(), list.end());
    std::sort(grid.notes.begin(), grid.notes.end(), [](const CellNote& a, const CellNote& b) {
        return a.iy != b.iy ? a.iy < b.iy : a.ix < b.ix;
    });
    return grid;
}

}  // namespace

bool metric_is_exclusion(ScanMetric metric) { return metric != ScanMetric::force_ratio; }

const char* metric_name(ScanMetric metric) {
    switch (metric) {
        case ScanMetric::sigma_const: return "sigma_const";
        case ScanMetric::sigma_mod: return "sigma_mod";
        case ScanMetric::kappa_const: return "kappa_const";
        case ScanMetric::kappa_mod: return "kappa_mod";
        case ScanMetric::force_ratio: return "force_ratio";
    }
    return "unknown";
}

ScanMetric metric_from_name(const std::string& name) {
    if (name == "sigma_const") return ScanMetric::sigma_const;
    if (name == "sigma_mod") return ScanMetric::sigma_mod;
    if (name == "kappa_const") return ScanMetric::kappa_const;
    if (name == "kappa_mod") return ScanMetric::kappa_mod;
    if (name == "force_ratio") return ScanMetric::force_ratio;
    throw validation_error("unknown metric '" + name + "'");
}

void GridSpec::validate() const {
    if (!(x_min > 0.0 && y_min > 0.0))
        throw validation_error("GridSpec: axes must be positive (log-spaced)");
    if (!(x_max > x_min) || !(y_max > y_min))
        throw validation_error("GridSpec: max must exceed min on both axes");
    if (nx < 2 || ny < 2) throw validation_error("GridSpec: need at least 2 points per axis");
}

double yukawa_cell_value(const ExperimentSetup& setup, const SensitivitySet& sens,
                         ScanMetric metric, double alpha, double lambda_m) {
    const LinearizedCoefficients lin =
        linearized_coefficients(setup, alpha, lambda_m, /*probe_screened=*/false);
    return ratio_for_metric(sens, metric, lin, setup.epsilon);
}

double chameleon_cell_value(const ExperimentSetup& setup, const SensitivitySet& sens,
                            ScanMetric metric, const ChameleonModel& model,
                            bool probe_screening) {
    const EffectiveYukawa yuk = effective_yukawa(model, setup.source, setup.probe,
                                                 setup.rho_bg_kg_m3, probe_screening);
    const LinearizedCoefficients lin =
        linearized_coefficients(setup, yuk.alpha, yuk.range_m, probe_screening);
    return ratio_for_metric(sens, metric, lin, setup.epsilon);
}

ExclusionGrid scan_yukawa(const ExperimentSetup& setup, const OptomechConfig& cfg,
                          const GridSpec& spec, ScanMetric metric, int workers) {
    const SensitivitySet sens =
        closed_form_sensitivities(cfg, setup.newtonian_acceleration(), setup.epsilon);
    return run_scan(spec, metric, false, workers, [&](double lambda_m, double alpha) {
        return yukawa_cell_value(setup, sens, metric, alpha, lambda_m);
    });
}

ChameleonScan scan_chameleon(const ExperimentSetup& setup, const OptomechConfig& cfg,
                             const GridSpec& spec, ScanMetric metric, bool probe_screening,
                             int workers) {
    const SensitivitySet sens =
        closed_form_sensitivities(cfg, setup.newtonian_acceleration(), setup.epsilon);
    const double planck_eV = units::constants().reduced_planck_mass_eV;

    ChameleonScan scan;
    scan.grid = run_scan(spec, metric, probe_screening, workers,
                         [&](double m_over_mp, double lambda_eV) {
                             const ChameleonModel model(m_over_mp * planck_eV, lambda_eV);
                             return chameleon_cell_value(setup, sens, metric, model,
                                                         probe_screening);
                         });

    scan.source_onset.level = 0.0;
    scan.probe_onset.level = 0.0;
    for (double m_over_mp : scan.grid.x_axis) {
        const double m_eV = m_over_mp * planck_eV;
        const double l_src =
            screening_onset_energy_scale(setup.source, m_eV, setup.rho_bg_kg_m3);
        if (l_src >= spec.y_min && l_src <= spec.y_max)
            scan.source_onset.vertices.push_back(Point{m_over_mp, l_src});
        const double l_prb =
            screening_onset_energy_scale(setup.probe, m_eV, setup.rho_bg_kg_m3);
        if (l_prb >= spec.y_min && l_prb <= spec.y_max)
            scan.probe_onset.vertices.push_back(Point{m_over_mp, l_prb});
    }
    return scan;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MODGRAV_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

// ---------------------------------------------------------------------------
// Marching squares
// ---------------------------------------------------------------------------

namespace {

struct EdgeKey {
    // Horizontal edges join (i, j)-(i+1, j); vertical join (i, j)-(i, j+1).
    bool horizontal;
    int i, j;

    bool operator<(const EdgeKey& o) const {
        if (horizontal != o.horizontal) return horizontal < o.horizontal;
        if (j != o.j) return j < o.j;
        return i < o.i;
    }
};

struct Segment {
    EdgeKey a, b;
};

class ContourBuilder {
public:
    ContourBuilder(const ExclusionGrid& grid, double level)
        : grid_(grid), level_(level), log_level_(std::log10(level)) {
        lx_.reserve(grid.x_axis.size());
        for (double v : grid.x_axis) lx_.push_back(std::log10(v));
        ly_.reserve(grid.y_axis.size());
        for (double v : grid.y_axis) ly_.push_back(std::log10(v));
    }

    std::vector<BoundaryLine> run() {
        collect_segments();
        return stitch();
    }

private:
    bool inside(double v) const { return std::isfinite(v) && v < level_; }

    // Fraction along the edge (from the lower-indexed end) where the level is
    // crossed. Interpolates log-values; falls back to linear, then to the
    // midpoint, when a corner is non-positive or non-finite.
    double crossing(double va, double vb) const {
        if (std::isfinite(va) && std::isfinite(vb) && va > 0.0 && vb > 0.0) {
            const double t = (log_level_ - std::log10(va)) / (std::log10(vb) - std::log10(va));
            return std::clamp(t, 0.0, 1.0);
        }
        if (std::isfinite(va) && std::isfinite(vb) && va != vb)
            return std::clamp((level_ - va) / (vb - va), 0.0, 1.0);
        return 0.5;
    }

    Point edge_point(const EdgeKey& e) const {
        const double va = grid_.at(e.i, e.j);
        if (e.horizontal) {
            const double t = crossing(va, grid_.at(e.i + 1, e.j));
            return Point{std::pow(10.0, lx_[size_t(e.i)] +
                                            t * (lx_[size_t(e.i) + 1] - lx_[size_t(e.i)])),
                         grid_.y_axis[size_t(e.j)]};
        }
        const double t = crossing(va, grid_.at(e.i, e.j + 1));
        return Point{grid_.x_axis[size_t(e.i)],
                     std::pow(10.0,
                              ly_[size_t(e.j)] + t * (ly_[size_t(e.j) + 1] - ly_[size_t(e.j)]))};
    }

    void collect_segments() {
        for (int j = 0; j + 1 < grid_.ny(); ++j) {
            for (int i = 0; i + 1 < grid_.nx(); ++i) {
                const bool b00 = inside(grid_.at(i, j));
                const bool b10 = inside(grid_.at(i + 1, j));
                const bool b11 = inside(grid_.at(i + 1, j + 1));
                const bool b01 = inside(grid_.at(i, j + 1));
                const int count = int(b00) + int(b10) + int(b11) + int(b01);
                if (count == 0 || count == 4) continue;

                const EdgeKey bottom{true, i, j};
                const EdgeKey top{true, i, j + 1};
                const EdgeKey left{false, i, j};
                const EdgeKey right{false, i + 1, j};

                const bool saddle = (count == 2) && (b00 == b11) && (b10 == b01);
                if (saddle) {
                    // Pair the crossings using the cell-centre log value.
                    bool centre_in = false;
                    double sum = 0.0;
                    int finite = 0;
                    for (double v : {grid_.at(i, j), grid_.at(i + 1, j), grid_.at(i + 1, j + 1),
                                     grid_.at(i, j + 1)}) {
                        if (std::isfinite(v) && v > 0.0) {
                            sum += std::log10(v);
                            ++finite;
                        } else {
                            finite = -1;
                            break;
                        }
                    }
                    if (finite == 4) centre_in = sum / 4.0 < log_level_;
                    if (b00 == centre_in) {
                        segments_.push_back(Segment{left, top});
                        segments_.push_back(Segment{bottom, right});
                    } else {
                        segments_.push_back(Segment{left, bottom});
                        segments_.push_back(Segment{top, right});
                    }
                    continue;
                }

                std::vector<EdgeKey> cut;
                if (b00 != b10) cut.push_back(bottom);
                if (b10 != b11) cut.push_back(right);
                if (b01 != b11) cut.push_back(top);
                if (b00 != b01) cut.push_back(left);
                segments_.push_back(Segment{cut[0], cut[1]});
            }
        }
    }

    std::vector<BoundaryLine> stitch() {
        std::map<EdgeKey, std::vector<size_t>> by_edge;
        for (size_t s = 0; s < segments_.size(); ++s) {
            by_edge[segments_[s].a].push_back(s);
            by_edge[segments_[s].b].push_back(s);
        }

        std::vector<bool> used(segments_.size(), false);
        std::vector<BoundaryLine> lines;

        auto walk = [&](size_t start, const EdgeKey& from) {
            BoundaryLine line;
            line.level = level_;
            EdgeKey cur = from;
            size_t seg = start;
            line.vertices.push_back(edge_point(cur));
            while (true) {
                used[seg] = true;
                const EdgeKey next =
                    (segments_[seg].a < cur || cur < segments_[seg].a) ? segments_[seg].a
                                                                       : segments_[seg].b;
                line.vertices.push_back(edge_point(next));
                cur = next;
                size_t chosen = segments_.size();
                for (size_t cand : by_edge[cur])
                    if (!used[cand]) {
                        chosen = cand;
                        break;
                    }
                if (chosen == segments_.size()) break;
                seg = chosen;
            }
            return line;
        };

        // Open chains first (edges touched by a single segment), then loops.
        for (auto& [edge, segs] : by_edge) {
            if (segs.size() != 1) continue;
            if (!used[segs[0]]) lines.push_back(walk(segs[0], edge));
        }
        for (size_t s = 0; s < segments_.size(); ++s)
            if (!used[s]) lines.push_back(walk(s, segments_[s].a));
        return lines;
    }

    const ExclusionGrid& grid_;
    double level_;
    double log_level_;
    std::vector<double> lx_, ly_;
    std::vector<Segment> segments_;
};

}  // namespace

std::vector<BoundaryLine> extract_boundary(const ExclusionGrid& grid, double level) {
    if (!(level > 0.0)) throw validation_error("extract_boundary: level must be positive");
    if (grid.nx() < 2 || grid.ny() < 2)
        throw validation_error("extract_boundary: grid too small");
    return ContourBuilder(grid, level).run();
}

// ---------------------------------------------------------------------------
// Convex hull (monotone chain in log coordinates)
// ---------------------------------------------------------------------------

std::vector<Point> convex_hull(const std::vector<Point>& points) {
    if (points.empty()) throw validation_error("convex_hull: no input points");
    struct LogPoint {
        double lx, ly;
        size_t idx;
    };
    std::vector<LogPoint> pts;
    pts.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].x > 0.0) || !(points[i].y > 0.0))
            throw validation_error("convex_hull: coordinates must be positive");
        pts.push_back(LogPoint{std::log10(points[i].x), std::log10(points[i].y), i});
    }
    std::sort(pts.begin(), pts.end(), [](const LogPoint& a, const LogPoint& b) {
        return a.lx != b.lx ? a.lx < b.lx : a.ly < b.ly;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const LogPoint& a, const LogPoint& b) {
                              return a.lx == b.lx && a.ly == b.ly;
                          }),
              pts.end());

    if (pts.size() == 1) return {points[pts[0].idx]};

    constexpr double kCollinearTol = 1e-12;
    auto cross = [](const LogPoint& o, const LogPoint& a, const LogPoint& b) {
        return (a.lx - o.lx) * (b.ly - o.ly) - (a.ly - o.ly) * (b.lx - o.lx);
    };

    std::vector<LogPoint> hull(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= kCollinearTol) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= kCollinearTol) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);  // last point repeats the first

    std::vector<Point> out;
    out.reserve(hull.size());
    for (const auto& p : hull) out.push_back(points[p.idx]);
    return out;
}

}  // namespace modgrav

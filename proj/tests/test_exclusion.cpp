#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <set>

#include "modgrav/errors.hpp"
#include "modgrav/exclusion.hpp"
#include "modgrav/serialize.hpp"
#include "modgrav/units.hpp"

using namespace modgrav;

namespace {

double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

ExperimentSetup reference_setup() {
    return ExperimentSetup(1e-3, 0.1, 2.0 * M_PI * 100.0, M_PI,
                           SphereBody::from_mass_density(1e-6, 19.3e3),
                           SphereBody::from_mass_density(1e-14, 1538.0), 8.27e-14);
}

OptomechConfig reference_optomech() {
    OptomechConfig cfg{};
    cfg.omega_mech = 2.0 * M_PI * 100.0;
    cfg.k0 = 2.0 * M_PI * 10.0;
    cfg.probe_mass_kg = 1e-14;
    cfg.coherent_amplitude = {1e3, 0.0};
    cfg.squeezing_amplitude = 1.73;
    cfg.squeezing_phase = M_PI;
    cfg.thermal_parameter = 10.0;
    cfg.cycles = 10;
    cfg.measurements = 1000;
    return cfg;
}

}  // namespace

TEST_CASE("per-cell pipeline values") {
    const ExperimentSetup setup = reference_setup();
    const SensitivitySet sens =
        closed_form_sensitivities(reference_optomech(), setup.newtonian_acceleration(), 0.1);

    SUBCASE("no signal at alpha = 0") {
        CHECK_FALSE(std::isfinite(
            yukawa_cell_value(setup, sens, ScanMetric::sigma_mod, 0.0, 1.0)));
    }
    SUBCASE("long range, alpha = 1e-3 is excluded") {
        const double ratio = yukawa_cell_value(setup, sens, ScanMetric::sigma_mod, 1e-3, 1.0);
        CHECK(ratio < 1.0);
        CHECK(ratio > 0.5);  // sigma ~ 2e-3 vs ds_mod ~ 1.73e-3
    }
    SUBCASE("short range is invisible") {
        const double ratio =
            yukawa_cell_value(setup, sens, ScanMetric::sigma_mod, 1e4, setup.x0_m / 50.0);
        CHECK(ratio > 1.0);
    }
    SUBCASE("force_ratio metric returns epsilon sigma") {
        const double v = yukawa_cell_value(setup, sens, ScanMetric::force_ratio, 1e-3, 1.0);
        const LinearizedCoefficients lin = linearized_coefficients(setup, 1e-3, 1.0, false);
        CHECK(rel_err(v, 0.1 * lin.sigma) < 1e-14);
    }
}

TEST_CASE("yukawa scan: determinism, reproducibility, exclusion nesting") {
    const ExperimentSetup setup = reference_setup();
    const OptomechConfig cfg = reference_optomech();
    GridSpec spec{1e-6, 1.0, 1e-6, 1e10, 41, 33};

    const ExclusionGrid one = scan_yukawa(setup, cfg, spec, ScanMetric::sigma_mod, 1);
    const ExclusionGrid four = scan_yukawa(setup, cfg, spec, ScanMetric::sigma_mod, 4);
    REQUIRE(one.values.size() == four.values.size());
    for (size_t i = 1; i < one.x_axis.size(); ++i) CHECK(one.x_axis[i] > one.x_axis[i - 1]);
    for (size_t i = 1; i < one.y_axis.size(); ++i) CHECK(one.y_axis[i] > one.y_axis[i - 1]);
    CHECK(std::memcmp(one.values.data(), four.values.data(),
                      one.values.size() * sizeof(double)) == 0);
    CHECK(grid_to_csv(one) == grid_to_csv(four));

    const SensitivitySet sens =
        closed_form_sensitivities(cfg, setup.newtonian_acceleration(), setup.epsilon);
    // The scan is a pure map of the per-cell pipeline.
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dx(0, spec.nx - 1), dy(0, spec.ny - 1);
    for (int i = 0; i < 25; ++i) {
        const int ix = dx(rng), iy = dy(rng);
        const double direct = yukawa_cell_value(setup, sens, ScanMetric::sigma_mod,
                                                one.y_axis[iy], one.x_axis[ix]);
        CHECK(one.at(ix, iy) == direct);
    }

    const ExclusionGrid strict = scan_yukawa(setup, cfg, spec, ScanMetric::sigma_const, 2);
    REQUIRE(sens.ds_mod < sens.ds_const);
    for (size_t i = 0; i < one.values.size(); ++i) {
        const bool excl_const = std::isfinite(strict.values[i]) && strict.values[i] < 1.0;
        const bool excl_mod = std::isfinite(one.values[i]) && one.values[i] < 1.0;
        if (excl_const) CHECK(excl_mod);
    }
}

TEST_CASE("chameleon scan basics") {
    const ExperimentSetup setup = reference_setup();
    const OptomechConfig cfg = reference_optomech();

    SUBCASE("2x2 smoke grid") {
        GridSpec tiny{1e-2, 1.0, 1e-4, 1e-2, 2, 2};
        const ChameleonScan scan =
            scan_chameleon(setup, cfg, tiny, ScanMetric::sigma_mod, false, 1);
        CHECK(scan.grid.values.size() == 4);
        CHECK(scan.grid.nx() == 2);
    }

    SUBCASE("probe screening only matters below the probe-onset line") {
        GridSpec spec{1e-2, 1e2, 1e-9, 1e-2, 21, 25};
        const ChameleonScan off =
            scan_chameleon(setup, cfg, spec, ScanMetric::sigma_mod, false, 2);
        const ChameleonScan on =
            scan_chameleon(setup, cfg, spec, ScanMetric::sigma_mod, true, 2);
        const double planck = units::constants().reduced_planck_mass_eV;
        int compared_above = 0, compared_below = 0;
        for (int ix = 0; ix < spec.nx; ++ix) {
            const double m_eV = off.grid.x_axis[ix] * planck;
            const double probe_onset =
                screening_onset_energy_scale(setup.probe, m_eV, setup.rho_bg_kg_m3);
            const double source_onset =
                screening_onset_energy_scale(setup.source, m_eV, setup.rho_bg_kg_m3);
            for (int iy = 0; iy < spec.ny; ++iy) {
                const double a = off.grid.at(ix, iy);
                const double b = on.grid.at(ix, iy);
                if (!std::isfinite(a) || !std::isfinite(b)) continue;
                // The finite-probe form factor leaves a residue of order
                // 2 R_P^2 / (lambda_bg x0) ~ 1e-11 at the onset line itself.
                if (off.grid.y_axis[iy] > probe_onset * 1.05) {
                    CHECK(rel_err(a, b) < 1e-9);
                    ++compared_above;
                } else if (off.grid.y_axis[iy] < source_onset * 0.95) {
                    // xi <= 1 only weakens the signal.
                    CHECK(b >= a * (1.0 - 1e-9));
                    ++compared_below;
                }
            }
        }
        CHECK(compared_above > 50);
        CHECK(compared_below > 20);
    }

    SUBCASE("onset loci sit on the screened/unscreened transition") {
        GridSpec spec{1e-2, 1e2, 1e-9, 1e-2, 9, 9};
        const ChameleonScan scan =
            scan_chameleon(setup, cfg, spec, ScanMetric::sigma_mod, true, 1);
        CHECK(scan.source_onset.level == 0.0);
        CHECK_FALSE(scan.source_onset.vertices.empty());
        const double planck = units::constants().reduced_planck_mass_eV;
        for (const Point& p : scan.source_onset.vertices) {
            const ChameleonModel just_above(p.x * planck, p.y * 1.0001);
            const ChameleonModel just_below(p.x * planck, p.y * 0.9999);
            CHECK_FALSE(screening_radius(setup.source, just_above,
                                         background_state(just_above, setup.rho_bg_kg_m3))
                            .screened);
            CHECK(screening_radius(setup.source, just_below,
                                   background_state(just_below, setup.rho_bg_kg_m3))
                      .screened);
        }
    }
}

TEST_CASE("boundary extraction") {
    SUBCASE("flat grid above the level gives nothing") {
        ExclusionGrid grid;
        grid.x_axis = {1.0, 10.0, 100.0};
        grid.y_axis = {1.0, 10.0};
        grid.values = {5.0, 5.0, 5.0, 5.0, 5.0, 5.0};
        CHECK(extract_boundary(grid, 1.0).empty());
    }

    SUBCASE("power-law ramp crosses at the exact interpolated position") {
        ExclusionGrid grid;
        const int n = 9;
        for (int i = 0; i < n; ++i) grid.x_axis.push_back(std::pow(10.0, -4.0 + i));
        grid.y_axis = {1.0, 10.0, 100.0};
        const double x_star = 3.1623e-3;
        for (int iy = 0; iy < 3; ++iy)
            for (int ix = 0; ix < n; ++ix)
                grid.values.push_back(grid.x_axis[ix] / x_star);  // log-linear ramp
        const auto lines = extract_boundary(grid, 1.0);
        REQUIRE(lines.size() == 1);
        CHECK(lines[0].vertices.size() >= 3);
        for (const Point& p : lines[0].vertices) CHECK(rel_err(p.x, x_star) < 1e-9);
    }

    SUBCASE("synthetic radial field matches the circle oracle") {
        ExclusionGrid grid;
        const int n = 256;
        for (int i = 0; i < n; ++i) {
            grid.x_axis.push_back(std::pow(10.0, -2.0 + 4.0 * i / (n - 1.0)));
            grid.y_axis.push_back(std::pow(10.0, -2.0 + 4.0 * i / (n - 1.0)));
        }
        grid.values.resize(size_t(n) * n);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double lx = std::log10(grid.x_axis[ix]);
                const double ly = std::log10(grid.y_axis[iy]);
                grid.values[size_t(iy) * n + ix] = std::hypot(lx, ly);  // r / r0, r0 = 1
            }
        const double level = 0.8;
        const auto lines = extract_boundary(grid, level);
        REQUIRE_FALSE(lines.empty());
        size_t total = 0;
        for (const auto& line : lines) {
            for (const Point& p : line.vertices) {
                const double r = std::hypot(std::log10(p.x), std::log10(p.y));
                CHECK(rel_err(r, level) < 0.01);
                ++total;
            }
        }
        CHECK(total > 100);
    }

    SUBCASE("non-finite cells count as above-level") {
        ExclusionGrid grid;
        grid.x_axis = {1.0, 10.0, 100.0};
        grid.y_axis = {1.0, 10.0, 100.0};
        const double nan = std::numeric_limits<double>::quiet_NaN();
        grid.values = {0.5, 0.5, 0.5, 0.5, nan, 0.5, 0.5, 0.5, 0.5};
        const auto lines = extract_boundary(grid, 1.0);
        // A contour now surrounds the poisoned cell.
        CHECK_FALSE(lines.empty());
        for (const auto& line : lines)
            for (const Point& p : line.vertices) {
                CHECK(std::isfinite(p.x));
                CHECK(std::isfinite(p.y));
            }
    }
}

TEST_CASE("convex hull") {
    SUBCASE("rejects empty input") {
        CHECK_THROWS_AS(convex_hull({}), validation_error);
    }
    SUBCASE("triangle is its own hull") {
        const std::vector<Point> tri = {{1.0, 1.0}, {10.0, 1.0}, {1.0, 10.0}};
        const auto hull = convex_hull(tri);
        CHECK(hull.size() == 3);
    }
    SUBCASE("collinear points collapse to a segment") {
        // Collinear in log space: a power law y = x^2.
        const std::vector<Point> line = {{1.0, 1.0}, {10.0, 100.0}, {100.0, 1e4}, {1e3, 1e6}};
        const auto hull = convex_hull(line);
        REQUIRE(hull.size() == 2);
        const std::set<double> xs{hull[0].x, hull[1].x};
        CHECK(xs.count(1.0) == 1);
        CHECK(xs.count(1e3) == 1);
    }
    SUBCASE("matches the brute-force half-plane oracle on random input") {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        std::vector<Point> pts;
        for (int i = 0; i < 200; ++i)
            pts.push_back(Point{std::pow(10.0, u(rng)), std::pow(10.0, u(rng))});

        const auto hull = convex_hull(pts);
        REQUIRE(hull.size() >= 3);

        // Oracle: a point is a hull vertex iff some directed line through it
        // and another point keeps every remaining point weakly on the left.
        auto lg = [](const Point& p) { return std::pair{std::log10(p.x), std::log10(p.y)}; };
        std::set<std::pair<double, double>> expected;
        for (size_t i = 0; i < pts.size(); ++i) {
            for (size_t j = 0; j < pts.size(); ++j) {
                if (i == j) continue;
                const auto [ax, ay] = lg(pts[i]);
                const auto [bx, by] = lg(pts[j]);
                bool all_left = true;
                for (size_t m = 0; m < pts.size() && all_left; ++m) {
                    if (m == i || m == j) continue;
                    const auto [cx, cy] = lg(pts[m]);
                    if ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax) < -1e-12)
                        all_left = false;
                }
                if (all_left) {
                    expected.insert({ax, ay});
                    expected.insert({bx, by});
                }
            }
        }
        std::set<std::pair<double, double>> got;
        for (const Point& p : hull) got.insert(lg(p));
        CHECK(got == expected);

        // Convexity and containment in log space.
        for (size_t h = 0; h < hull.size(); ++h) {
            const auto [ax, ay] = lg(hull[h]);
            const auto [bx, by] = lg(hull[(h + 1) % hull.size()]);
            for (const Point& p : pts) {
                const auto [cx, cy] = lg(p);
                CHECK((bx - ax) * (cy - ay) - (by - ay) * (cx - ax) >= -1e-12);
            }
        }
    }
}

TEST_CASE("csv serialization is stable and annotated cells round-trip") {
    ExclusionGrid grid;
    grid.x_axis = {1e-3, 1.0};
    grid.y_axis = {1e-2, 1e2};
    grid.values = {0.5, 2.0, std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::quiet_NaN()};
    grid.metric = ScanMetric::sigma_mod;
    const std::string csv = grid_to_csv(grid);
    CHECK(csv == "x,y,ratio,excluded\n"
                 "0.001,0.01,0.5,1\n"
                 "1,0.01,2,0\n"
                 "0.001,100,inf,0\n"
                 "1,100,nan,0\n");
    CHECK(grid_to_csv(grid) == csv);

    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e10) == "1e+10");
    // Round-trip at full precision.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double v = std::ldexp(u(rng), int(u(rng) * 60));
        CHECK(std::stod(format_double(v)) == v);
    }
}

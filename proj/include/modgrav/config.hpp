#pragma once

#include <string>

#include "modgrav/exclusion.hpp"
#include "modgrav/forces.hpp"
#include "modgrav/optomech.hpp"

namespace modgrav {

// Scan ranges; NaN bounds mean "use the per-command default".
struct ScanSettings {
    double x_min, x_max, y_min, y_max;
    int nx = 200;
    int ny = 200;
    ScanMetric metric = ScanMetric::sigma_mod;
    bool probe_screening = false;
};

struct OutputSettings {
    std::string format = "csv";  // grid file format: csv or json
    std::string path;            // base path; empty = per-command default
};

// One fully validated run description. Defaults reproduce the reference
// configuration: gold source sphere (1 mg), silica probe (1e-14 kg), 1 mm
// separation, 10% drive amplitude, squeezed light with |mu_c|^2 = 1e6.
struct RunConfig {
    SphereBody source;
    SphereBody probe;
    double rho_bg_kg_m3;
    double x0_m;
    double epsilon;
    double omega0;  // rad/s
    double phi0;    // rad
    OptomechConfig optomech;
    double model_coupling_over_planck;
    double model_energy_scale_eV;
    ScanSettings scan;
    OutputSettings output;

    ExperimentSetup setup() const;
};

RunConfig default_config();

// Parses and validates a JSON config; absent fields keep their defaults. An
// empty document is allowed and yields the default run.
RunConfig parse_config(const std::string& text);

// Reads the file at `path` and parses it. Missing file -> validation error.
RunConfig load_config(const std::string& path);

}  // namespace modgrav

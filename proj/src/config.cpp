#include "modgrav/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "modgrav/errors.hpp"
#include "modgrav/units.hpp"

namespace modgrav {

namespace {

using nlohmann::json;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw validation_error("config: " + field + ": " + what);
}

void require_object(const json& j, const std::string& name) {
    if (!j.is_object()) fail(name, "must be an object");
}

void reject_unknown(const json& j, const std::string& section,
                    std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) fail(section + "." + it.key(), "unknown key");
    }
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "must be a number");
    return j.get<double>();
}

std::optional<double> opt_number(const json& section, const std::string& prefix,
                                 const char* key) {
    if (!section.contains(key)) return std::nullopt;
    return number(section.at(key), prefix + "." + key);
}

double positive(const json& section, const std::string& prefix, const char* key,
                double fallback) {
    const auto v = opt_number(section, prefix, key);
    if (!v) return fallback;
    if (!(*v > 0.0)) fail(prefix + "." + std::string(key), "must be positive");
    return *v;
}

SphereBody parse_body(const json& root, const std::string& name, const SphereBody& fallback) {
    if (!root.contains(name)) return fallback;
    const json& sec = root.at(name);
    require_object(sec, name);
    reject_unknown(sec, name, {"mass", "radius", "density"});
    const auto mass = opt_number(sec, name, "mass");
    const auto radius = opt_number(sec, name, "radius");
    const auto density = opt_number(sec, name, "density");
    for (const auto& [key, v] : {std::pair{"mass", mass}, {"radius", radius},
                                 {"density", density}})
        if (v && !(*v > 0.0)) fail(name + "." + key, "must be positive");
    try {
        if (mass && radius && density) return SphereBody(*mass, *radius, *density);
        if (mass && radius) return SphereBody::from_mass_radius(*mass, *radius);
        if (radius && density) return SphereBody::from_radius_density(*radius, *density);
        if (mass && density) return SphereBody::from_mass_density(*mass, *density);
        // One field given: complete it from the default body.
        if (mass) return SphereBody::from_mass_density(*mass, fallback.density_kg_m3);
        if (radius) return SphereBody::from_radius_density(*radius, fallback.density_kg_m3);
        if (density) return SphereBody::from_mass_density(fallback.mass_kg, *density);
    } catch (const validation_error& e) {
        fail(name, e.what());
    }
    fail(name, "give at least one of mass/radius/density, or omit the section");
}

double parse_environment(const json& root, double fallback) {
    if (!root.contains("environment")) return fallback;
    const json& sec = root.at("environment");
    require_object(sec, "environment");
    reject_unknown(sec, "environment", {"rho_bg", "pressure", "molecule_mass", "temperature"});
    const bool direct = sec.contains("rho_bg");
    const bool gas = sec.contains("pressure") || sec.contains("molecule_mass") ||
                     sec.contains("temperature");
    if (direct && gas)
        fail("environment", "give either rho_bg or pressure/molecule_mass/temperature");
    if (direct) {
        const double rho = number(sec.at("rho_bg"), "environment.rho_bg");
        if (!(rho > 0.0)) fail("environment.rho_bg", "must be positive");
        return rho;
    }
    if (gas) {
        if (!sec.contains("pressure") || !sec.contains("molecule_mass") ||
            !sec.contains("temperature"))
            fail("environment", "pressure, molecule_mass and temperature are all required");
        return units::density_from_pressure(
            number(sec.at("pressure"), "environment.pressure"),
            number(sec.at("molecule_mass"), "environment.molecule_mass"),
            number(sec.at("temperature"), "environment.temperature"));
    }
    return fallback;
}

std::complex<double> parse_mu_c(const json& sec, std::complex<double> fallback) {
    if (!sec.contains("mu_c")) return fallback;
    const json& v = sec.at("mu_c");
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    fail("optomech.mu_c", "must be a number or a [re, im] pair");
}

}  // namespace

ExperimentSetup RunConfig::setup() const {
    return ExperimentSetup(x0_m, epsilon, omega0, phi0, source, probe, rho_bg_kg_m3);
}

RunConfig default_config() {
    const double mech = 2.0 * M_PI * 100.0;
    return RunConfig{
        SphereBody::from_mass_density(1e-6, 19.3e3),
        SphereBody::from_mass_density(1e-14, 1538.0),
        8.27e-14,
        1e-3,
        0.1,
        mech,  // source driven at the mechanical resonance
        M_PI,
        OptomechConfig{
            mech,
            2.0 * M_PI * 10.0,
            1e-14,
            {1e3, 0.0},
            1.73,
            M_PI,
            10.0,
            10,
            1000,
            CouplingProfile::constant,
        },
        1.0,
        2.4e-3,  // dark-energy scale
        ScanSettings{kUnset, kUnset, kUnset, kUnset, 200, 200, ScanMetric::sigma_mod, false},
        OutputSettings{},
    };
}

RunConfig parse_config(const std::string& text) {
    json root;
    {
        std::string trimmed = text;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
        if (trimmed.empty()) {
            root = json::object();
        } else {
            try {
                root = json::parse(text);
            } catch (const json::parse_error& e) {
                throw validation_error(std::string("config: not valid JSON: ") + e.what());
            }
        }
    }
    require_object(root, "config");
    reject_unknown(root, "config",
                   {"source", "probe", "environment", "geometry", "optomech", "model", "scan",
                    "output"});

    RunConfig cfg = default_config();
    cfg.source = parse_body(root, "source", cfg.source);
    cfg.probe = parse_body(root, "probe", cfg.probe);
    cfg.rho_bg_kg_m3 = parse_environment(root, cfg.rho_bg_kg_m3);

    if (root.contains("geometry")) {
        const json& sec = root.at("geometry");
        require_object(sec, "geometry");
        reject_unknown(sec, "geometry", {"x0", "epsilon", "drive_frequency_hz", "phi0"});
        cfg.x0_m = positive(sec, "geometry", "x0", cfg.x0_m);
        if (const auto v = opt_number(sec, "geometry", "epsilon")) {
            if (!(*v > 0.0 && *v < 1.0)) fail("geometry.epsilon", "must lie in (0, 1)");
            cfg.epsilon = *v;
        }
        cfg.omega0 =
            2.0 * M_PI * positive(sec, "geometry", "drive_frequency_hz",
                                  cfg.omega0 / (2.0 * M_PI));
        if (const auto v = opt_number(sec, "geometry", "phi0")) cfg.phi0 = *v;
    }

    if (root.contains("optomech")) {
        const json& sec = root.at("optomech");
        require_object(sec, "optomech");
        reject_unknown(sec, "optomech",
                       {"mech_frequency_hz", "coupling_amplitude_hz", "mu_c", "r_sq", "varphi",
                        "r_T", "temperature", "cycles", "measurements", "coupling_profile"});
        OptomechConfig& om = cfg.optomech;
        om.omega_mech = 2.0 * M_PI * positive(sec, "optomech", "mech_frequency_hz",
                                              om.omega_mech / (2.0 * M_PI));
        om.k0 = 2.0 * M_PI *
                positive(sec, "optomech", "coupling_amplitude_hz", om.k0 / (2.0 * M_PI));
        om.probe_mass_kg = cfg.probe.mass_kg;
        om.coherent_amplitude = parse_mu_c(sec, om.coherent_amplitude);
        if (const auto v = opt_number(sec, "optomech", "r_sq")) {
            if (*v < 0.0) fail("optomech.r_sq", "must be non-negative");
            om.squeezing_amplitude = *v;
        }
        if (const auto v = opt_number(sec, "optomech", "varphi")) om.squeezing_phase = *v;
        if (sec.contains("r_T") && sec.contains("temperature"))
            fail("optomech", "give either r_T or temperature, not both");
        if (const auto v = opt_number(sec, "optomech", "r_T")) {
            if (*v < 0.0) fail("optomech.r_T", "must be non-negative");
            om.thermal_parameter = *v;
        }
        if (const auto v = opt_number(sec, "optomech", "temperature"))
            om.thermal_parameter = thermal_parameter_from_temperature(*v, om.omega_mech);
        if (sec.contains("cycles")) {
            const double v = number(sec.at("cycles"), "optomech.cycles");
            if (!(v >= 1.0) || v != std::floor(v))
                fail("optomech.cycles", "must be a positive integer");
            om.cycles = int(v);
        }
        if (sec.contains("measurements")) {
            const double v = number(sec.at("measurements"), "optomech.measurements");
            if (!(v >= 1.0) || v != std::floor(v))
                fail("optomech.measurements", "must be a positive integer");
            om.measurements = long(v);
        }
        if (sec.contains("coupling_profile")) {
            const std::string name = sec.at("coupling_profile").is_string()
                                         ? sec.at("coupling_profile").get<std::string>()
                                         : "";
            if (name == "constant")
                om.coupling = CouplingProfile::constant;
            else if (name == "resonant_cosine")
                om.coupling = CouplingProfile::resonant_cosine;
            else
                fail("optomech.coupling_profile", "must be constant or resonant_cosine");
        }
    } else {
        cfg.optomech.probe_mass_kg = cfg.probe.mass_kg;
    }

    if (root.contains("model")) {
        const json& sec = root.at("model");
        require_object(sec, "model");
        reject_unknown(sec, "model", {"m_over_mp", "lambda_eV"});
        cfg.model_coupling_over_planck =
            positive(sec, "model", "m_over_mp", cfg.model_coupling_over_planck);
        cfg.model_energy_scale_eV =
            positive(sec, "model", "lambda_eV", cfg.model_energy_scale_eV);
    }

    if (root.contains("scan")) {
        const json& sec = root.at("scan");
        require_object(sec, "scan");
        reject_unknown(sec, "scan",
                       {"x_min", "x_max", "y_min", "y_max", "nx", "ny", "metric",
                        "probe_screening"});
        cfg.scan.x_min = positive(sec, "scan", "x_min", cfg.scan.x_min);
        cfg.scan.x_max = positive(sec, "scan", "x_max", cfg.scan.x_max);
        cfg.scan.y_min = positive(sec, "scan", "y_min", cfg.scan.y_min);
        cfg.scan.y_max = positive(sec, "scan", "y_max", cfg.scan.y_max);
        for (const char* key : {"nx", "ny"}) {
            if (!sec.contains(key)) continue;
            const double v = number(sec.at(key), std::string("scan.") + key);
            if (!(v >= 2.0) || v != std::floor(v))
                fail(std::string("scan.") + key, "must be an integer >= 2");
            (std::string(key) == "nx" ? cfg.scan.nx : cfg.scan.ny) = int(v);
        }
        if (sec.contains("metric")) {
            if (!sec.at("metric").is_string()) fail("scan.metric", "must be a string");
            cfg.scan.metric = metric_from_name(sec.at("metric").get<std::string>());
        }
        if (sec.contains("probe_screening")) {
            if (!sec.at("probe_screening").is_boolean())
                fail("scan.probe_screening", "must be a boolean");
            cfg.scan.probe_screening = sec.at("probe_screening").get<bool>();
        }
    }

    if (root.contains("output")) {
        const json& sec = root.at("output");
        require_object(sec, "output");
        reject_unknown(sec, "output", {"format", "path"});
        if (sec.contains("format")) {
            const std::string fmt =
                sec.at("format").is_string() ? sec.at("format").get<std::string>() : "";
            if (fmt != "csv" && fmt != "json") fail("output.format", "must be csv or json");
            cfg.output.format = fmt;
        }
        if (sec.contains("path")) {
            if (!sec.at("path").is_string()) fail("output.path", "must be a string");
            cfg.output.path = sec.at("path").get<std::string>();
        }
    }

    cfg.optomech.validate();
    cfg.setup();  // cross-field geometry checks
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("config: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace modgrav

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include <json.hpp>

#include "modgrav/commands.hpp"
#include "modgrav/config.hpp"
#include "modgrav/errors.hpp"
#include "test_helpers.hpp"

using namespace modgrav;
using nlohmann::json;
using testutil::run_command;

namespace {

double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

std::string bin() { return testutil::modgrav_binary(); }

}  // namespace

TEST_CASE("empty config equals the built-in defaults") {
    const RunConfig cfg = parse_config("");
    const RunConfig dflt = default_config();
    CHECK(cfg.source.mass_kg == dflt.source.mass_kg);
    CHECK(rel_err(cfg.source.radius_m, 2.31269322019e-4) < 1e-10);
    CHECK(rel_err(cfg.probe.radius_m, 1.15784836063e-6) < 1e-10);
    CHECK(cfg.rho_bg_kg_m3 == 8.27e-14);
    CHECK(cfg.epsilon == 0.1);
    CHECK(cfg.optomech.cycles == 10);
    CHECK(cfg.optomech.measurements == 1000);
    CHECK(cfg.optomech.squeezing_amplitude == 1.73);
    CHECK(cfg.optomech.thermal_parameter == 10.0);
    CHECK(std::norm(cfg.optomech.coherent_amplitude) == doctest::Approx(1e6));
    CHECK(parse_config("  \n ").source.mass_kg == dflt.source.mass_kg);
}

TEST_CASE("config field validation names the field") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"geometry": {"epsilon": 1.5}})"),
                         doctest::Contains("geometry.epsilon"), validation_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"geometry": {"x0": -1.0}})"),
                         doctest::Contains("geometry.x0"), validation_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"unknown_section": {}})"),
                         doctest::Contains("unknown_section"), validation_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"optomech": {"typo_key": 1.0}})"),
                         doctest::Contains("optomech.typo_key"), validation_error);
    CHECK_THROWS_AS(parse_config("{not json"), validation_error);
    // Geometry that makes the spheres touch is rejected on load.
    CHECK_THROWS_AS(parse_config(R"({"geometry": {"x0": 2.5e-4}})"), validation_error);
}

TEST_CASE("bodies are completed from partial specifications") {
    const RunConfig cfg =
        parse_config(R"({"probe": {"mass": 1e-14, "density": 1538.0}})");
    CHECK(rel_err(cfg.probe.radius_m, 1.15784836063e-6) < 1e-10);
    // Density-only override keeps the default mass.
    const RunConfig denser = parse_config(R"({"source": {"density": 2e4}})");
    CHECK(denser.source.mass_kg == 1e-6);
    CHECK(denser.source.radius_m < cfg.source.radius_m);
    // Inconsistent triples are rejected.
    CHECK_THROWS_AS(
        parse_config(R"({"source": {"mass": 1e-6, "radius": 1e-4, "density": 19300.0}})"),
        validation_error);
}

TEST_CASE("environment from pressure") {
    const RunConfig cfg = parse_config(
        R"({"environment": {"pressure": 1e-7, "molecule_mass": 3.3e-27, "temperature": 288.9}})");
    CHECK(rel_err(cfg.rho_bg_kg_m3, 8.2733827286e-14) < 1e-10);
    CHECK_THROWS_WITH_AS(parse_config(R"({"environment": {"pressure": 1e-7}})"),
                         doctest::Contains("environment"), validation_error);
    CHECK_THROWS_AS(
        parse_config(R"({"environment": {"rho_bg": 1e-13, "pressure": 1e-7,
                          "molecule_mass": 3.3e-27, "temperature": 300.0}})"),
        validation_error);
}

TEST_CASE("optomech options") {
    const RunConfig cfg = parse_config(
        R"({"optomech": {"mu_c": [3.0, 4.0], "coupling_profile": "resonant_cosine",
                         "temperature": 1e-5}})");
    CHECK(cfg.optomech.coherent_amplitude == std::complex<double>(3.0, 4.0));
    CHECK(cfg.optomech.coupling == CouplingProfile::resonant_cosine);
    CHECK(cfg.optomech.thermal_parameter > 0.0);
    CHECK_THROWS_AS(parse_config(R"({"optomech": {"r_T": 1.0, "temperature": 1.0}})"),
                    validation_error);
    CHECK_THROWS_AS(parse_config(R"({"optomech": {"cycles": 2.5}})"), validation_error);
}

TEST_CASE("execute rejects unknown commands") {
    CHECK_THROWS_AS(execute("frobnicate", default_config(), {}, std::cout),
                    validation_error);
}

TEST_CASE("cli: sensitivity matches the reference values") {
    const auto res = run_command(bin() + " sensitivity");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.output);
    CHECK(rel_err(doc["dk_const"].get<double>(), 1.35524671446e-3) < 1e-9);
    CHECK(rel_err(doc["ds_mod"].get<double>(), 1.72555370972e-3) < 1e-9);
    CHECK(rel_err(doc["newtonian_force_N"].get<double>(), 6.6743e-25) < 1e-9);
}

TEST_CASE("cli: exit codes") {
    CHECK(run_command(bin() + " sensitivity --config /nonexistent.json 2>/dev/null")
              .exit_code == 1);
    CHECK(run_command(bin() + " scan-yukawa --metric bogus 2>/dev/null").exit_code == 1);
    CHECK(run_command(bin() + " 2>/dev/null").exit_code != 0);

    testutil::write_file("/tmp/modgrav_bad_eps.json", R"({"geometry": {"epsilon": 1.5}})");
    CHECK(run_command(bin() + " sensitivity --config /tmp/modgrav_bad_eps.json 2>/dev/null")
              .exit_code == 1);
}

TEST_CASE("cli: screening report") {
    const auto res = run_command(bin() + " screening");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.output);
    CHECK(rel_err(doc["background"]["phi_bg_eV"].get<double>(), 737548.420057) < 1e-9);
    CHECK(rel_err(doc["background"]["lambda_bg_m"].get<double>(), 313205351.342) < 1e-9);
    CHECK(doc["source"]["screened"].get<bool>() == false);
    CHECK(doc["source"]["xi"].get<double>() == 1.0);
    CHECK(doc["alpha_with_probe"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("cli: casimir report") {
    const auto res = run_command(bin() + " casimir");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.output);
    CHECK(doc["temperature_K"].get<double>() == 300.0);
    CHECK(rel_err(doc["acceleration_m_s2"].get<double>(), 9e-13) < 0.15);
    CHECK(doc["newtonian_acceleration_m_s2"].get<double>() ==
          doctest::Approx(6.6743e-11).epsilon(1e-9));
}

TEST_CASE("cli: scan-chameleon smoke on a 2x2 grid") {
    const std::string base = "/tmp/modgrav_scan_smoke";
    const auto res =
        run_command(bin() + " scan-chameleon --grid 2,2 --out " + base + " 2>/dev/null");
    REQUIRE(res.exit_code == 0);
    const json summary = json::parse(res.output);
    CHECK(summary["nx"] == 2);

    const std::string csv = testutil::read_file(base + ".csv");
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 5);  // header + 4 cells
    CHECK(csv.rfind("x,y,ratio,excluded\n", 0) == 0);

    const json report = json::parse(testutil::read_file(base + "_boundaries.json"));
    CHECK(report.contains("boundaries"));
    CHECK(report.contains("hull"));
    std::remove((base + ".csv").c_str());
    std::remove((base + "_boundaries.json").c_str());
}

TEST_CASE("cli: config override changes the output") {
    testutil::write_file("/tmp/modgrav_n20.json", R"({"optomech": {"cycles": 20}})");
    const auto res =
        run_command(bin() + " sensitivity --config /tmp/modgrav_n20.json");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.output);
    // dk scales as 1/n.
    CHECK(rel_err(doc["dk_const"].get<double>(), 1.35524671446e-3 / 2.0) < 1e-9);
}

TEST_CASE("cli: verify-qfi reports a tiny deviation") {
    const auto res = run_command(bin() + " verify-qfi");
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.output);
    CHECK(doc["max_relative_deviation"].get<double>() < 1e-5);
    CHECK(doc["cases"].size() == 12);
}

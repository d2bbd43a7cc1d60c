#include "modgrav/units.hpp"

#include <cmath>

#include "modgrav/errors.hpp"

namespace modgrav::units {

namespace {

constexpr double kPlanck = 6.62607015e-34;  // exact
constexpr double kHbar = kPlanck / (2.0 * M_PI);
constexpr double kC = 299792458.0;
constexpr double kG = 6.67430e-11;
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kElectronVolt = 1.602176634e-19;
constexpr double kPlanckMassKg = 4.341e-9;

constexpr Constants kConstants{
    kHbar,
    kC,
    kG,
    kBoltzmann,
    kElectronVolt,
    kHbar * kC / kElectronVolt,
    kPlanckMassKg,
    kPlanckMassKg * kC * kC / kElectronVolt,
};

}  // namespace

const Constants& constants() { return kConstants; }

double mass_to_natural(double mass_kg) {
    if (mass_kg < 0.0) throw validation_error("mass_to_natural: negative mass");
    return mass_kg * kC * kC / kElectronVolt;
}

double mass_from_natural(double mass_eV) {
    if (mass_eV < 0.0) throw validation_error("mass_from_natural: negative mass");
    return mass_eV * kElectronVolt / (kC * kC);
}

double density_to_natural(double rho_kg_m3) {
    if (rho_kg_m3 < 0.0) throw validation_error("density_to_natural: negative density");
    const double hc = kConstants.hbar_c;
    return rho_kg_m3 * kC * kC / kElectronVolt * hc * hc * hc;
}

double density_from_natural(double rho_eV4) {
    if (rho_eV4 < 0.0) throw validation_error("density_from_natural: negative density");
    const double hc = kConstants.hbar_c;
    return rho_eV4 * kElectronVolt / (kC * kC) / (hc * hc * hc);
}

double length_to_natural(double length_m) {
    if (length_m < 0.0) throw validation_error("length_to_natural: negative length");
    return length_m / kConstants.hbar_c;
}

double length_from_natural(double length_inv_eV) {
    if (length_inv_eV < 0.0) throw validation_error("length_from_natural: negative length");
    return length_inv_eV * kConstants.hbar_c;
}

double density_from_pressure(double pressure_Pa, double molecule_mass_kg,
                             double temperature_K) {
    if (pressure_Pa < 0.0) throw validation_error("density_from_pressure: negative pressure");
    if (molecule_mass_kg <= 0.0)
        throw validation_error("density_from_pressure: molecule mass must be positive");
    if (temperature_K <= 0.0)
        throw validation_error("density_from_pressure: temperature must be positive");
    return pressure_Pa * molecule_mass_kg / (kBoltzmann * temperature_K);
}

double radius_from_mass(double mass_kg, double density_kg_m3) {
    if (mass_kg < 0.0) throw validation_error("radius_from_mass: negative mass");
    if (density_kg_m3 <= 0.0)
        throw validation_error("radius_from_mass: density must be positive");
    return std::cbrt(3.0 * mass_kg / (4.0 * M_PI * density_kg_m3));
}

}  // namespace modgrav::units

#pragma once

namespace modgrav::units {

// Physical constants. SI-2019 exact values where the SI fixes them (eV, k_B,
// c, and hbar via the fixed Planck constant); G from CODATA 2018. The reduced
// Planck mass is kept as the conventional rounded value 4.341e-9 kg so that
// quantities quoted against it are reproducible.
struct Constants {
    double hbar;                     // J s
    double c;                        // m / s
    double G;                        // m^3 kg^-1 s^-2
    double k_B;                      // J / K
    double eV;                       // J per eV
    double hbar_c;                   // eV m
    double reduced_planck_mass_kg;   // kg
    double reduced_planck_mass_eV;   // eV (derived, = kg * c^2 / eV)
};

const Constants& constants();

// kg -> eV
double mass_to_natural(double mass_kg);
// eV -> kg
double mass_from_natural(double mass_eV);

// kg/m^3 -> eV^4
double density_to_natural(double rho_kg_m3);
// eV^4 -> kg/m^3
double density_from_natural(double rho_eV4);

// m -> eV^-1
double length_to_natural(double length_m);
// eV^-1 -> m
double length_from_natural(double length_inv_eV);

// Ideal-gas residual density: P * m_molecule / (k_B * T), in kg/m^3.
double density_from_pressure(double pressure_Pa, double molecule_mass_kg,
                             double temperature_K);

// Radius of a homogeneous sphere of the given mass and density, in m.
double radius_from_mass(double mass_kg, double density_kg_m3);

}  // namespace modgrav::units

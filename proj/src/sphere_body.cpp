#include "modgrav/sphere_body.hpp"

#include <cmath>
#include <string>

#include "modgrav/errors.hpp"
#include "modgrav/units.hpp"

namespace modgrav {

namespace {

double sphere_volume(double radius_m) {
    return 4.0 / 3.0 * M_PI * radius_m * radius_m * radius_m;
}

}  // namespace

SphereBody::SphereBody(double mass, double radius, double density)
    : mass_kg(mass), radius_m(radius), density_kg_m3(density) {
    if (!(mass > 0.0) || !(radius > 0.0) || !(density > 0.0))
        throw validation_error("SphereBody: mass, radius and density must be positive");
    const double implied = mass / sphere_volume(radius);
    if (std::abs(implied - density) > 1e-9 * density)
        throw validation_error("SphereBody: inconsistent mass/radius/density (implied density " +
                               std::to_string(implied) + " kg/m^3, given " +
                               std::to_string(density) + " kg/m^3)");
}

SphereBody SphereBody::from_mass_density(double mass_kg, double density_kg_m3) {
    return SphereBody(mass_kg, units::radius_from_mass(mass_kg, density_kg_m3), density_kg_m3);
}

SphereBody SphereBody::from_mass_radius(double mass_kg, double radius_m) {
    if (!(radius_m > 0.0)) throw validation_error("SphereBody: radius must be positive");
    return SphereBody(mass_kg, radius_m, mass_kg / sphere_volume(radius_m));
}

SphereBody SphereBody::from_radius_density(double radius_m, double density_kg_m3) {
    if (!(radius_m > 0.0)) throw validation_error("SphereBody: radius must be positive");
    return SphereBody(density_kg_m3 * sphere_volume(radius_m), radius_m, density_kg_m3);
}

}  // namespace modgrav

#pragma once

namespace modgrav {

// Homogeneous sphere used for both the gravitational source and the probe.
// Any two of {mass, radius, density} determine the third; the factory
// functions derive the missing one, and the constructor rejects inconsistent
// triples (1e-9 relative tolerance).
struct SphereBody {
    double mass_kg;
    double radius_m;
    double density_kg_m3;

    SphereBody(double mass, double radius, double density);

    static SphereBody from_mass_density(double mass_kg, double density_kg_m3);
    static SphereBody from_mass_radius(double mass_kg, double radius_m);
    static SphereBody from_radius_density(double radius_m, double density_kg_m3);
};

}  // namespace modgrav

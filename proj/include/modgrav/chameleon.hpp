#pragma once

#include "modgrav/sphere_body.hpp"

namespace modgrav {

// n = 1 chameleon model. The coupling mass M sets how strongly the field
// pulls on matter; Lambda is the self-interaction energy scale. Only the
// n = 1 potential is supported; the exponent is carried so that anything
// else is rejected loudly instead of silently miscomputed.
struct ChameleonModel {
    double coupling_mass_eV;    // M
    double energy_scale_eV;     // Lambda
    int exponent = 1;           // n

    ChameleonModel(double coupling_mass_eV, double energy_scale_eV, int exponent = 1);

    // M given as a multiple of the reduced Planck mass.
    static ChameleonModel from_planck_ratio(double coupling_over_planck,
                                            double energy_scale_eV);
};

// Equilibrium field state in a homogeneous environment of density rho_bg.
struct BackgroundState {
    double field_eV;      // phi_bg
    double mass_eV;       // m_bg
    double range_m;       // lambda_bg = hbar c / m_bg
    double rho_bg_kg_m3;
};

// Screening state of one sphere. xi is the fraction of the sphere's mass
// that sources the fifth force; an unscreened body has xi = 1 and S = 0.
struct ScreeningResult {
    double screening_radius_m;  // S
    double xi;                  // 1 - S^3/R^3, in [0, 1]
    bool screened;
};

struct EffectiveYukawa {
    double alpha;
    double range_m;
    ScreeningResult source;
    ScreeningResult probe;  // xi = 1 when the probe is treated as a point
};

BackgroundState background_state(const ChameleonModel& model, double rho_bg_kg_m3);

ScreeningResult screening_radius(const SphereBody& body, const ChameleonModel& model,
                                 const BackgroundState& bg);

// Static field value at distance r from the sphere centre, in eV.
// Continuous on r >= 0; outside the body the profile is Yukawa.
double field_profile(const SphereBody& body, const ChameleonModel& model,
                     const BackgroundState& bg, double r_m);

// Yukawa (alpha, lambda) equivalent of the chameleon force between the two
// spheres: alpha = 2 (M_P/M)^2 xi_S [xi_P], lambda = lambda_bg.
EffectiveYukawa effective_yukawa(const ChameleonModel& model, const SphereBody& source,
                                 const SphereBody& probe, double rho_bg_kg_m3,
                                 bool include_probe_screening);

// Value of Lambda at which the screening radius of `body` vanishes
// (rho R^2 = 3 M phi_bg), for the given coupling mass and environment.
double screening_onset_energy_scale(const SphereBody& body, double coupling_mass_eV,
                                    double rho_bg_kg_m3);

}  // namespace modgrav

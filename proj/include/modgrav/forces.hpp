#pragma once

#include <functional>

#include "modgrav/sphere_body.hpp"

namespace modgrav {

// Geometry and drive of the source/probe pair. The source oscillates as
//   x_S(t) = x0 (1 - epsilon cos(omega0 t + phi0)),
// measured centre to centre along the common axis.
struct ExperimentSetup {
    double x0_m;         // equilibrium separation
    double epsilon;      // oscillation amplitude fraction, 0 < epsilon < 1
    double omega0;       // rad/s
    double phi0;         // rad
    SphereBody source;
    SphereBody probe;
    double rho_bg_kg_m3;

    ExperimentSetup(double x0, double epsilon, double omega0, double phi0,
                    SphereBody source, SphereBody probe, double rho_bg);

    double source_position(double t_s) const;
    // G M_S / x0^2
    double newtonian_acceleration() const;
};

// Finite-probe form factors. A and B weight the static and gradient parts of
// the sphere-sphere Yukawa force; f combines them for the full force.
struct FormFactors {
    double A;
    double B;
    double f;
};

// u = R_P / lambda, v = x_S / lambda.
FormFactors form_factors(double u, double v);

// Dimensionless drive coefficients of the linearised fifth force:
// kappa scales the static part, sigma the part oscillating at omega0.
struct LinearizedCoefficients {
    double kappa;
    double sigma;
    double g_N;  // m/s^2, Newtonian acceleration at x0
};

// Point-probe or finite-probe (A/B) forms; the two agree when R_P << lambda.
LinearizedCoefficients linearized_coefficients(const ExperimentSetup& setup, double alpha,
                                               double lambda_m, bool probe_screened);
// Same, without a full setup (g_N left at 0).
LinearizedCoefficients linearized_kappa_sigma(double alpha, double lambda_m, double x0_m,
                                              double probe_radius_m, bool probe_screened);

// Total axial force on the probe at source separation x_S (negative =
// attractive). With include_probe_screening the Yukawa term carries the
// finite-size form factor f; otherwise the probe is a point.
double total_force(const ExperimentSetup& setup, double alpha, double lambda_m,
                   bool include_probe_screening, double x_S_m);

// Classical-thermal (Drude) Casimir force magnitude between the two spheres,
// valid for gaps large against the thermal wavelength.
double casimir_force(double temperature_K, double source_radius_m, double probe_radius_m,
                     double x0_m);

// Solves t_ret = t - |X - q(t_ret)| / c for a sub-luminal trajectory q.
double retarded_time(const std::function<double(double)>& trajectory_m, double observer_m,
                     double t_s);

}  // namespace modgrav

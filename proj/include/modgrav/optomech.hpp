#pragma once

#include <complex>
#include <functional>

namespace modgrav {

enum class CouplingProfile {
    constant,         // k(t) = k0
    resonant_cosine,  // k(t) = k0 cos(omega_mech t)
};

// Sensor and measurement-protocol parameters.
struct OptomechConfig {
    double omega_mech;                        // rad/s
    double k0;                                // rad/s, coupling amplitude
    double probe_mass_kg;
    std::complex<double> coherent_amplitude;  // mu_c; |mu_c|^2 = mean photon number
    double squeezing_amplitude;               // r_sq >= 0
    double squeezing_phase;                   // varphi, rad
    double thermal_parameter;                 // r_T, tanh r_T = exp[-hbar w / (2 kB T)]
    int cycles;                               // n; measurement time t = 2 pi n / omega_mech
    long measurements;                        // number of repetitions
    CouplingProfile coupling = CouplingProfile::constant;

    void validate() const;
    double measurement_time() const;  // 2 pi cycles / omega_mech
    double zero_point_fluctuation() const;
};

double thermal_parameter_from_temperature(double temperature_K, double omega_mech);

// Variance of the photon number in a squeezed coherent state.
double photon_number_variance(std::complex<double> mu_c, double r_sq, double varphi);

// The four closed-form sensitivities at t = 2 pi n / omega_mech, assuming a
// high-temperature mechanical state and the phase choices that maximise each
// signal. Force sensitivities follow as m g_N dk and m g_N ds eps.
struct SensitivitySet {
    double dk_const;
    double ds_const;
    double dk_mod;
    double ds_mod;
};

SensitivitySet closed_form_sensitivities(const OptomechConfig& cfg, double g_N,
                                         double epsilon);

// Coefficients of the decoupled time-ordered-exponential evolution. The
// arguments of the generating integrals are the coupling profile g(t) and the
// linear drive V'(x_S(t)).
struct EvolutionFunctionals {
    double na;         // F_{N_a}
    double na2;        // F_{N_a^2}
    double b_plus;     // F_{B_+}
    double b_minus;    // F_{B_-}
    double na_b_plus;  // F_{N_a B_+}
    double na_b_minus; // F_{N_a B_-}
};

struct QuadratureControl {
    int min_samples_per_period = 256;  // floor on the uniform base grid
    double rel_tol = 1e-10;
    int max_doublings = 8;
};

// Nested Simpson quadrature of the six functionals over [0, t]. The inner
// cumulative integrals are evaluated once per grid node and reused by the
// outer pass; the grid is doubled until successive results agree to rel_tol.
EvolutionFunctionals evolution_functionals(const std::function<double(double)>& coupling,
                                           const std::function<double(double)>& drive,
                                           const OptomechConfig& cfg, double t_s,
                                           const QuadratureControl& ctl = {});

// Quantum Fisher information for a linear-displacement parameter, from the
// theta-derivatives of the functionals (coherent optical input):
//   I = 4 B^2 |mu_c|^2 + 4 (C_+^2 + C_-^2) / cosh(2 r_T),
//   B = -d F_Na - 2 F_NaB- d F_B+,  C_± = -d F_B±.
double qfi_linear(double d_na, double d_b_plus, double d_b_minus, double na_b_minus,
                  std::complex<double> mu_c, double r_T);

// Cramer-Rao bound: d theta = 1 / sqrt(measurements * qfi).
double cramer_rao_sensitivity(double qfi, long measurements);

}  // namespace modgrav

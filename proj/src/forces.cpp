#include "modgrav/forces.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "modgrav/errors.hpp"
#include "modgrav/units.hpp"

namespace modgrav {

ExperimentSetup::ExperimentSetup(double x0, double eps, double w0, double ph0,
                                 SphereBody src, SphereBody prb, double rho_bg)
    : x0_m(x0),
      epsilon(eps),
      omega0(w0),
      phi0(ph0),
      source(std::move(src)),
      probe(std::move(prb)),
      rho_bg_kg_m3(rho_bg) {
    if (!(x0 > 0.0)) throw validation_error("ExperimentSetup: x0 must be positive");
    if (!(eps > 0.0 && eps < 1.0))
        throw validation_error("ExperimentSetup: epsilon must lie in (0, 1)");
    if (!(w0 > 0.0)) throw validation_error("ExperimentSetup: omega0 must be positive");
    if (!(rho_bg > 0.0))
        throw validation_error("ExperimentSetup: background density must be positive");
    if (!(x0 * (1.0 - eps) > source.radius_m + probe.radius_m))
        throw validation_error(
            "ExperimentSetup: bodies touch at closest approach (x0 (1 - epsilon) must exceed "
            "the sum of the radii)");
}

double ExperimentSetup::source_position(double t_s) const {
    return x0_m * (1.0 - epsilon * std::cos(omega0 * t_s + phi0));
}

double ExperimentSetup::newtonian_acceleration() const {
    return units::constants().G * source.mass_kg / (x0_m * x0_m);
}

FormFactors form_factors(double u, double v) {
    if (u < 0.0) throw validation_error("form_factors: u must be non-negative");
    if (!(v > 0.0)) throw validation_error("form_factors: v must be positive");
    double sinhc;        // sinh(u)/u
    double cosh_sinhc;   // cosh(u) - sinh(u)/u
    if (u < 1e-4) {
        const double u2 = u * u;
        sinhc = 1.0 + u2 / 6.0 + u2 * u2 / 120.0;
        cosh_sinhc = u2 / 3.0 + u2 * u2 / 30.0;
    } else {
        sinhc = std::sinh(u) / u;
        cosh_sinhc = std::cosh(u) - sinhc;
    }
    const double envelope = (1.0 + u) * std::exp(-u);
    FormFactors ff{};
    ff.A = envelope * sinhc;
    ff.B = envelope * cosh_sinhc;
    ff.f = ff.A + (2.0 / v - 1.0 / (1.0 + v)) * ff.B;
    return ff;
}

LinearizedCoefficients linearized_kappa_sigma(double alpha, double lambda_m, double x0_m,
                                              double probe_radius_m, bool probe_screened) {
    if (!(x0_m > 0.0)) throw validation_error("linearized_kappa_sigma: x0 must be positive");
    if (!(lambda_m > 0.0))
        throw validation_error("linearized_kappa_sigma: lambda must be positive");
    const double x = x0_m / lambda_m;
    const double damping = std::exp(-x);
    LinearizedCoefficients out{};
    if (probe_screened) {
        const FormFactors ff = form_factors(probe_radius_m / lambda_m, x);
        out.kappa = alpha * damping * ((1.0 + x) * ff.A + (1.0 + 2.0 / x) * ff.B);
        out.sigma =
            alpha * damping * ((2.0 + 2.0 * x + x * x) * ff.A + (4.0 + 6.0 / x + x) * ff.B);
    } else {
        out.kappa = alpha * damping * (1.0 + x);
        out.sigma = alpha * damping * (2.0 + 2.0 * x + x * x);
    }
    return out;
}

LinearizedCoefficients linearized_coefficients(const ExperimentSetup& setup, double alpha,
                                               double lambda_m, bool probe_screened) {
    LinearizedCoefficients out = linearized_kappa_sigma(alpha, lambda_m, setup.x0_m,
                                                        setup.probe.radius_m, probe_screened);
    out.g_N = setup.newtonian_acceleration();
    return out;
}

double total_force(const ExperimentSetup& setup, double alpha, double lambda_m,
                   bool include_probe_screening, double x_S_m) {
    if (!(x_S_m > setup.source.radius_m + setup.probe.radius_m))
        throw validation_error("total_force: separation smaller than the sum of the radii");
    if (!(lambda_m > 0.0)) throw validation_error("total_force: lambda must be positive");
    const double newton =
        -units::constants().G * setup.source.mass_kg * setup.probe.mass_kg / (x_S_m * x_S_m);
    const double v = x_S_m / lambda_m;
    double yukawa = alpha * (1.0 + v) * std::exp(-v);
    if (include_probe_screening)
        yukawa *= form_factors(setup.probe.radius_m / lambda_m, v).f;
    return newton * (1.0 + yukawa);
}

double casimir_force(double temperature_K, double source_radius_m, double probe_radius_m,
                     double x0_m) {
    if (temperature_K < 0.0) throw validation_error("casimir_force: negative temperature");
    const double gap = x0_m - source_radius_m - probe_radius_m;
    if (!(gap > 0.0)) throw validation_error("casimir_force: spheres overlap");
    const double r3 = std::pow(source_radius_m * probe_radius_m, 3);
    return 18.0 * units::constants().k_B * temperature_K * r3 / std::pow(gap, 7);
}

double retarded_time(const std::function<double(double)>& trajectory_m, double observer_m,
                     double t_s) {
    const double c = units::constants().c;
    double tr = t_s;
    for (int i = 0; i < 100; ++i) {
        const double next = t_s - std::abs(observer_m - trajectory_m(tr)) / c;
        const double step = std::abs(next - tr);
        tr = next;
        if (step <= 1e-15) return tr;
    }
    std::ostringstream msg;
    msg << "retarded_time: no convergence after 100 iterations at t = " << t_s;
    throw numerical_error(msg.str());
}

}  // namespace modgrav

#include "modgrav/optomech.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "modgrav/errors.hpp"
#include "modgrav/units.hpp"

namespace modgrav {

void OptomechConfig::validate() const {
    if (!(omega_mech > 0.0))
        throw validation_error("OptomechConfig: omega_mech must be positive");
    if (!(k0 > 0.0)) throw validation_error("OptomechConfig: k0 must be positive");
    if (!(probe_mass_kg > 0.0))
        throw validation_error("OptomechConfig: probe mass must be positive");
    if (squeezing_amplitude < 0.0)
        throw validation_error("OptomechConfig: squeezing amplitude must be non-negative");
    if (thermal_parameter < 0.0)
        throw validation_error("OptomechConfig: thermal parameter must be non-negative");
    if (cycles < 1) throw validation_error("OptomechConfig: cycles must be positive");
    if (measurements < 1)
        throw validation_error("OptomechConfig: measurements must be positive");
}

double OptomechConfig::measurement_time() const { return 2.0 * M_PI * cycles / omega_mech; }

double OptomechConfig::zero_point_fluctuation() const {
    return std::sqrt(units::constants().hbar / (2.0 * probe_mass_kg * omega_mech));
}

double thermal_parameter_from_temperature(double temperature_K, double omega_mech) {
    if (!(temperature_K > 0.0))
        throw validation_error("thermal_parameter_from_temperature: temperature must be positive");
    if (!(omega_mech > 0.0))
        throw validation_error("thermal_parameter_from_temperature: omega_mech must be positive");
    const auto& k = units::constants();
    return std::atanh(std::exp(-k.hbar * omega_mech / (2.0 * k.k_B * temperature_K)));
}

double photon_number_variance(std::complex<double> mu_c, double r_sq, double varphi) {
    if (r_sq < 0.0)
        throw validation_error("photon_number_variance: squeezing amplitude must be non-negative");
    const double n_bar = std::norm(mu_c);
    const double re = (std::polar(1.0, -varphi / 2.0) * mu_c).real();
    return n_bar * std::exp(4.0 * r_sq) + 0.5 * std::pow(std::sinh(2.0 * r_sq), 2) -
           2.0 * re * re * std::sinh(4.0 * r_sq);
}

SensitivitySet closed_form_sensitivities(const OptomechConfig& cfg, double g_N,
                                         double epsilon) {
    cfg.validate();
    if (!(g_N > 0.0))
        throw validation_error("closed_form_sensitivities: g_N must be positive");
    if (!(epsilon > 0.0))
        throw validation_error("closed_form_sensitivities: epsilon must be positive");
    const double variance =
        photon_number_variance(cfg.coherent_amplitude, cfg.squeezing_amplitude,
                               cfg.squeezing_phase);
    if (!(variance > 0.0))
        throw validation_error("closed_form_sensitivities: photon-number variance is zero");
    const double w = cfg.omega_mech;
    const double prefactor = 1.0 / (std::sqrt(double(cfg.measurements)) * g_N) /
                             std::sqrt(variance) *
                             std::sqrt(2.0 * units::constants().hbar * std::pow(w, 5) /
                                       cfg.probe_mass_kg);
    const double n = cfg.cycles;
    SensitivitySet s{};
    s.dk_const = prefactor / (8.0 * M_PI * n * cfg.k0);
    s.ds_const = prefactor / (4.0 * M_PI * n * cfg.k0 * epsilon);
    s.dk_mod = prefactor / (4.0 * M_PI * n * cfg.k0);
    s.ds_mod = prefactor / (2.0 * M_PI * M_PI * n * n * cfg.k0 * epsilon);
    return s;
}

namespace {

// Uniform-grid cumulative Simpson: prefix[i] = integral of f over [x0, x_i],
// O(h^4) at every node. n_intervals must be even.
void cumulative_simpson(const std::vector<double>& f, double h, std::vector<double>& prefix) {
    const size_t n = f.size() - 1;
    prefix.resize(f.size());
    prefix[0] = 0.0;
    for (size_t i = 2; i <= n; i += 2)
        prefix[i] = prefix[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    for (size_t i = 1; i <= n; i += 2)
        prefix[i] = prefix[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
}

double simpson(const std::vector<double>& f, double h) {
    const size_t n = f.size() - 1;
    double odd = 0.0, even = 0.0;
    for (size_t i = 1; i < n; i += 2) odd += f[i];
    for (size_t i = 2; i < n; i += 2) even += f[i];
    return h / 3.0 * (f[0] + f[n] + 4.0 * odd + 2.0 * even);
}

double l1_scale(const std::vector<double>& f, double h) {
    double sum = 0.0;
    for (double v : f) sum += std::abs(v);
    return sum * h;
}

struct FunctionalPass {
    EvolutionFunctionals value;
    EvolutionFunctionals scale;  // L1 magnitudes, for the roundoff floor
};

FunctionalPass single_pass(const std::function<double(double)>& coupling,
                           const std::function<double(double)>& drive,
                           const OptomechConfig& cfg, double t, long n_intervals) {
    const double h = t / double(n_intervals);
    const double w = cfg.omega_mech;
    const size_t count = size_t(n_intervals) + 1;

    std::vector<double> drive_cos(count), drive_sin(count), coup_cos(count), coup_sin(count);
    for (size_t i = 0; i < count; ++i) {
        const double ti = h * double(i);
        const double c = std::cos(w * ti);
        const double s = std::sin(w * ti);
        const double v = drive(ti);
        const double g = coupling(ti);
        drive_cos[i] = v * c;
        drive_sin[i] = v * s;
        coup_cos[i] = g * c;
        coup_sin[i] = g * s;
    }

    std::vector<double> cum_drive_cos, cum_coup_cos;
    cumulative_simpson(drive_cos, h, cum_drive_cos);
    cumulative_simpson(coup_cos, h, cum_coup_cos);

    std::vector<double> na_outer(count), na_swap(count), na2_outer(count);
    for (size_t i = 0; i < count; ++i) {
        na_outer[i] = drive_sin[i] * cum_coup_cos[i];
        na_swap[i] = coup_sin[i] * cum_drive_cos[i];
        na2_outer[i] = coup_sin[i] * cum_coup_cos[i];
    }

    const double xz_over_hbar = cfg.zero_point_fluctuation() / units::constants().hbar;

    FunctionalPass out{};
    out.value.b_plus = xz_over_hbar * simpson(drive_cos, h);
    out.value.b_minus = xz_over_hbar * simpson(drive_sin, h);
    out.value.na_b_plus = -simpson(coup_cos, h);
    out.value.na_b_minus = -simpson(coup_sin, h);
    out.value.na = 2.0 * xz_over_hbar * (simpson(na_outer, h) + simpson(na_swap, h));
    out.value.na2 = -2.0 * simpson(na2_outer, h);

    out.scale.b_plus = xz_over_hbar * l1_scale(drive_cos, h);
    out.scale.b_minus = xz_over_hbar * l1_scale(drive_sin, h);
    out.scale.na_b_plus = l1_scale(coup_cos, h);
    out.scale.na_b_minus = l1_scale(coup_sin, h);
    out.scale.na = 2.0 * xz_over_hbar * (l1_scale(na_outer, h) + l1_scale(na_swap, h));
    out.scale.na2 = 2.0 * l1_scale(na2_outer, h);
    return out;
}

bool within(double fine, double coarse, double scale, double rel_tol) {
    // Roundoff floor proportional to the L1 mass of the integrand, so that
    // functionals whose exact value is zero can still converge.
    const double tol = rel_tol * std::abs(fine) + 1e-13 * scale;
    return std::abs(fine - coarse) <= tol;
}

}  // namespace

EvolutionFunctionals evolution_functionals(const std::function<double(double)>& coupling,
                                           const std::function<double(double)>& drive,
                                           const OptomechConfig& cfg, double t_s,
                                           const QuadratureControl& ctl) {
    cfg.validate();
    if (t_s < 0.0) throw validation_error("evolution_functionals: t must be non-negative");
    if (t_s == 0.0) return EvolutionFunctionals{};

    const double periods = t_s * cfg.omega_mech / (2.0 * M_PI);
    const int spp = std::max(ctl.min_samples_per_period, 4);
    long n_intervals = long(std::ceil(std::max(periods, 1.0) * spp));
    if (n_intervals % 2) ++n_intervals;

    FunctionalPass prev = single_pass(coupling, drive, cfg, t_s, n_intervals);
    for (int pass = 0; pass < ctl.max_doublings; ++pass) {
        n_intervals *= 2;
        const FunctionalPass cur = single_pass(coupling, drive, cfg, t_s, n_intervals);
        const bool ok = within(cur.value.na, prev.value.na, cur.scale.na, ctl.rel_tol) &&
                        within(cur.value.na2, prev.value.na2, cur.scale.na2, ctl.rel_tol) &&
                        within(cur.value.b_plus, prev.value.b_plus, cur.scale.b_plus,
                               ctl.rel_tol) &&
                        within(cur.value.b_minus, prev.value.b_minus, cur.scale.b_minus,
                               ctl.rel_tol) &&
                        within(cur.value.na_b_plus, prev.value.na_b_plus,
                               cur.scale.na_b_plus, ctl.rel_tol) &&
                        within(cur.value.na_b_minus, prev.value.na_b_minus,
                               cur.scale.na_b_minus, ctl.rel_tol);
        if (ok) return cur.value;
        prev = cur;
    }
    std::ostringstream msg;
    msg << "evolution_functionals: quadrature did not reach rel_tol = " << ctl.rel_tol
        << " after " << ctl.max_doublings << " grid doublings (t = " << t_s << " s)";
    throw numerical_error(msg.str());
}

double qfi_linear(double d_na, double d_b_plus, double d_b_minus, double na_b_minus,
                  std::complex<double> mu_c, double r_T) {
    if (r_T < 0.0) throw validation_error("qfi_linear: thermal parameter must be non-negative");
    const double b = -d_na - 2.0 * na_b_minus * d_b_plus;
    const double c_plus = -d_b_plus;
    const double c_minus = -d_b_minus;
    const double thermal = std::cosh(2.0 * r_T);  // +inf for huge r_T: C-terms drop out
    return 4.0 * b * b * std::norm(mu_c) +
           4.0 * (c_plus * c_plus + c_minus * c_minus) / thermal;
}

double cramer_rao_sensitivity(double qfi, long measurements) {
    if (measurements < 1)
        throw validation_error("cramer_rao_sensitivity: measurements must be positive");
    if (qfi < 0.0) throw validation_error("cramer_rao_sensitivity: negative information");
    return 1.0 / std::sqrt(double(measurements) * qfi);
}

}  // namespace modgrav

#include "modgrav/chameleon.hpp"

#include <cmath>
#include <sstream>

#include "modgrav/errors.hpp"
#include "modgrav/units.hpp"

namespace modgrav {

namespace {

// Relative slack on the screened/unscreened comparison; the boundary is
// measure-zero, ties go to unscreened.
constexpr double kScreenedTolerance = 1e-12;
// Below this distance from S/R = 1 the direct 1 - s^3 loses digits and the
// first-order expansion of the cubic takes over.
constexpr double kTaylorThreshold = 1e-6;

struct NaturalBody {
    double mass_eV;
    double radius_inv_eV;
    double density_eV4;
    double field_eV;  // equilibrium field value at the body density
};

NaturalBody to_natural(const SphereBody& body, const ChameleonModel& model) {
    NaturalBody nb{};
    nb.mass_eV = units::mass_to_natural(body.mass_kg);
    nb.radius_inv_eV = units::length_to_natural(body.radius_m);
    nb.density_eV4 = units::density_to_natural(body.density_kg_m3);
    const double lam = model.energy_scale_eV;
    nb.field_eV = std::sqrt(model.coupling_mass_eV * std::pow(lam, 5) / nb.density_eV4);
    return nb;
}

// Left-hand side of the screening cubic in s = S/R:
//   s^2 - (2/3) beta s^3,   beta = m R / (1 + m R).
double cubic_lhs(double s, double beta) {
    return s * s - (2.0 / 3.0) * beta * s * s * s;
}

// Monotone on [0, 1], so a bracketed Newton step with bisection fallback
// always converges. Returns s in [0, 1].
double solve_cubic(double beta, double rhs) {
    double lo = 0.0;
    double hi = 1.0;
    double s = std::sqrt(rhs);  // exact for beta = 0
    if (!(s > lo) || !(s < hi)) s = 0.5;
    for (int i = 0; i < 200; ++i) {
        const double f = cubic_lhs(s, beta) - rhs;
        if (f == 0.0) return s;
        if (f > 0.0)
            hi = s;
        else
            lo = s;
        const double df = 2.0 * s - 2.0 * beta * s * s;
        double next = s - f / df;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - s);
        s = next;
        if (step <= 1e-14 * s || hi - lo <= 1e-14 * hi) return s;
    }
    return s;
}

}  // namespace

ChameleonModel::ChameleonModel(double coupling_mass, double energy_scale, int n)
    : coupling_mass_eV(coupling_mass), energy_scale_eV(energy_scale), exponent(n) {
    if (!(coupling_mass > 0.0))
        throw validation_error("ChameleonModel: coupling mass must be positive");
    if (!(energy_scale > 0.0))
        throw validation_error("ChameleonModel: energy scale must be positive");
    if (n != 1) throw validation_error("ChameleonModel: only the n = 1 potential is supported");
}

ChameleonModel ChameleonModel::from_planck_ratio(double coupling_over_planck,
                                                 double energy_scale_eV) {
    return ChameleonModel(coupling_over_planck * units::constants().reduced_planck_mass_eV,
                          energy_scale_eV);
}

BackgroundState background_state(const ChameleonModel& model, double rho_bg_kg_m3) {
    if (!(rho_bg_kg_m3 > 0.0))
        throw validation_error("background_state: background density must be positive");
    const double rho = units::density_to_natural(rho_bg_kg_m3);
    const double m = model.coupling_mass_eV;
    const double lam5 = std::pow(model.energy_scale_eV, 5);
    BackgroundState bg{};
    bg.field_eV = std::sqrt(m * lam5 / rho);
    bg.mass_eV = std::pow(4.0 * rho * rho * rho / (m * m * m * lam5), 0.25);
    bg.range_m = units::constants().hbar_c / bg.mass_eV;
    bg.rho_bg_kg_m3 = rho_bg_kg_m3;
    return bg;
}

ScreeningResult screening_radius(const SphereBody& body, const ChameleonModel& model,
                                 const BackgroundState& bg) {
    const NaturalBody nb = to_natural(body, model);
    const double R = nb.radius_inv_eV;
    const double phi_bg = bg.field_eV;

    // rho R^2 < 3 M phi_bg: the body barely perturbs the field.
    const double lhs = nb.density_eV4 * R * R;
    const double threshold = 3.0 * model.coupling_mass_eV * phi_bg;
    if (lhs <= threshold * (1.0 + kScreenedTolerance))
        return ScreeningResult{0.0, 1.0, false};
    // A body denser than its environment has phi_S < phi_bg; if not, the
    // thin-shell solution does not apply and the body counts as unscreened.
    if (phi_bg <= nb.field_eV) return ScreeningResult{0.0, 1.0, false};

    const double mR = bg.mass_eV * R;
    const double beta = mR / (1.0 + mR);
    const double delta_phi = phi_bg - nb.field_eV;
    const double k = 8.0 * M_PI * model.coupling_mass_eV * R * delta_phi / (3.0 * nb.mass_eV);
    const double rhs = 1.0 - k - (2.0 / 3.0) * beta;
    if (rhs < 0.0) {
        std::ostringstream msg;
        msg << "screening_radius: no root in [0, R] despite screened condition"
            << " (m_bg R = " << mR << ", 8 pi M R dphi / (3 M_i) = " << k
            << ", rho R^2 / (3 M phi_bg) = " << lhs / threshold << ")";
        throw numerical_error(msg.str());
    }

    const double s = solve_cubic(beta, rhs);
    double xi;
    if (1.0 - s < kTaylorThreshold) {
        // 1 - s^3 to first order in s - 1; avoids catastrophic cancellation.
        xi = 4.0 * M_PI * model.coupling_mass_eV * R * delta_phi * (1.0 + mR) / nb.mass_eV;
    } else {
        xi = 1.0 - s * s * s;
    }
    xi = std::min(1.0, std::max(0.0, xi));
    return ScreeningResult{s * body.radius_m, xi, true};
}

double field_profile(const SphereBody& body, const ChameleonModel& model,
                     const BackgroundState& bg, double r_m) {
    if (r_m < 0.0) throw validation_error("field_profile: r must be non-negative");
    const ScreeningResult scr = screening_radius(body, model, bg);
    const NaturalBody nb = to_natural(body, model);
    const double R = nb.radius_inv_eV;
    const double r = units::length_to_natural(r_m);
    const double mR = bg.mass_eV * R;
    const double M = model.coupling_mass_eV;

    if (scr.screened) {
        const double S = units::length_to_natural(scr.screening_radius_m);
        // Transition layer, with the cubic factored as (r - S)^2 (r + 2S) so
        // the heavily screened regime keeps its digits.
        auto layer = [&](double rr) {
            const double d = rr - S;
            return nb.field_eV +
                   nb.mass_eV / (8.0 * M_PI * R * M) * d * d * (rr + 2.0 * S) / (rr * R * R);
        };
        if (r < S) return nb.field_eV;
        if (r < R) return layer(r);
        // Anchoring the exterior amplitude on the matched surface value keeps
        // phi(R) exact even when it is orders of magnitude below phi_bg.
        const double surface_deficit = bg.field_eV - layer(R);
        return bg.field_eV - surface_deficit * (R / r) * std::exp(-bg.mass_eV * (r - R));
    }

    // No thin shell: the exterior keeps the full xi = 1 Yukawa amplitude.
    // Written with the exponential anchored at R so large m_bg R never
    // overflows.
    const double surface_amp = nb.mass_eV / (4.0 * M_PI * M * (1.0 + mR));
    if (r >= R) return bg.field_eV - surface_amp / r * std::exp(-bg.mass_eV * (r - R));
    // The field never reaches its in-body equilibrium; the quadratic branch
    // is anchored by continuity at the surface instead.
    const double centre =
        bg.field_eV - surface_amp / R - nb.mass_eV / (8.0 * M_PI * M * R);
    return centre + nb.mass_eV * r * r / (8.0 * M_PI * M * R * R * R);
}

EffectiveYukawa effective_yukawa(const ChameleonModel& model, const SphereBody& source,
                                 const SphereBody& probe, double rho_bg_kg_m3,
                                 bool include_probe_screening) {
    const BackgroundState bg = background_state(model, rho_bg_kg_m3);
    EffectiveYukawa out{};
    out.source = screening_radius(source, model, bg);
    out.probe = include_probe_screening ? screening_radius(probe, model, bg)
                                        : ScreeningResult{0.0, 1.0, false};
    const double ratio = units::constants().reduced_planck_mass_eV / model.coupling_mass_eV;
    out.alpha = 2.0 * ratio * ratio * out.source.xi * out.probe.xi;
    out.range_m = bg.range_m;
    return out;
}

double screening_onset_energy_scale(const SphereBody& body, double coupling_mass_eV,
                                    double rho_bg_kg_m3) {
    if (!(coupling_mass_eV > 0.0))
        throw validation_error("screening_onset_energy_scale: coupling mass must be positive");
    const double rho_bg = units::density_to_natural(rho_bg_kg_m3);
    const double rho = units::density_to_natural(body.density_kg_m3);
    const double R = units::length_to_natural(body.radius_m);
    const double m3 = coupling_mass_eV * coupling_mass_eV * coupling_mass_eV;
    // rho R^2 = 3 M phi_bg solved for Lambda.
    return std::pow(rho_bg * rho * rho * R * R * R * R / (9.0 * m3), 0.2);
}

}  // namespace modgrav

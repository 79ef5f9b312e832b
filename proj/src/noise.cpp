#include "fluxgate/noise.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fluxgate {

double thermal_occupation(double w, double temperature_mk)
{
    if (temperature_mk <= 0.0 || w <= 0.0) return 0.0;
    const double x = si::hbar * w * 1e9 / (si::kB * temperature_mk * 1e-3);
    return 1.0 / std::expm1(x);
}

void NoiseModel::validate() const
{
    if (!(transmon_tan_delta >= 0.0 && fluxonium_tan_delta_ref >= 0.0))
        throw std::invalid_argument("noise: loss tangents must be nonnegative");
    if (!(omega_ref_ghz > 0.0)) throw std::invalid_argument("noise: omega_ref must be positive");
    if (!(temperature_mk >= 0.0)) throw std::invalid_argument("noise: temperature must be nonnegative");
}

double NoiseModel::fluxonium_tan_delta(double omega_ghz) const
{
    return fluxonium_tan_delta_ref * std::pow(omega_ghz / omega_ref_ghz, fluxonium_tan_delta_exponent);
}

double JumpOperatorSet::rate_per_us(JumpKind kind, int upper, int lower) const
{
    for (const Jump& j : jumps)
        if (j.kind == kind && j.upper == upper && j.lower == lower) return j.rate_per_us;
    return 0.0;
}

double JumpOperatorSet::t1_us(int upper, int lower) const
{
    const double g = rate_per_us(JumpKind::down, upper, lower);
    return g > 0.0 ? 1.0 / g : std::numeric_limits<double>::infinity();
}

JumpOperatorSet dielectric_jump_operators(const RealVector& energies_ghz, const RealMatrix& phi_elements,
                                          const std::function<double(double)>& tan_delta, double ec_ghz,
                                          double temperature_mk)
{
    const int n = static_cast<int>(energies_ghz.size());
    JumpOperatorSet set;
    set.dim = n;
    const double ec = ghz_to_rad(ec_ghz);
    for (int k = 1; k < n; ++k)
        for (int l = 0; l < k; ++l) {
            const double f = energies_ghz(k) - energies_ghz(l);
            if (!(f > 0.0)) continue;
            const double w = ghz_to_rad(f);
            const double phi = phi_elements(k, l);
            const double gamma = w * w * phi * phi * tan_delta(f) / (4.0 * ec);  // 1/ns
            const double nbar = thermal_occupation(w, temperature_mk);
            RealMatrix down = RealMatrix::Zero(n, n), up = RealMatrix::Zero(n, n);
            down(l, k) = 1.0;
            up(k, l) = 1.0;
            set.jumps.push_back({down, 1e3 * gamma * (1.0 + nbar), JumpKind::down, k, l});
            set.jumps.push_back({up, 1e3 * gamma * nbar, JumpKind::up, k, l});
        }
    return set;
}

JumpOperatorSet dielectric_jump_operators(const FluxoniumSpectrum& f, const NoiseModel& noise)
{
    noise.validate();
    return dielectric_jump_operators(
        f.energies_ghz, f.phi_elements, [&](double ghz) { return noise.fluxonium_tan_delta(ghz); },
        f.params.ec_ghz, noise.temperature_mk);
}

JumpOperatorSet dielectric_jump_operators(const TransmonParams& t, const NoiseModel& noise)
{
    noise.validate();
    RealVector e(t.n_levels);
    for (int k = 0; k < t.n_levels; ++k) e(k) = t.omega_ghz * k + 0.5 * t.delta_ghz * k * (k - 1);
    const RealMatrix phi = transmon_flux_operator(t).matrix().real();
    return dielectric_jump_operators(
        e, phi, [&](double) { return noise.transmon_tan_delta; }, t.ec_ghz(), noise.temperature_mk);
}

} // namespace fluxgate

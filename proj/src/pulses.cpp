#include "fluxgate/pulses.h"

#include <cmath>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "fluxgate/errors.h"
#include "fluxgate/schrieffer_wolff.h"

namespace fluxgate {

void PulseSpec::validate() const
{
    if (!(t_rise_ns >= 0.0)) throw std::invalid_argument("pulse: t_rise must be nonnegative");
    if (envelope == Envelope::piecewise_gaussian && !(t_pulse_ns >= 2.0 * t_rise_ns))
        throw std::invalid_argument("pulse: t_pulse must be >= 2 t_rise");
    if (!(t_pulse_ns >= 0.0)) throw std::invalid_argument("pulse: t_pulse must be nonnegative");
}

double PulseSpec::sigma_ns() const { return t_rise_ns / std::sqrt(two_pi); }

std::array<double, 4> PulseSpec::breakpoints() const
{
    if (envelope == Envelope::constant) return {0.0, 0.0, t_pulse_ns, t_pulse_ns};
    return {0.0, t_rise_ns, t_pulse_ns - t_rise_ns, t_pulse_ns};
}

PulseSpec EchoSpec::second_half() const
{
    PulseSpec p = half_pulse;
    p.eps_d_mhz = -p.eps_d_mhz;
    return p;
}

PulseSpec CPhaseDriveSolution::pulse(double theta_d) const
{
    return {eps_d_mhz, omega_d_ghz, theta_d, t_rise_ns, t_pulse_ns, Envelope::piecewise_gaussian};
}

double gaussian_envelope(double t, const PulseSpec& spec)
{
    const double tr = spec.t_rise_ns, tp = spec.t_pulse_ns;
    if (t < 0.0 || t > tp) return 0.0;
    if (tr <= 0.0) return 1.0;
    const double s2 = 2.0 * spec.sigma_ns() * spec.sigma_ns();
    const double floor = std::exp(-tr * tr / s2);
    auto edge = [&](double u) { return (std::exp(-u * u / s2) - floor) / (1.0 - floor); };
    if (t < tr) return edge(t - tr);
    if (t < tp - tr) return 1.0;
    return edge(t - (tp - tr));
}

double envelope(double t, const PulseSpec& spec)
{
    if (spec.envelope == Envelope::constant) return (t >= 0.0 && t <= spec.t_pulse_ns) ? 1.0 : 0.0;
    return gaussian_envelope(t, spec);
}

double rise_integral_ns(double tr)
{
    if (tr <= 0.0) return 0.0;
    // int_0^tr exp(-(t - tr)^2 / 2 s^2) dt = s sqrt(pi/2) erf(tr / (s sqrt 2)), s = tr / sqrt(2 pi)
    const double s = tr / std::sqrt(two_pi);
    const double floor = std::exp(-tr * tr / (2.0 * s * s));
    const double gauss = s * std::sqrt(pi / 2.0) * std::erf(tr / (s * std::sqrt(2.0)));
    return (gauss - tr * floor) / (1.0 - floor);
}

double envelope_integral_ns(const PulseSpec& spec)
{
    if (spec.envelope == Envelope::constant) return spec.t_pulse_ns;
    return spec.t_pulse_ns - 2.0 * spec.t_rise_ns + 2.0 * rise_integral_ns(spec.t_rise_ns);
}

double pulse_length_for_integral(double target, double tr, Envelope env)
{
    if (env == Envelope::constant) return target;
    const double edges = 2.0 * rise_integral_ns(tr);
    if (target < edges)
        throw PhysicsError("pulses", "envelope integral " + std::to_string(target) +
                                         " ns is below the minimum of two edges (" + std::to_string(edges) + " ns)");
    return target + 2.0 * tr - edges;
}

Operator drive_hamiltonian(const CoupledSystem& s, const PulseSpec& spec, double t, bool dressed)
{
    const double amp = envelope(t, spec) * mhz_to_rad(spec.eps_d_mhz) *
                       std::cos(ghz_to_rad(spec.omega_d_ghz) * t + spec.theta_d);
    Matrix q = s.fluxonium_charge().matrix();
    if (dressed) {
        const Matrix& w = s.dressed().vectors;
        return {amp * (w.adjoint() * q * w), Basis::dressed};
    }
    return {amp * q, Basis::bare};
}

namespace {

PulseSpec cr_pulse_for_angle(const CoupledSystem& s, double eps_d_mhz, double t_rise_ns, double angle,
                             const CalibrationOptions& opt)
{
    const CrCoefficient c =
        opt.closed_form_rate ? cr_coefficient_tf(s, eps_d_mhz) : cr_coefficient_exact(s, eps_d_mhz);
    if (!(c.mu_cr.rad_per_ns() > 0.0)) throw PhysicsError("pulses", "cross-resonance rate vanishes");
    const double integral = angle / c.mu_cr.rad_per_ns();
    PulseSpec p;
    p.eps_d_mhz = eps_d_mhz;
    p.omega_d_ghz = s.transmon().omega_ghz;
    p.theta_d = c.theta_d;
    p.t_rise_ns = t_rise_ns;
    p.envelope = Envelope::piecewise_gaussian;
    p.t_pulse_ns = pulse_length_for_integral(integral, t_rise_ns, p.envelope);
    if (p.t_pulse_ns > opt.t_pulse_cap_ns) {
        std::ostringstream os;
        os << "calibrated pulse of " << p.t_pulse_ns << " ns exceeds the cap of " << opt.t_pulse_cap_ns
           << " ns (mu_CR/2pi = " << c.mu_cr.mhz() << " MHz)";
        throw PhysicsError("pulses", os.str());
    }
    return p;
}

} // namespace

PulseSpec calibrate_cr_pulse(const CoupledSystem& s, double eps_d_mhz, double t_rise_ns,
                             const CalibrationOptions& opt)
{
    return cr_pulse_for_angle(s, eps_d_mhz, t_rise_ns, pi / 4.0, opt);
}

EchoSpec calibrate_cr_echo(const CoupledSystem& s, double eps_d_mhz, double t_rise_ns,
                           const CalibrationOptions& opt)
{
    return {cr_pulse_for_angle(s, eps_d_mhz, t_rise_ns, pi / 8.0, opt), true};
}

std::array<double, 2> cphase_rabi_frequencies(const CPhaseDriveSolution& sol, double w13_10, double w03_00)
{
    const double wd = ghz_to_rad(sol.omega_d_ghz);
    const double eps = mhz_to_rad(sol.eps_d_mhz);
    const double x1 = w13_10 - wd, x0 = w03_00 - wd;
    return {std::hypot(x0, eps * sol.q0), std::hypot(x1, eps * sol.q1)};
}

CPhaseDriveSolution solve_cphase_drive(const CoupledSystem& s, double target_phi, double t_rise_ns)
{
    if (!(target_phi > 0.0)) throw std::invalid_argument("solve_cphase_drive: target phase must be positive");
    const DressedSpectrum& d = s.dressed();
    const double delta = delta_shift(s).rad_per_ns();
    if (std::abs(delta) < 1e-12) throw PhysicsError("pulses", "Delta vanishes; no conditional phase available");

    const Operator q = s.fluxonium_charge();
    const double q0 = std::abs(dressed_matrix_element(s, q, {0, 0}, {0, 3}));
    const double q1 = std::abs(dressed_matrix_element(s, q, {1, 0}, {1, 3}));
    const double w13_10 = d.energy({1, 3}) - d.energy({1, 0});
    const double w03_00 = d.energy({0, 3}) - d.energy({0, 0});

    const double omega = pi * std::abs(delta) / target_phi;
    auto detuning = [&](double eps) { return (delta * delta - eps * eps * (q1 * q1 - q0 * q0)) / (2.0 * delta); };
    auto mismatch = [&](double eps) {
        const double x = detuning(eps);
        return (eps * eps * q1 * q1 + x * x) / (omega * omega) - 1.0;
    };

    // Bracket in eps, scanning outward from zero.
    const double eps_scale = omega / std::max(q0, q1);
    double lo = 0.0, hi = 0.0, f_lo = mismatch(0.0);
    double f_min = f_lo, f_max = f_lo;
    bool bracketed = false;
    for (int i = 1; i <= 400; ++i) {
        hi = eps_scale * 0.02 * i;
        const double f_hi = mismatch(hi);
        f_min = std::min(f_min, f_hi);
        f_max = std::max(f_max, f_hi);
        if ((f_lo <= 0.0) != (f_hi <= 0.0)) {
            bracketed = true;
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    if (!bracketed) {
        std::ostringstream os;
        os << "no drive amplitude matches Omega/2pi = " << rad_to_mhz(omega) << " MHz; feasible range ["
           << rad_to_mhz(omega * std::sqrt(std::max(0.0, 1.0 + f_min))) << ", "
           << rad_to_mhz(omega * std::sqrt(1.0 + f_max)) << "] MHz";
        throw PhysicsError("pulses", os.str());
    }
    boost::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(mismatch, lo, hi, boost::math::tools::eps_tolerance<double>(50),
                                                        iters);
    const double eps = 0.5 * (root.first + root.second);

    CPhaseDriveSolution sol;
    sol.eps_d_mhz = rad_to_mhz(eps);
    sol.omega_d_ghz = rad_to_ghz(w13_10 - detuning(eps));
    sol.rabi_mhz = rad_to_mhz(omega);
    sol.target_phi = target_phi;
    sol.t_rise_ns = t_rise_ns;
    sol.delta_mhz = rad_to_mhz(delta);
    sol.q0 = q0;
    sol.q1 = q1;
    sol.t_pulse_ns = pulse_length_for_integral(2.0 * target_phi / std::abs(delta), t_rise_ns,
                                               Envelope::piecewise_gaussian);
    return sol;
}

} // namespace fluxgate
